#include "cq/cli.hpp"

#include "cq/verify.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>

namespace cq {

namespace {

using nlohmann::json;

/// Engine inputs assembled from a validated config.
struct Prepared {
    Mapping mapping;
    SchemeSpec spec;
    Vector x0;
    EngineOptions opts;
    StopRule stop;
};

CnStarStrategy parse_cn_star(const std::string& text, int dim) {
    if (text == "Identity") return CnStarIdentity{};
    if (text.rfind("ball:", 0) == 0) {
        double r = 0.0;
        try {
            r = std::stod(text.substr(5));
        } catch (const std::exception&) {
            throw ConfigError("cn_star: bad radius in '" + text + "'");
        }
        if (!(r > 0.0)) throw ConfigError("cn_star: radius must be positive");
        return CnStarIntersectBall{Vector::Zero(dim), r};
    }
    throw ConfigError("cn_star: expected 'Identity' or 'ball:R', got '" + text + "'");
}

Prepared prepare(const RunConfig& c) {
    if (c.dim < 1) throw ConfigError("dim: must be >= 1");
    if (c.max_iter < 1) throw ConfigError("max_iter: must be >= 1");
    if (!(c.tol > 0.0)) throw ConfigError("tol: must be positive");

    Mapping t = [&] {
        try {
            return builtin(c.op, c.dim, c.op_params);
        } catch (const std::invalid_argument& e) {
            throw ConfigError("operator: " + std::string(e.what()));
        }
    }();

    SchemeSpec spec;
    try {
        spec.scheme = parse_scheme(c.scheme);
        spec.mode = parse_mode(c.mode);
        if (!c.alpha.empty()) spec.alpha = Schedule::parse(c.alpha);
        if (!c.beta.empty()) spec.beta = Schedule::parse(c.beta);
        if (!c.tau.empty()) spec.tau = Schedule::parse(c.tau);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    spec.cn_star = parse_cn_star(c.cn_star, c.dim);

    Vector x0;
    if (c.x0) {
        if (static_cast<int>(c.x0->size()) != c.dim)
            throw ConfigError("x0: expected " + std::to_string(c.dim) + " coordinates, got " +
                              std::to_string(c.x0->size()));
        x0 = Eigen::Map<const Vector>(c.x0->data(), c.dim);
    } else {
        if (!c.seed) throw ConfigError("seed: required when x0 is drawn at random");
        std::mt19937 gen(*c.seed);
        std::uniform_real_distribution<double> u(-c.x0_radius, c.x0_radius);
        x0.resize(c.dim);
        for (int i = 0; i < c.dim; ++i) x0[i] = u(gen);
    }

    EngineOptions opts;
    opts.seed = c.seed.value_or(7);
    return Prepared{std::move(t), std::move(spec), std::move(x0), opts,
                    StopRule{c.tol, c.max_iter}};
}

json vector_to_json(const Vector& v) {
    json a = json::array();
    for (int i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
}

/// The effective configuration, echoed into every summary for provenance.
/// `resolved` is the engine's spec with defaulted schedules filled in.
json effective_config(const RunConfig& c, const Prepared& p, const SchemeSpec& resolved) {
    json j;
    j["dim"] = c.dim;
    j["operator"] = {{"name", c.op}, {"params", c.op_params}};
    j["scheme"] = scheme_name(resolved.scheme);
    j["mode"] = mode_name(resolved.mode);
    j["schedules"] = {{"alpha", resolved.alpha.describe()},
                      {"beta", resolved.beta.describe()},
                      {"tau", resolved.tau.describe()}};
    j["x0"] = vector_to_json(p.x0);
    j["tol"] = c.tol;
    j["max_iter"] = c.max_iter;
    if (c.seed) j["seed"] = *c.seed;
    j["cn_star"] = c.cn_star;
    j["out"] = c.out_dir;
    return j;
}

int exit_code(Terminal t) {
    switch (t) {
        case Terminal::Converged: return kExitConverged;
        case Terminal::MaxIterations: return kExitMaxIterations;
        case Terminal::Infeasible: return kExitInfeasible;
        case Terminal::AssertionFailed: return kExitAssertionFailed;
    }
    return kExitConfigError;
}

std::ofstream open_out(const std::string& dir, const std::string& file) {
    std::filesystem::create_directories(dir);
    std::filesystem::path path = std::filesystem::path(dir) / file;
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path.string());
    return out;
}

}  // namespace

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config parse error in '" + path + "': " + e.what());
    }
    RunConfig c;
    try {
        if (j.contains("dim")) c.dim = j.at("dim").get<int>();
        if (j.contains("operator")) {
            const json& op = j.at("operator");
            c.op = op.at("name").get<std::string>();
            if (op.contains("params"))
                c.op_params = op.at("params").get<std::map<std::string, double>>();
        }
        if (j.contains("scheme")) c.scheme = j.at("scheme").get<std::string>();
        if (j.contains("mode")) c.mode = j.at("mode").get<std::string>();
        if (j.contains("schedules")) {
            const json& s = j.at("schedules");
            if (s.contains("alpha")) c.alpha = s.at("alpha").get<std::string>();
            if (s.contains("beta")) c.beta = s.at("beta").get<std::string>();
            if (s.contains("tau")) c.tau = s.at("tau").get<std::string>();
        }
        if (j.contains("x0")) {
            const json& x = j.at("x0");
            if (x.is_array()) {
                c.x0 = x.get<std::vector<double>>();
            } else if (x.is_object() && x.contains("random")) {
                if (x.at("random").contains("radius"))
                    c.x0_radius = x.at("random").at("radius").get<double>();
            } else {
                throw ConfigError("x0: expected coordinate array or {\"random\":{...}}");
            }
        }
        if (j.contains("tol")) c.tol = j.at("tol").get<double>();
        if (j.contains("max_iter")) c.max_iter = j.at("max_iter").get<int>();
        if (j.contains("seed")) c.seed = j.at("seed").get<unsigned>();
        if (j.contains("out")) c.out_dir = j.at("out").get<std::string>();
        if (j.contains("cn_star")) c.cn_star = j.at("cn_star").get<std::string>();
    } catch (const json::exception& e) {
        throw ConfigError("config field error in '" + path + "': " + e.what());
    }
    return c;
}

int cmd_run(const RunConfig& config, std::ostream& log) {
    Prepared p = prepare(config);
    Engine engine(p.spec, p.mapping, p.opts);
    RunResult result = engine.run(p.x0, p.stop);

    {
        std::ofstream csv = open_out(config.out_dir, "run.csv");
        write_run_csv(result, csv);
    }

    json summary;
    summary["config"] = effective_config(config, p, engine.spec());
    summary["operator_class"] = p.mapping.cls().describe();
    summary["terminal"] = terminal_name(result.terminal);
    summary["iterations"] = result.iterations;
    summary["limit"] = vector_to_json(result.limit);
    summary["target"] = vector_to_json(result.target);
    summary["limit_to_target"] = (result.limit - result.target).norm();
    if (!result.records.empty()) {
        const StepRecord& last = result.records.back();
        summary["final_residual"] = last.residual;
        summary["final_theta"] = last.theta_val;
    }
    if (!result.detail.empty()) summary["detail"] = result.detail;
    {
        std::ofstream out = open_out(config.out_dir, "summary.json");
        out << summary.dump(2) << "\n";
    }

    log << scheme_name(p.spec.scheme) << " on " << p.mapping.describe() << ": "
        << terminal_name(result.terminal) << " after " << result.iterations
        << " iterations, |limit - target| = " << (result.limit - result.target).norm() << "\n";
    return exit_code(result.terminal);
}

int cmd_verify(const std::string& suite, unsigned seed, double fault_offset, std::ostream& log) {
    std::vector<SuiteReport> reports;
    if (suite == "lemmas" || suite == "all") {
        auto r = verify_lemmas(seed, 1000, fault_offset);
        reports.insert(reports.end(), r.begin(), r.end());
    }
    if (suite == "projection" || suite == "all") {
        auto r = verify_projection(seed);
        reports.insert(reports.end(), r.begin(), r.end());
    }
    if (suite == "operators" || suite == "all") {
        auto r = verify_operators(seed);
        reports.insert(reports.end(), r.begin(), r.end());
    }
    if (reports.empty())
        throw ConfigError("verify: unknown suite '" + suite +
                          "' (expected lemmas, projection, operators, or all)");
    log << format_reports(reports);
    for (const auto& r : reports)
        if (!r.pass()) return kExitVerifyFailed;
    return 0;
}

int cmd_compare(const RunConfig& config, std::ostream& log) {
    Prepared p = prepare(config);
    ComparisonReport rep = compare_modes(p.spec, p.mapping, p.x0, p.stop, p.opts);

    std::ofstream csv = open_out(config.out_dir, "compare.csv");
    csv << "# cq-compare-csv v1\n";
    csv << "mode,terminal,iterations,limit_to_target,dist_to_CQ,dist_to_MonotoneC,"
           "dist_to_MonotoneQ,dist_to_MonotoneCQ\n";
    csv << std::setprecision(17);
    for (std::size_t i = 0; i < rep.runs.size(); ++i) {
        const ModeRun& mr = rep.runs[i];
        csv << mode_name(mr.mode) << ',' << terminal_name(mr.result.terminal) << ','
            << mr.result.iterations << ','
            << (mr.result.limit - mr.result.target).norm();
        for (std::size_t jj = 0; jj < rep.runs.size(); ++jj)
            csv << ',' << rep.limit_distance[i][jj];
        csv << '\n';
    }

    log << "mode comparison (" << scheme_name(p.spec.scheme) << " on " << p.mapping.describe()
        << ")\n";
    for (std::size_t i = 0; i < rep.runs.size(); ++i) {
        const ModeRun& mr = rep.runs[i];
        log << "  " << mode_name(mr.mode) << ": " << terminal_name(mr.result.terminal) << " in "
            << mr.result.iterations
            << " iters, |limit - target| = " << (mr.result.limit - mr.result.target).norm()
            << "\n";
    }
    log << "  worst pairwise limit distance = " << rep.worst_pairwise << "\n";
    if (std::holds_alternative<CnStarIdentity>(p.spec.cn_star))
        log << "  MonotoneC vs MonotoneCQ sequence gap = " << rep.monotone_c_cq_sequence_gap
            << "\n";
    return rep.agree(1e-5) ? 0 : kExitVerifyFailed;
}

}  // namespace cq
