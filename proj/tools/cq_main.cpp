#include "cq/cli.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

namespace {

struct Overrides {
    std::optional<std::string> scheme, op, mode, alpha, beta, tau, out, cn_star;
    std::optional<int> dim, max_iter;
    std::optional<double> tol;
    std::optional<unsigned> seed;
    std::optional<std::vector<double>> x0;
    std::vector<std::string> params;
};

void add_common_flags(CLI::App* cmd, std::string& config_path, Overrides& ov) {
    cmd->add_option("--config", config_path, "JSON config file");
    cmd->add_option("--scheme", ov.scheme, "iteration scheme name");
    cmd->add_option("--operator", ov.op, "builtin operator name");
    cmd->add_option("--dim", ov.dim, "ambient dimension");
    cmd->add_option("--mode", ov.mode, "CQ, MonotoneC, MonotoneQ, or MonotoneCQ");
    cmd->add_option("--alpha", ov.alpha, "alpha schedule, e.g. const:0.5");
    cmd->add_option("--beta", ov.beta, "beta schedule");
    cmd->add_option("--tau", ov.tau, "tau schedule");
    cmd->add_option("--tol", ov.tol, "residual stopping tolerance");
    cmd->add_option("--max-iter", ov.max_iter, "iteration cap");
    cmd->add_option("--seed", ov.seed, "seed for randomized fields");
    cmd->add_option("--out", ov.out, "output directory");
    cmd->add_option("--x0", ov.x0, "explicit start point coordinates");
    cmd->add_option("--cn-star", ov.cn_star, "Identity or ball:R");
    cmd->add_option("--param", ov.params, "operator parameter key=value (repeatable)");
}

cq::RunConfig assemble(const std::string& config_path, const Overrides& ov) {
    cq::RunConfig c;
    if (!config_path.empty()) c = cq::load_config(config_path);
    if (ov.scheme) c.scheme = *ov.scheme;
    if (ov.op) c.op = *ov.op;
    if (ov.mode) c.mode = *ov.mode;
    if (ov.alpha) c.alpha = *ov.alpha;
    if (ov.beta) c.beta = *ov.beta;
    if (ov.tau) c.tau = *ov.tau;
    if (ov.out) c.out_dir = *ov.out;
    if (ov.cn_star) c.cn_star = *ov.cn_star;
    if (ov.dim) c.dim = *ov.dim;
    if (ov.max_iter) c.max_iter = *ov.max_iter;
    if (ov.tol) c.tol = *ov.tol;
    if (ov.seed) c.seed = *ov.seed;
    if (ov.x0) c.x0 = *ov.x0;
    for (const std::string& kv : ov.params) {
        auto pos = kv.find('=');
        if (pos == std::string::npos)
            throw cq::ConfigError("--param: expected key=value, got '" + kv + "'");
        try {
            c.op_params[kv.substr(0, pos)] = std::stod(kv.substr(pos + 1));
        } catch (const std::exception&) {
            throw cq::ConfigError("--param: bad numeric value in '" + kv + "'");
        }
    }
    return c;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Generalized CQ fixed-point solver"};
    app.require_subcommand(1);

    std::string run_config, compare_config;
    Overrides run_ov, compare_ov;
    CLI::App* run = app.add_subcommand("run", "execute one configured run");
    add_common_flags(run, run_config, run_ov);
    CLI::App* compare = app.add_subcommand("compare", "run all four modes and compare limits");
    add_common_flags(compare, compare_config, compare_ov);

    std::string suite = "all";
    unsigned verify_seed = 7;
    double fault_offset = 0.0;
    CLI::App* verify = app.add_subcommand("verify", "run property suites");
    verify->add_option("--suite", suite, "lemmas, projection, operators, or all");
    verify->add_option("--seed", verify_seed, "suite seed");
    verify->add_option("--fault-offset", fault_offset,
                       "corrupt every lemma-suite cut offset by this amount");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cq::cmd_run(assemble(run_config, run_ov), std::cout);
        if (compare->parsed())
            return cq::cmd_compare(assemble(compare_config, compare_ov), std::cout);
        return cq::cmd_verify(suite, verify_seed, fault_offset, std::cout);
    } catch (const cq::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return cq::kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return cq::kExitConfigError;
    }
}
