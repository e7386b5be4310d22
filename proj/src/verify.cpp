#include "cq/verify.hpp"

#include "cq/cuts.hpp"
#include "cq/operators.hpp"
#include "cq/projection.hpp"

#include <cmath>
#include <functional>
#include <random>
#include <sstream>

namespace cq {

namespace {

constexpr double kSlackTol = 1e-9;

void note_violation(SuiteReport& rep, const std::string& what) {
    ++rep.violations;
    if (rep.failures.size() < 8) rep.failures.push_back(what);
}

/// Records min slack; counts a violation when it dips below -kSlackTol.
void check_slack(SuiteReport& rep, double slack, const std::string& what) {
    ++rep.checks;
    if (slack < rep.worst_slack) rep.worst_slack = slack;
    if (slack < -kSlackTol) note_violation(rep, what);
}

struct LemmaCase {
    std::string id;
    std::function<Mapping(int dim)> mapping;
    /// Fills schedule fields of ctx from the rng; returns false to skip a draw.
    std::function<void(CutContext&, std::mt19937&)> params;
    std::function<Cut(CutContext&)> builder;
    bool has_star = true;
};

double uni(std::mt19937& g, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(g);
}

Vector random_point(std::mt19937& g, int dim, double radius) {
    Vector x(dim);
    for (int i = 0; i < dim; ++i) x[i] = uni(g, -radius, radius);
    return x;
}

std::vector<LemmaCase> lemma_cases() {
    const double pi = std::acos(-1.0);
    auto rot = [pi](int dim) {
        return builtin("rotation", dim, {{"theta", pi / 3.0}});
    };
    auto pc = [](int dim) { return builtin("i_minus_rot90", dim); };
    auto strict = [](int dim) { return builtin("scale", dim, {{"a", -2.0}}); };

    std::vector<LemmaCase> cases;
    cases.push_back({"mann_nonexpansive", rot,
                     [](CutContext& c, std::mt19937& g) { c.alpha = uni(g, 0.05, 1.0); },
                     [](CutContext& c) { return cut_mann_nonexpansive(c); }});
    cases.push_back({"5.1", pc,
                     [](CutContext& c, std::mt19937& g) {
                         double amax = 1.0 / (c.lipschitz() + 1.0);
                         c.alpha = uni(g, 0.02, 0.95 * amax);
                         c.tau = uni(g, 0.1, 1.0);
                     },
                     [](CutContext& c) { return cut_mann_pc_inner(c); }});
    cases.push_back({"5.2", pc,
                     [](CutContext& c, std::mt19937& g) {
                         double amax = 1.0 / (c.lipschitz() + 1.0);
                         c.alpha = uni(g, 0.02, 0.95 * amax);
                         c.tau = uni(g, 0.1, 1.0);
                     },
                     [](CutContext& c) { return cut_mann_pc_norm(c); }});
    cases.push_back({"5.3", strict,
                     [](CutContext& c, std::mt19937& g) { c.alpha = uni(g, 0.05, 1.0); },
                     [](CutContext& c) { return cut_mann_strict_pc(c); }});
    cases.push_back({"6.1", pc,
                     [](CutContext& c, std::mt19937& g) {
                         double l = c.lipschitz();
                         double amax = 1.0 / (std::sqrt(1.0 + l * l) + 1.0);
                         c.alpha = uni(g, 0.02, 0.95 * amax);
                         c.beta = uni(g, 0.01, c.alpha);
                     },
                     [](CutContext& c) { return cut_ishikawa_pc(c); }});
    cases.push_back({"6.2", strict,
                     [](CutContext& c, std::mt19937& g) {
                         double k = c.kappa(), l = c.lipschitz();
                         double amax = 2.0 / (std::sqrt(4.0 * k * l * l + (k + 1.0) * (k + 1.0)) +
                                              (k + 1.0));
                         c.alpha = uni(g, 0.02, 0.95 * amax);
                         c.beta = uni(g, 0.01, k * c.alpha + (1.0 - k));
                     },
                     [](CutContext& c) { return cut_ishikawa_strict_pc(c); }});
    cases.push_back({"6.3", rot,
                     [](CutContext& c, std::mt19937& g) {
                         c.alpha = uni(g, 0.0, 0.8);
                         c.beta = uni(g, 0.2, 1.0);
                     },
                     [](CutContext& c) {
                         return cut_ishikawa_nonexpansive(c, IshikawaNonexpRegime::ThetaBound);
                     }});
    cases.push_back({"6.4", rot,
                     [](CutContext& c, std::mt19937& g) {
                         c.alpha = uni(g, 0.0, 0.3);
                         double lo = c.alpha / (1.0 - c.alpha) + 0.05;
                         c.beta = uni(g, std::min(lo, 0.99), 1.0);
                     },
                     [](CutContext& c) {
                         return cut_ishikawa_nonexpansive(c, IshikawaNonexpRegime::NormBound);
                     }});
    cases.push_back({"7.1", rot,
                     [](CutContext& c, std::mt19937& g) { c.anchor_weight = uni(g, 0.0, 1.0); },
                     [](CutContext& c) { return cut_halpern_pc(c); },
                     /*has_star=*/false});
    cases.push_back({"7.2", strict,
                     [](CutContext& c, std::mt19937& g) { c.anchor_weight = uni(g, 0.0, 1.0); },
                     [](CutContext& c) { return cut_halpern_strict_pc(c); }});
    cases.push_back({"7.3", rot,
                     [](CutContext& c, std::mt19937& g) {
                         c.anchor_weight = uni(g, 0.05, 0.95);
                     },
                     [](CutContext& c) { return cut_halpern_nonexpansive(c); }});
    return cases;
}

}  // namespace

std::vector<SuiteReport> verify_lemmas(unsigned seed, int samples_per_lemma, double fault) {
    std::vector<SuiteReport> out;
    std::mt19937 gen(seed);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    std::function<double()> unit = [&] { return u01(gen); };

    // Generic residual bound with mu = L + 1 at fixed points.
    {
        SuiteReport rep;
        rep.name = "2.7";
        Mapping t = builtin("rotation", 2, {{"theta", std::acos(-1.0) / 3.0}});
        double mu = t.cls().lipschitz() + 1.0;
        for (int i = 0; i < samples_per_lemma; ++i) {
            Vector x = random_point(gen, 2, 3.0);
            CutContext ctx = CutContext::make(t, x, Vector::Zero(2));
            Vector z = sample_fixed_point(t, unit);
            ++rep.samples;
            ++rep.checks;
            if (!star_membership("2.7", ctx, z, kSlackTol, mu, 0.0))
                note_violation(rep, "generic bound failed at a fixed point");
        }
        out.push_back(std::move(rep));
    }

    for (const LemmaCase& lc : lemma_cases()) {
        SuiteReport rep;
        rep.name = lc.id;
        for (int i = 0; i < samples_per_lemma; ++i) {
            int dim = (i % 2 == 0) ? 2 : 5;
            Mapping t = lc.mapping(dim);
            Vector x = random_point(gen, dim, 3.0);
            Vector x0 = random_point(gen, dim, 3.0);
            CutContext ctx = CutContext::make(t, x, x0);
            lc.params(ctx, gen);
            Cut cut = lc.builder(ctx);
            for (auto& hs : cut.halfspaces) hs.b += fault;
            ++rep.samples;

            // F(T) subset of C_x.
            Vector p = sample_fixed_point(t, unit);
            for (const auto& hs : cut.halfspaces) {
                double scale = 1.0 + hs.a.norm() * (1.0 + p.norm()) + std::abs(hs.b);
                check_slack(rep, -hs.violation(p) / scale,
                            lc.id + ": fixed point outside C_x");
            }

            // C_x subset of *C_x on a random member.
            if (lc.has_star) {
                Vector z = random_point(gen, dim, 5.0);
                bool inside = true;
                for (const auto& hs : cut.halfspaces)
                    if (!hs.contains(z)) inside = false;
                if (inside) {
                    ++rep.checks;
                    if (!star_membership(lc.id == "mann_nonexpansive" ? "2.7" : lc.id, ctx, z,
                                         kSlackTol, 2.0 / ctx.alpha, 0.0))
                        note_violation(rep, lc.id + ": member of C_x escaped *C_x");
                }
            }
        }
        out.push_back(std::move(rep));
    }
    return out;
}

std::vector<SuiteReport> verify_projection(unsigned seed, int problems) {
    std::mt19937 gen(seed);
    const int dims[] = {2, 5, 10};

    SuiteReport random_rep;
    random_rep.name = "projection_random_vs_oracle";
    SuiteReport cert_rep;
    cert_rep.name = "projection_certificate";
    SuiteReport two_rep;
    two_rep.name = "projection_two_halfspace_exact";

    auto random_problem = [&](int dim, int count) {
        // Built around a witness point so the intersection is nonempty.
        Vector w = random_point(gen, dim, 2.0);
        ProjectionProblem p;
        p.anchor = random_point(gen, dim, 4.0);
        for (int k = 0; k < count; ++k) {
            Vector a = random_point(gen, dim, 1.0);
            if (a.norm() < 1e-3) a[0] += 1.0;
            double b = a.dot(w) + uni(gen, 0.0, 1.0);
            p.halfspaces.push_back(Halfspace{std::move(a), b});
        }
        return p;
    };

    for (int i = 0; i < problems; ++i) {
        int dim = dims[i % 3];
        int count = 2 + static_cast<int>(uni(gen, 0.0, 6.999));
        ProjectionProblem p = random_problem(dim, count);
        ++random_rep.samples;
        ProjectionResult main = project_intersection(p);
        Vector oracle = oracle_project(p);
        check_slack(random_rep, 1e-6 - (main.point - oracle).norm(),
                    "main solver disagrees with oracle beyond 1e-6");

        ++cert_rep.samples;
        double cert = vi_certificate(p, main.point, 100, seed + 17 * i);
        ++cert_rep.checks;
        if (cert > 1e-8) note_violation(cert_rep, "optimality certificate above 1e-8");
        if (-cert < cert_rep.worst_slack) cert_rep.worst_slack = -cert;
    }

    for (int i = 0; i < problems; ++i) {
        int dim = dims[i % 3];
        ProjectionProblem p = random_problem(dim, 2);
        ++two_rep.samples;
        ProjectionResult main = project_intersection(p);
        Vector oracle = oracle_project(p);
        check_slack(two_rep, 1e-8 - (main.point - oracle).norm(),
                    "two-halfspace exact path disagrees with oracle beyond 1e-8");
    }

    return {std::move(random_rep), std::move(cert_rep), std::move(two_rep)};
}

std::vector<SuiteReport> verify_operators(unsigned seed, int samples) {
    std::vector<SuiteReport> out;
    std::mt19937 gen(seed);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    std::function<double()> unit = [&] { return u01(gen); };

    for (const std::string& name : builtin_names()) {
        std::map<std::string, double> params;
        if (name == "rotation") params["theta"] = std::acos(-1.0) / 3.0;
        if (name == "scale") params["a"] = -2.0;
        for (int dim : {2, 5}) {
            Mapping t = builtin(name, dim, params);
            SuiteReport rep;
            rep.name = name + "_d" + std::to_string(dim);
            ClassReport cls = verify_class(t, samples, seed + dim);
            rep.samples = cls.samples;
            rep.checks = cls.samples;
            rep.violations = cls.violations;
            rep.worst_slack = cls.worst_slack;
            if (!cls.pass) rep.failures.push_back(cls.detail);

            // Projection onto F(T) must satisfy the variational inequality
            // against sampled fixed points.
            for (int i = 0; i < 100; ++i) {
                Vector x = random_point(gen, dim, 3.0);
                Vector p = project_fixed_set(t, x);
                Vector y = sample_fixed_point(t, unit);
                check_slack(rep, -( (x - p).dot(y - p) ),
                            name + ": fixed-set projection optimality");
            }
            out.push_back(std::move(rep));
        }
    }
    return out;
}

std::string format_reports(const std::vector<SuiteReport>& reports) {
    std::ostringstream os;
    for (const auto& r : reports) {
        os << (r.pass() ? "PASS" : "FAIL") << "  " << r.name << "  samples=" << r.samples
           << " checks=" << r.checks << " violations=" << r.violations
           << " worst_slack=" << r.worst_slack << "\n";
        for (const auto& f : r.failures) os << "      " << f << "\n";
    }
    return os.str();
}

}  // namespace cq
