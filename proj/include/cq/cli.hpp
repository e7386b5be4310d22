#pragma once

#include "cq/engine.hpp"

#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace cq {

/// Everything a run needs, loadable from a JSON config file; command-line
/// flags override individual fields. Every field has a documented default.
struct RunConfig {
    int dim = 2;
    std::string op = "reflection";
    std::map<std::string, double> op_params;
    std::string scheme = "CqMann";
    std::string mode = "CQ";
    std::string alpha;  // schedule text like "const:0.5"; empty = scheme default
    std::string beta;
    std::string tau;
    /// Explicit start point; when absent, x_0 is drawn uniformly from
    /// [-x0_radius, x0_radius]^dim, which makes the seed mandatory.
    std::optional<std::vector<double>> x0;
    double x0_radius = 3.0;
    double tol = 1e-8;
    int max_iter = 10000;
    std::optional<unsigned> seed;
    std::string out_dir = ".";
    /// "Identity" or "ball:R" (origin-centered certified ball of radius R).
    std::string cn_star = "Identity";
};

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

RunConfig load_config(const std::string& path);

/// Exit codes, one per terminal state plus config failure.
inline constexpr int kExitConverged = 0;
inline constexpr int kExitConfigError = 1;
inline constexpr int kExitMaxIterations = 2;
inline constexpr int kExitInfeasible = 3;
inline constexpr int kExitAssertionFailed = 4;
inline constexpr int kExitVerifyFailed = 5;

/// Executes one run; writes run.csv and summary.json under out_dir.
int cmd_run(const RunConfig& config, std::ostream& log);

/// suite in {lemmas, projection, operators, all}. fault_offset != 0 corrupts
/// every cut offset in the lemma suite to prove the checks have teeth.
int cmd_verify(const std::string& suite, unsigned seed, double fault_offset, std::ostream& log);

/// Runs all four modes on the config's cut construction; writes compare.csv.
int cmd_compare(const RunConfig& config, std::ostream& log);

}  // namespace cq
