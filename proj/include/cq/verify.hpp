#pragma once

#include <string>
#include <vector>

namespace cq {

/// Outcome of one property suite (one lemma id, one projection batch, one
/// operator), aggregated over seeded samples.
struct SuiteReport {
    std::string name;
    int samples = 0;
    int checks = 0;
    int violations = 0;
    /// Most negative slack seen across all inequalities (0 when none dipped
    /// below zero); magnitudes beyond the suite tolerance count as violations.
    double worst_slack = 0.0;
    std::vector<std::string> failures;

    bool pass() const { return violations == 0; }
};

/// Containment suites: F(T) in C_x for every cut builder, and C_x in *C_x
/// where the construction states it. `fault` is added to every cut offset
/// (use -1.0 to prove the suite detects corruption).
std::vector<SuiteReport> verify_lemmas(unsigned seed, int samples_per_lemma = 1000,
                                       double fault = 0.0);

/// Random polyhedral problems: main solver vs oracle, optimality certificate,
/// and the exact two-halfspace path.
std::vector<SuiteReport> verify_projection(unsigned seed, int problems = 200);

/// Declared-class verification and fixed-set projection optimality for every
/// builtin mapping.
std::vector<SuiteReport> verify_operators(unsigned seed, int samples = 500);

std::string format_reports(const std::vector<SuiteReport>& reports);

}  // namespace cq
