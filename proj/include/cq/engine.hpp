#pragma once

#include "cq/cuts.hpp"
#include "cq/operators.hpp"
#include "cq/projection.hpp"
#include "cq/schedule.hpp"
#include "cq/space.hpp"

#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace cq {

enum class SchemeId {
    CqMann,
    MannPcInner,
    MannPcNorm,
    MannStrictPc,
    MannNonexpStrict,
    IshikawaPc,
    IshikawaPcConj,
    IshikawaStrictPc,
    IshikawaStrictPcConj,
    IshikawaNonexpA,
    IshikawaNonexpB,
    IshikawaNonexpC,
    IshikawaNonexpConj,
    HalpernPcConj,
    HalpernStrictPc,
    HalpernStrictPcConj,
    HalpernNonexpDeduced,
    HalpernNonexp,
};

enum class Mode { CQ, MonotoneC, MonotoneQ, MonotoneCQ };

SchemeId parse_scheme(const std::string& name);
std::string scheme_name(SchemeId id);
std::vector<std::string> scheme_names();

Mode parse_mode(const std::string& name);
std::string mode_name(Mode mode);

struct SchemeSpec {
    SchemeId scheme = SchemeId::CqMann;
    Mode mode = Mode::CQ;
    Schedule alpha;  // primary relaxation; Halpern anchor weight for the
                     // standalone Halpern schemes
    Schedule beta;   // Ishikawa inner weight; Halpern anchor weight in the
                     // conjunction schemes
    Schedule tau;
    CnStarStrategy cn_star = CnStarIdentity{};
};

/// Scheme with its documented default schedules filled in.
SchemeSpec default_spec(SchemeId id);

/// Throws std::invalid_argument when the mapping's declared class does not
/// satisfy the scheme's operator requirement.
void require_compatible(const SchemeSpec& spec, const Mapping& t);

struct StopRule {
    double tol = 1e-8;
    int max_iter = 10000;
};

enum class Terminal { Converged, MaxIterations, Infeasible, AssertionFailed };
std::string terminal_name(Terminal t);

struct StepRecord {
    int n = 0;
    Vector x;   // x_n
    Vector tx;  // T x_n
    Vector v;   // Ishikawa inner point or Halpern anchor point (empty if unused)
    Vector y;   // cut evaluation point (empty if unused)
    double residual = 0.0;        // ||x_n - T x_n||
    double radial = 0.0;          // ||x_n - x_0||
    double step = 0.0;            // ||x_{n+1} - x_n||
    double dist_to_target = 0.0;  // ||x_n - P_{F(T)} x_0||
    double theta_val = 0.0;       // theta_n(x_{n+1})
    double mu = 0.0;
    std::map<std::string, bool> assertions;
};

struct RunResult {
    std::vector<StepRecord> records;
    Terminal terminal = Terminal::MaxIterations;
    Vector limit;
    Vector target;  // P_{F(T)} x_0
    int iterations = 0;
    std::string detail;  // failure context for non-Converged terminals
};

struct EngineOptions {
    bool check_invariants = true;
    bool strict_assertions = true;  // abort the run on first violation
    int fixed_samples = 8;          // sampled fixed points for invariant checks
    unsigned seed = 7;
    int window = 64;  // cap on each accumulated halfspace list
    /// Fault injection for the invariant-suite tests: added to every scheme
    /// cut offset b (negative values tighten the halfspace).
    double cut_offset_fault = 0.0;
    ProjectionOptions projection;
};

/// Mutable loop state; exposed so single steps can be driven from tests.
struct EngineState {
    Vector x0;
    Vector x;
    Vector target;  // P_{F(T)} x_0, fixed for the run
    int n = 0;
    double prev_radial = -1.0;
    std::vector<Halfspace> acc_c;
    std::vector<Halfspace> acc_q;
};

/// Names used in StepRecord::assertions.
namespace checks {
inline constexpr const char* kResidualBound = "residual_bound";
inline constexpr const char* kRadialMonotone = "radial_monotone";
inline constexpr const char* kBoundedByFixed = "bounded_by_fixed";
inline constexpr const char* kFixedInTarget = "fixed_in_target";
inline constexpr const char* kMuLowerBound = "mu_lower_bound";
}  // namespace checks

class Engine {
public:
    Engine(SchemeSpec spec, const Mapping& t, EngineOptions opts = {});

    EngineState init(const Vector& x0) const;

    /// One iteration: build the cut, select C_n*, assemble the mode's target,
    /// project the anchor, check invariants. Returns the completed record;
    /// state advances to x_{n+1}.
    StepRecord step(EngineState& state);

    RunResult run(const Vector& x0, const StopRule& stop = {});

    const SchemeSpec& spec() const { return spec_; }
    const Mapping& mapping() const { return *t_; }
    const std::vector<Vector>& fixed_samples() const { return fixed_points_; }

private:
    struct BuiltCut {
        Cut cut;
        Vector v, y;  // intermediates to log
    };
    BuiltCut build_cut(int n, const Vector& x, const Vector& x0) const;
    void append_windowed(std::vector<Halfspace>& acc, const Halfspace& h) const;

    SchemeSpec spec_;
    const Mapping* t_;
    EngineOptions opts_;
    std::vector<Vector> fixed_points_;
};

/// Re-evaluates checks (a), (b-radial), (d) on a completed record; check (c)
/// needs the projection target and is filled in by the engine during step().
/// prev_radial < 0 means no predecessor.
std::map<std::string, bool> assert_framework(const StepRecord& rec, double prev_radial,
                                             double lipschitz);

struct ModeRun {
    Mode mode = Mode::CQ;
    RunResult result;
};

struct ComparisonReport {
    std::vector<ModeRun> runs;
    /// Pairwise limit distances, indexed like runs.
    std::vector<std::vector<double>> limit_distance;
    /// Max over common steps of ||x_n(MonotoneC) - x_n(MonotoneCQ)||.
    double monotone_c_cq_sequence_gap = 0.0;
    double worst_pairwise = 0.0;
    bool agree(double tol = 1e-5) const { return worst_pairwise <= tol; }
};

ComparisonReport compare_modes(const SchemeSpec& base, const Mapping& t, const Vector& x0,
                               const StopRule& stop = {}, const EngineOptions& opts = {});

/// Fixed-schema history export, one row per record.
void write_run_csv(const RunResult& run, std::ostream& out);

}  // namespace cq
