#pragma once

#include "cq/cuts.hpp"
#include "cq/space.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace cq {

/// Project the anchor x_0 onto (intersection of halfspaces) ∩ ambient.
struct ProjectionProblem {
    Vector anchor;
    std::vector<Halfspace> halfspaces;
    AmbientSet ambient;
};

struct ProjectionResult {
    Vector point;
    std::vector<int> active;   // indices of tight constraints
    double vi_residual = 0.0;  // worst <x0-p, y-p> over certificate samples
    int iterations = 0;
};

/// Numerically empty intersection; only reachable through floating-point
/// drift since the theory keeps F(T) inside every constructed set.
class InfeasibleError : public std::runtime_error {
public:
    InfeasibleError(std::string what, int i, int j)
        : std::runtime_error(std::move(what)), constraint_i(i), constraint_j(j) {}
    int constraint_i;
    int constraint_j;
};

class MaxIterationsError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Closed-form projection onto one halfspace.
Vector project_halfspace(const Halfspace& h, const Vector& x);

struct ProjectionOptions {
    double feasibility_tol = 1e-14;
    int max_iter = 2000;
    /// When > 0, run the Lemma 2.2 certificate with this many sampled
    /// feasible directions and store the worst value in vi_residual.
    int certificate_samples = 0;
    unsigned certificate_seed = 1234;
};

/// Main solver: exact case analysis for <= 2 halfspaces in the whole space,
/// dual-feasible active set otherwise; Ball ambient handled by Dykstra
/// alternation with the exact ball projector.
ProjectionResult project_intersection(const ProjectionProblem& p,
                                      const ProjectionOptions& opts = {});

/// Independent test oracle: cyclic Dykstra over the individual halfspaces
/// and the ambient set, run to tol. Deliberately a different algorithm from
/// project_intersection.
Vector oracle_project(const ProjectionProblem& p, double tol = 1e-10,
                      int max_sweeps = 400000);

/// Some feasible point near z (plain cyclic projections; not the nearest one).
Vector sample_feasible(const ProjectionProblem& p, const Vector& z,
                       double tol = 1e-12, int max_sweeps = 20000);

/// Worst <anchor - point, y - point> over sampled feasible y (Lemma 2.2
/// direction; <= 0 at the true projection).
double vi_certificate(const ProjectionProblem& p, const Vector& point, int samples,
                      unsigned seed);

}  // namespace cq
