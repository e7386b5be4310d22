#include "cq/projection.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace cq {

Vector project_halfspace(const Halfspace& h, const Vector& x) {
    if (h.degenerate()) {
        if (h.degenerate_feasible()) return x;
        throw InfeasibleError("project_halfspace: degenerate empty halfspace", -1, -1);
    }
    double v = h.violation(x);
    if (v <= 0.0) return x;
    return x - (v / h.a.squaredNorm()) * h.a;
}

namespace {

// Drop degenerate-whole-space constraints and exact duplicates; fold a Box
// ambient into componentwise halfspaces. Throws on a degenerate-empty member.
struct Normalized {
    std::vector<Halfspace> hs;
    std::vector<int> origin;  // index into the original list, -1 for ambient-derived
    bool ball_ambient = false;
    Ball ball;
};

Normalized normalize(const ProjectionProblem& p) {
    Normalized out;
    const int d = static_cast<int>(p.anchor.size());
    for (std::size_t i = 0; i < p.halfspaces.size(); ++i) {
        const Halfspace& h = p.halfspaces[i];
        if (h.degenerate()) {
            if (!h.degenerate_feasible())
                throw InfeasibleError("empty degenerate halfspace in problem",
                                      static_cast<int>(i), -1);
            continue;
        }
        double n = h.a.norm();
        Vector an = h.a / n;
        double bn = h.b / n;
        bool dup = false;
        for (std::size_t j = 0; j < out.hs.size() && !dup; ++j)
            dup = (out.hs[j].a - an).norm() <= 1e-12 && std::abs(out.hs[j].b - bn) <= 1e-12;
        if (!dup) {
            out.hs.push_back(Halfspace{std::move(an), bn});
            out.origin.push_back(static_cast<int>(i));
        }
    }
    if (p.ambient.is_box()) {
        const Box& box = p.ambient.as_box();
        for (int i = 0; i < d; ++i) {
            out.hs.push_back(Halfspace{Vector(Vector::Unit(d, i)), box.upper[i]});
            out.origin.push_back(-1);
            out.hs.push_back(Halfspace{Vector(-Vector::Unit(d, i)), -box.lower[i]});
            out.origin.push_back(-1);
        }
    } else if (p.ambient.is_ball()) {
        out.ball_ambient = true;
        out.ball = p.ambient.as_ball();
    }
    return out;
}

// Certify emptiness from an antiparallel pair: a.z <= b1 and -a.z <= b2 with
// b1 + b2 < 0 has no solution.
void check_parallel_infeasible(const Normalized& n) {
    for (std::size_t i = 0; i < n.hs.size(); ++i) {
        for (std::size_t j = i + 1; j < n.hs.size(); ++j) {
            if ((n.hs[i].a + n.hs[j].a).norm() <= 1e-10 &&
                n.hs[i].b + n.hs[j].b < -1e-12) {
                throw InfeasibleError("antiparallel halfspace pair with empty slab",
                                      n.origin[i], n.origin[j]);
            }
        }
    }
}

struct PolyResult {
    Vector point;
    std::vector<int> active;
    int iterations = 0;
};

// Primal active-set projection onto an intersection of halfspaces.
PolyResult active_set_project(const Vector& anchor, const std::vector<Halfspace>& hs,
                              double feas_tol, int max_iter) {
    const int m = static_cast<int>(hs.size());
    std::vector<int> work;
    Vector p = anchor;
    PolyResult res;
    for (int iter = 0; iter < max_iter; ++iter) {
        res.iterations = iter + 1;
        Eigen::VectorXd lambda;
        if (!work.empty()) {
            const int k = static_cast<int>(work.size());
            Eigen::MatrixXd aw(k, anchor.size());
            Eigen::VectorXd rhs(k);
            for (int i = 0; i < k; ++i) {
                aw.row(i) = hs[work[i]].a.transpose();
                rhs[i] = hs[work[i]].a.dot(anchor) - hs[work[i]].b;
            }
            Eigen::MatrixXd gram = aw * aw.transpose();
            lambda = gram.completeOrthogonalDecomposition().solve(rhs);
            p = anchor - aw.transpose() * lambda;
            int drop = -1;
            double most_negative = -1e-10;
            for (int i = 0; i < k; ++i) {
                if (lambda[i] < most_negative) {
                    most_negative = lambda[i];
                    drop = i;
                }
            }
            if (drop >= 0) {
                work.erase(work.begin() + drop);
                continue;
            }
        } else {
            p = anchor;
        }
        // Entering constraint: most violated, falling back to lowest index
        // late in the solve to break potential cycles.
        bool bland = iter > max_iter / 2;
        int enter = -1;
        double worst = feas_tol;
        for (int j = 0; j < m; ++j) {
            if (std::find(work.begin(), work.end(), j) != work.end()) continue;
            double v = hs[j].violation(p);
            if (v > worst) {
                worst = v;
                enter = j;
                if (bland) break;
            }
        }
        if (enter < 0) {
            res.point = p;
            res.active = work;
            return res;
        }
        work.push_back(enter);
    }
    throw MaxIterationsError("active-set projection did not converge");
}

// Exact case analysis for at most two halfspaces in the whole space.
PolyResult exact_two_project(const Vector& anchor, const std::vector<Halfspace>& hs) {
    PolyResult res;
    res.iterations = 0;
    // Normals are unit length here, so violations are geometric distances.
    // The tight tolerance matters: accepting a nearly feasible anchor stalls
    // the outer iteration once the cut depth drops below the slack.
    auto worst_violation = [&](const Vector& z) {
        double w = 0.0;
        for (const auto& h : hs)
            w = std::max(w, h.violation(z) / (1.0 + std::abs(h.b)));
        return w;
    };
    const double tol = 1e-14;
    if (worst_violation(anchor) <= tol) {
        res.point = anchor;
        return res;
    }
    Vector best, nearest;
    std::vector<int> best_active, nearest_active;
    double best_dist = std::numeric_limits<double>::infinity();
    double nearest_viol = std::numeric_limits<double>::infinity();
    auto consider = [&](const Vector& z, std::vector<int> active) {
        double viol = worst_violation(z);
        if (viol < nearest_viol) {
            nearest_viol = viol;
            nearest = z;
            nearest_active = active;
        }
        if (viol > tol) return;
        double dd = (z - anchor).squaredNorm();
        if (dd < best_dist) {
            best_dist = dd;
            best = z;
            best_active = std::move(active);
        }
    };
    for (std::size_t i = 0; i < hs.size(); ++i)
        consider(project_halfspace(hs[i], anchor), {static_cast<int>(i)});
    if (hs.size() == 2) {
        // Corner candidate: least-norm multipliers so a nearly singular Gram
        // (nearly parallel cuts) still produces a usable point; the
        // feasibility filter rejects it when the rows are inconsistent.
        Eigen::Matrix2d gram;
        gram << hs[0].a.squaredNorm(), hs[0].a.dot(hs[1].a),
                hs[0].a.dot(hs[1].a), hs[1].a.squaredNorm();
        Eigen::Vector2d rhs(hs[0].violation(anchor), hs[1].violation(anchor));
        Eigen::Vector2d lambda = gram.completeOrthogonalDecomposition().solve(rhs);
        consider(anchor - lambda[0] * hs[0].a - lambda[1] * hs[1].a, {0, 1});
    }
    if (!std::isfinite(best_dist)) {
        // With antiparallel infeasibility already excluded the intersection is
        // nonempty, so a miss here is rounding in an ill-conditioned corner.
        // Return the least-violating candidate unless it is genuinely far out.
        if (nearest_viol <= 1e-7) {
            res.point = std::move(nearest);
            res.active = std::move(nearest_active);
            return res;
        }
        throw InfeasibleError("two-halfspace projection: no feasible candidate", 0,
                              hs.size() > 1 ? 1 : -1);
    }
    res.point = std::move(best);
    res.active = std::move(best_active);
    return res;
}

PolyResult solve_polyhedral(const Vector& anchor, const std::vector<Halfspace>& hs,
                            double feas_tol, int max_iter) {
    if (hs.empty()) return PolyResult{anchor, {}, 0};
    if (hs.size() <= 2) return exact_two_project(anchor, hs);
    return active_set_project(anchor, hs, feas_tol, max_iter);
}

}  // namespace

ProjectionResult project_intersection(const ProjectionProblem& p,
                                      const ProjectionOptions& opts) {
    Normalized n = normalize(p);
    check_parallel_infeasible(n);
    ProjectionResult out;
    PolyResult poly;
    if (!n.ball_ambient) {
        try {
            poly = solve_polyhedral(p.anchor, n.hs, opts.feasibility_tol, opts.max_iter);
        } catch (const MaxIterationsError&) {
            check_parallel_infeasible(n);
            throw;
        }
        out.point = poly.point;
        out.iterations = poly.iterations;
        for (int w : poly.active)
            if (n.origin[w] >= 0) out.active.push_back(n.origin[w]);
    } else {
        // Dykstra alternation between the polyhedral projector and the exact
        // ball projector; exactness weakens to the stated tolerance here.
        Vector x = p.anchor;
        Vector corr_poly = Vector::Zero(x.size());
        Vector corr_ball = Vector::Zero(x.size());
        AmbientSet ball = AmbientSet::ball(n.ball.center, n.ball.radius);
        int it = 0;
        for (; it < opts.max_iter; ++it) {
            Vector y = x + corr_poly;
            poly = solve_polyhedral(y, n.hs, opts.feasibility_tol, opts.max_iter);
            corr_poly = y - poly.point;
            Vector z = poly.point + corr_ball;
            Vector xb = ball.project(z);
            corr_ball = z - xb;
            double delta = (xb - x).norm();
            x = xb;
            if (delta < 1e-12 && (poly.point - xb).norm() < 1e-8) break;
        }
        if (it == opts.max_iter)
            throw MaxIterationsError("ball-ambient Dykstra alternation did not converge");
        out.point = x;
        out.iterations = it + 1;
        for (int w : poly.active)
            if (n.origin[w] >= 0) out.active.push_back(n.origin[w]);
    }
    std::sort(out.active.begin(), out.active.end());
    out.active.erase(std::unique(out.active.begin(), out.active.end()), out.active.end());
    if (opts.certificate_samples > 0)
        out.vi_residual =
            vi_certificate(p, out.point, opts.certificate_samples, opts.certificate_seed);
    return out;
}

Vector oracle_project(const ProjectionProblem& p, double tol, int max_sweeps) {
    Normalized n = normalize(p);
    check_parallel_infeasible(n);
    const int d = static_cast<int>(p.anchor.size());
    const int sets = static_cast<int>(n.hs.size()) + (n.ball_ambient ? 1 : 0);
    if (sets == 0) return p.anchor;
    std::vector<Vector> corrections(sets, Vector::Zero(d));
    AmbientSet ball = n.ball_ambient ? AmbientSet::ball(n.ball.center, n.ball.radius)
                                     : AmbientSet::whole_space();
    Vector x = p.anchor;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double shift = 0.0;
        for (int s = 0; s < sets; ++s) {
            Vector y = x + corrections[s];
            Vector px = s < static_cast<int>(n.hs.size()) ? project_halfspace(n.hs[s], y)
                                                          : ball.project(y);
            corrections[s] = y - px;
            shift = std::max(shift, (px - x).norm());
            x = px;
        }
        if (shift < tol) {
            double worst = 0.0;
            for (const auto& h : n.hs) worst = std::max(worst, h.violation(x));
            if (n.ball_ambient) worst = std::max(worst, (x - n.ball.center).norm() - n.ball.radius);
            if (worst < 10.0 * tol) return x;
        }
    }
    throw MaxIterationsError("oracle_project: Dykstra did not reach tolerance");
}

Vector sample_feasible(const ProjectionProblem& p, const Vector& z, double tol,
                       int max_sweeps) {
    Normalized n = normalize(p);
    AmbientSet ball = n.ball_ambient ? AmbientSet::ball(n.ball.center, n.ball.radius)
                                     : AmbientSet::whole_space();
    Vector x = z;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double worst = 0.0;
        for (const auto& h : n.hs) worst = std::max(worst, h.violation(x));
        if (n.ball_ambient) worst = std::max(worst, (x - n.ball.center).norm() - n.ball.radius);
        if (worst <= tol) return x;
        for (const auto& h : n.hs) x = project_halfspace(h, x);
        if (n.ball_ambient) x = ball.project(x);
    }
    throw MaxIterationsError("sample_feasible: cyclic projections did not reach feasibility");
}

double vi_certificate(const ProjectionProblem& p, const Vector& point, int samples,
                      unsigned seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    double scale = std::max(1.0, (p.anchor - point).norm());
    double worst = -std::numeric_limits<double>::infinity();
    for (int s = 0; s < samples; ++s) {
        Vector z = point;
        for (int i = 0; i < z.size(); ++i) z[i] += scale * gauss(rng);
        Vector y = sample_feasible(p, z);
        worst = std::max(worst, (p.anchor - point).dot(y - point));
    }
    return worst;
}

}  // namespace cq
