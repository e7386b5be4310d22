#pragma once

#include "cq/operators.hpp"
#include "cq/space.hpp"

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace cq {

/// {z : <a,z> <= b}. A normal with ||a|| <= 1e-14 is degenerate: the whole
/// space when b >= 0, empty otherwise.
struct Halfspace {
    Vector a;
    double b = 0.0;

    static constexpr double kDegenerateNorm = 1e-14;

    bool degenerate() const { return a.norm() <= kDegenerateNorm; }
    bool degenerate_feasible() const { return b >= 0.0; }

    /// <a,z> - b; positive means violated.
    double violation(const Vector& z) const { return a.dot(z) - b; }

    bool contains(const Vector& z, double tol = 0.0) const {
        if (degenerate()) return degenerate_feasible();
        return violation(z) <= tol;
    }
};

/// Expand ||y - v||^2 <= ||x - v||^2 + <c,v> + a into halfspace normal form:
/// <2(x-y) - c, v> <= ||x||^2 - ||y||^2 + a.
Halfspace to_halfspace(const Vector& lhs_center, const Vector& rhs_center,
                       const Vector& linear, double offset);

/// Residual bound of Theorem 3.1: ||x - Tx|| <= mu * ||x - z|| + theta(z).
struct ResidualBound {
    double mu = 0.0;
    std::function<double(const Vector&)> theta;  // null means theta == 0

    double theta_at(const Vector& z) const { return theta ? theta(z) : 0.0; }
};

/// A C_n in halfspace normal form, with the residual bound that drives the
/// convergence argument. `ball` restricts the projection target to a ball
/// (the IntersectBall C_n* strategy); the projector refreshes supporting
/// halfspaces for it per solve.
struct Cut {
    std::vector<Halfspace> halfspaces;
    std::string label;
    std::optional<ResidualBound> bound;
    std::optional<Ball> ball;

    double theta_at(const Vector& z) const { return bound ? bound->theta_at(z) : 0.0; }
};

/// Per-step inputs of a cut construction. Builders fill the intermediates
/// they compute (v, Tv, y, Ty) so callers can log and test them.
struct CutContext {
    const Mapping* T = nullptr;
    Vector x;    // x_n
    Vector tx;   // T x_n
    Vector x0;   // anchor
    double alpha = 0.0;
    double beta = 0.0;
    double tau = 1.0;
    double anchor_weight = 0.0;  // weight on Tx_n in the Halpern point

    Vector v, tv, y, ty;

    double kappa() const { return T->cls().kappa(); }
    double lipschitz() const { return T->cls().lipschitz(); }
    Vector apply(const Vector& z) const { return (*T)(z); }

    static CutContext make(const Mapping& t, Vector x, Vector x0);
};

/// Q_n = {z : <z - x_n, x_n - x_0> >= 0} as <x_0 - x_n, z> <= <x_0 - x_n, x_n>.
Halfspace cut_q(const Vector& x_n, const Vector& x_0);

Cut cut_mann_nonexpansive(CutContext& ctx);
Cut cut_mann_pc_inner(CutContext& ctx);
Cut cut_mann_pc_norm(CutContext& ctx);
Cut cut_mann_strict_pc(CutContext& ctx);

Cut cut_ishikawa_pc(CutContext& ctx);
Cut cut_ishikawa_strict_pc(CutContext& ctx);
/// The plain nonexpansive Ishikawa cut with offset -a*b*(1-a)||x-Tx||^2.
Cut cut_ishikawa_nonexp_simple(CutContext& ctx);

enum class IshikawaNonexpRegime {
    ThetaBound,  // beta bounded below, alpha -> 0; mu = 3/(b(1-a)), theta > 0
    NormBound,   // beta(1-alpha) > alpha; mu = 4/(b(1-a)-a), theta == 0
};
Cut cut_ishikawa_nonexpansive(CutContext& ctx, IshikawaNonexpRegime regime);

Cut cut_halpern_pc(CutContext& ctx);
Cut cut_halpern_strict_pc(CutContext& ctx);
Cut cut_halpern_nonexpansive(CutContext& ctx);

/// Concatenate halfspace lists; the residual bound is taken from the
/// governing member (the cut whose theorem drives convergence).
Cut cut_conjunction(std::vector<Cut> cuts, std::size_t governing = 0);

/// Evaluate the *C_x inequality of the named lemma at z, with slack tolerance.
/// Lemma ids: 2.7 (generic mu/theta, passed explicitly), 5.1, 5.2, 5.3,
/// 6.1, 6.2, 6.3, 6.4, 7.2, 7.3.
bool star_membership(const std::string& lemma, const CutContext& ctx, const Vector& z,
                     double slack = 1e-9, double mu27 = 0.0, double theta27 = 0.0);

struct CnStarIdentity {};
struct CnStarIntersectBall {
    Vector center;
    double radius;
};
using CnStarStrategy = std::variant<CnStarIdentity, CnStarIntersectBall>;

/// True when the ball provably contains F(T).
bool ball_contains_fixed_set(const Ball& ball, const Mapping& t);

/// Identity returns the cut unchanged; IntersectBall attaches the ball
/// (certified against F(T)) for the projector to enforce.
Cut select_cn_star(Cut cut, const CnStarStrategy& strategy, const Mapping& t);

/// Text dump (normal, offset, label) for debugging.
std::string dump_cut(const Cut& cut);

}  // namespace cq
