#include "cq/cuts.hpp"

#include <cmath>
#include <sstream>

namespace cq {

Halfspace to_halfspace(const Vector& lhs_center, const Vector& rhs_center,
                       const Vector& linear, double offset) {
    const Vector& y = lhs_center;
    const Vector& x = rhs_center;
    if (x.size() != y.size() || (linear.size() != 0 && linear.size() != x.size()))
        throw std::invalid_argument("to_halfspace: dimension mismatch");
    Vector a = 2.0 * (x - y);
    if (linear.size() != 0) a -= linear;
    // ||x||^2 - ||y||^2 written as <x-y, x+y>: the rounding error then scales
    // with ||x-y|| (and so with ||a||) instead of with ||x||^2, which keeps
    // the halfspace boundary accurate when the cut normal is tiny.
    double b = (x - y).dot(x + y) + offset;
    return Halfspace{std::move(a), b};
}

CutContext CutContext::make(const Mapping& t, Vector x, Vector x0) {
    CutContext ctx;
    ctx.T = &t;
    ctx.tx = t(x);
    ctx.x = std::move(x);
    ctx.x0 = std::move(x0);
    return ctx;
}

Halfspace cut_q(const Vector& x_n, const Vector& x_0) {
    Vector a = x_0 - x_n;
    double b = a.dot(x_n);
    return Halfspace{std::move(a), b};
}

namespace {

void require(bool cond, const char* what) {
    if (!cond) throw std::invalid_argument(what);
}

Cut single(Halfspace hs, std::string label, double mu,
           std::function<double(const Vector&)> theta = nullptr) {
    Cut c;
    c.halfspaces.push_back(std::move(hs));
    c.label = std::move(label);
    c.bound = ResidualBound{mu, std::move(theta)};
    return c;
}

}  // namespace

Cut cut_mann_nonexpansive(CutContext& ctx) {
    require(ctx.alpha > 0.0 && ctx.alpha <= 1.0, "mann_nonexpansive: alpha must be in (0,1]");
    ctx.y = combine(ctx.alpha, ctx.x, ctx.tx);
    return single(to_halfspace(ctx.y, ctx.x, Vector(), 0.0), "mann_nonexpansive",
                  2.0 / ctx.alpha);
}

Cut cut_mann_pc_inner(CutContext& ctx) {
    const double l = ctx.lipschitz(), a = ctx.alpha, tau = ctx.tau;
    require(a > 0.0 && a < 1.0 / (l + 1.0), "mann_pc_inner: alpha must be in (0, 1/(L+1))");
    require(tau > 0.0 && tau <= 1.0, "mann_pc_inner: tau must be in (0,1]");
    ctx.y = combine(a, ctx.x, ctx.tx);
    ctx.ty = ctx.apply(ctx.y);
    // tau*a*[1-(1+L)a] ||x-Tx||^2 <= <x-z, y-Ty>
    Vector n = ctx.y - ctx.ty;
    double lhs = tau * a * (1.0 - (1.0 + l) * a) * (ctx.x - ctx.tx).squaredNorm();
    double b = n.dot(ctx.x) - lhs;
    double mu = ((l + 1.0) * a + 1.0) / (tau * a * (1.0 - (l + 1.0) * a));
    return single(Halfspace{std::move(n), b}, "mann_pc_inner", mu);
}

Cut cut_mann_pc_norm(CutContext& ctx) {
    const double l = ctx.lipschitz(), a = ctx.alpha, tau = ctx.tau;
    require(a > 0.0 && a < 1.0 / (l + 1.0), "mann_pc_norm: alpha must be in (0, 1/(L+1))");
    require(tau > 0.0 && tau <= 1.0, "mann_pc_norm: tau must be in (0,1]");
    ctx.y = combine(a, ctx.x, ctx.tx);
    ctx.ty = ctx.apply(ctx.y);
    // tau ||a(I-T)y||^2 <= 2a <x-z, (I-T)y>
    Vector r = ctx.y - ctx.ty;
    Vector n = 2.0 * a * r;
    double b = 2.0 * a * r.dot(ctx.x) - tau * a * a * r.squaredNorm();
    double mu = 2.0 / (tau * a * (1.0 - (l + 1.0) * a));
    return single(Halfspace{std::move(n), b}, "mann_pc_norm", mu);
}

Cut cut_mann_strict_pc(CutContext& ctx) {
    const double k = ctx.kappa(), a = ctx.alpha;
    require(a > 0.0 && a <= 1.0, "mann_strict_pc: alpha must be in (0,1]");
    ctx.y = combine(a, ctx.x, ctx.tx);
    double offset = a * (k - (1.0 - a)) * (ctx.x - ctx.tx).squaredNorm();
    return single(to_halfspace(ctx.y, ctx.x, Vector(), offset), "mann_strict_pc",
                  2.0 / (1.0 - k));
}

Cut cut_ishikawa_pc(CutContext& ctx) {
    const double l = ctx.lipschitz(), a = ctx.alpha, b = ctx.beta;
    require(b > 0.0 && b <= a && a < 1.0 / (std::sqrt(1.0 + l * l) + 1.0),
            "ishikawa_pc: requires 0 < beta <= alpha < 1/(sqrt(1+L^2)+1)");
    ctx.v = combine(a, ctx.x, ctx.tx);
    ctx.tv = ctx.apply(ctx.v);
    ctx.y = combine(b, ctx.x, ctx.tv);
    double coeff = 1.0 - 2.0 * a - l * l * a * a;
    double offset = -a * b * coeff * (ctx.x - ctx.tx).squaredNorm();
    double mu = 2.0 * (1.0 + l * a) / (a * coeff);
    return single(to_halfspace(ctx.y, ctx.x, Vector(), offset), "ishikawa_pc", mu);
}

Cut cut_ishikawa_strict_pc(CutContext& ctx) {
    const double k = ctx.kappa(), l = ctx.lipschitz(), a = ctx.alpha, b = ctx.beta;
    double amax = 2.0 / (std::sqrt(4.0 * k * l * l + (k + 1.0) * (k + 1.0)) + (k + 1.0));
    require(a > 0.0 && a < amax,
            "ishikawa_strict_pc: alpha must be in (0, 2/(sqrt(4kL^2+(k+1)^2)+(k+1)))");
    require(b > 0.0 && b <= k * a + (1.0 - k),
            "ishikawa_strict_pc: beta must be in (0, k*alpha + (1-k)]");
    ctx.v = combine(a, ctx.x, ctx.tx);
    ctx.tv = ctx.apply(ctx.v);
    ctx.y = combine(b, ctx.x, ctx.tv);
    double coeff = 1.0 - (k + 1.0) * a - k * l * l * a * a;
    double offset = -a * b * coeff * (ctx.x - ctx.tx).squaredNorm();
    double mu = 2.0 * (1.0 + l * a) / (a * coeff);
    return single(to_halfspace(ctx.y, ctx.x, Vector(), offset), "ishikawa_strict_pc", mu);
}

Cut cut_ishikawa_nonexp_simple(CutContext& ctx) {
    const double a = ctx.alpha, b = ctx.beta;
    require(b > 0.0 && b <= a && a < 1.0 / (std::sqrt(2.0) + 1.0),
            "ishikawa_nonexp_simple: requires 0 < beta <= alpha < 1/(sqrt(2)+1)");
    ctx.v = combine(a, ctx.x, ctx.tx);
    ctx.tv = ctx.apply(ctx.v);
    ctx.y = combine(b, ctx.x, ctx.tv);
    double offset = -a * b * (1.0 - a) * (ctx.x - ctx.tx).squaredNorm();
    // Residual bound from the L = 1 pseudo-contractive case.
    double mu = 2.0 * (1.0 + a) / (a * (1.0 - 2.0 * a - a * a));
    return single(to_halfspace(ctx.y, ctx.x, Vector(), offset), "ishikawa_nonexp_simple", mu);
}

Cut cut_ishikawa_nonexpansive(CutContext& ctx, IshikawaNonexpRegime regime) {
    const double a = ctx.alpha, b = ctx.beta;
    ctx.v = combine(a, ctx.x, ctx.tx);
    ctx.tv = ctx.apply(ctx.v);
    ctx.y = combine(b, ctx.x, ctx.tv);
    Vector linear = 2.0 * b * (ctx.x - ctx.v);
    // ||v||^2 - ||x||^2 as <v-x, v+x>: keeps the rounding error proportional
    // to ||v-x|| so the cut boundary stays accurate near convergence.
    double offset = b * (ctx.v - ctx.x).dot(ctx.v + ctx.x);
    Halfspace hs = to_halfspace(ctx.y, ctx.x, linear, offset);
    if (regime == IshikawaNonexpRegime::ThetaBound) {
        require(b > 0.0 && b <= 1.0 && a >= 0.0 && a < 1.0,
                "ishikawa_nonexpansive: ThetaBound regime requires beta in (0,1], alpha in [0,1)");
        double denom = b * (1.0 - a);
        Vector tx = ctx.tx;
        auto theta = [a, denom, tx](const Vector& z) { return a * (tx - z).norm() / denom; };
        return single(std::move(hs), "ishikawa_nonexpansive", 3.0 / denom, theta);
    }
    double denom = b * (1.0 - a) - a;
    require(a >= 0.0 && a < 1.0 && b <= 1.0 && denom > 0.0,
            "ishikawa_nonexpansive: NormBound regime requires beta(1-alpha) > alpha");
    return single(std::move(hs), "ishikawa_nonexpansive", 4.0 / denom);
}

Cut cut_halpern_pc(CutContext& ctx) {
    const double w = ctx.anchor_weight;
    require(w >= 0.0 && w <= 1.0, "halpern_pc: anchor weight must be in [0,1]");
    ctx.y = combine(w, ctx.x0, ctx.tx);
    double theta = (1.0 - w) * (ctx.x0 - ctx.x).dot(ctx.x0 + ctx.x) +
                   w * (ctx.x - ctx.tx).squaredNorm() -
                   w * (1.0 - w) * (ctx.x0 - ctx.tx).squaredNorm();
    Vector linear = 2.0 * (1.0 - w) * (ctx.x - ctx.x0);
    Cut c;
    c.halfspaces.push_back(to_halfspace(ctx.y, ctx.x, linear, theta));
    c.label = "halpern_pc";
    // No standalone residual bound; used as the anchor member of a conjunction.
    return c;
}

Cut cut_halpern_strict_pc(CutContext& ctx) {
    const double w = ctx.anchor_weight, k = ctx.kappa();
    require(w >= 0.0 && w <= 1.0, "halpern_strict_pc: anchor weight must be in [0,1]");
    ctx.y = combine(w, ctx.x0, ctx.tx);
    double theta = (1.0 - w) * (ctx.x0 - ctx.x).dot(ctx.x0 + ctx.x) +
                   w * k * (ctx.x - ctx.tx).squaredNorm() -
                   w * (1.0 - w) * (ctx.x0 - ctx.tx).squaredNorm();
    Vector linear = 2.0 * (1.0 - w) * (ctx.x - ctx.x0);
    double denom = 1.0 - std::sqrt(w * k);
    double mu = 2.0 / denom;
    Vector x0 = ctx.x0, tx = ctx.tx;
    double coeff = std::sqrt(1.0 - w) / denom;
    auto th = [x0, tx, coeff](const Vector& z) {
        return coeff * ((x0 - tx).norm() + (x0 - z).norm());
    };
    return single(to_halfspace(ctx.y, ctx.x, linear, theta), "halpern_strict_pc", mu, th);
}

Cut cut_halpern_nonexpansive(CutContext& ctx) {
    const double w = ctx.anchor_weight;
    // w == 1 is admitted as the degenerate limit: the anchor term vanishes and
    // the cut collapses to the bisector of x and Tx with theta == 0.
    require(w > 0.0 && w <= 1.0, "halpern_nonexpansive: anchor weight must be in (0,1]");
    ctx.y = combine(w, ctx.x0, ctx.tx);
    Vector linear = 2.0 * (1.0 - w) * (ctx.x - ctx.x0);
    double offset = (1.0 - w) * ctx.x0.squaredNorm();
    Vector x0 = ctx.x0, tx = ctx.tx, x = ctx.x;
    double root = std::sqrt(1.0 - w);
    auto th = [x0, tx, x, root](const Vector& z) {
        return root * (4.0 * x0.norm() + (x0 - tx).norm() + (x - x0).norm() + (x0 - z).norm());
    };
    return single(to_halfspace(ctx.y, ctx.x, linear, offset), "halpern_nonexpansive", 2.0, th);
}

Cut cut_conjunction(std::vector<Cut> cuts, std::size_t governing) {
    if (cuts.empty()) throw std::invalid_argument("cut_conjunction: empty list");
    if (governing >= cuts.size())
        throw std::invalid_argument("cut_conjunction: governing index out of range");
    Cut out;
    out.label = cuts[governing].label + "_conj";
    out.bound = cuts[governing].bound;
    for (auto& c : cuts) {
        for (auto& hs : c.halfspaces) out.halfspaces.push_back(std::move(hs));
        if (c.ball) out.ball = c.ball;
    }
    return out;
}

bool star_membership(const std::string& lemma, const CutContext& ctx, const Vector& z,
                     double slack, double mu27, double theta27) {
    const double res = (ctx.x - ctx.tx).norm();
    const double dist = (ctx.x - z).norm();
    const double l = ctx.lipschitz(), k = ctx.kappa();
    const double a = ctx.alpha, b = ctx.beta, tau = ctx.tau, w = ctx.anchor_weight;
    if (lemma == "2.7") return res <= mu27 * dist + theta27 + slack;
    if (lemma == "5.1")
        return res <= ((l + 1.0) * a + 1.0) / (tau * a * (1.0 - (l + 1.0) * a)) * dist + slack;
    if (lemma == "5.2")
        return res <= 2.0 / (tau * a * (1.0 - (l + 1.0) * a)) * dist + slack;
    if (lemma == "5.3") return res <= 2.0 / (1.0 - k) * dist + slack;
    if (lemma == "6.1")
        return res <= 2.0 * (1.0 + l * a) / (a * (1.0 - 2.0 * a - l * l * a * a)) * dist + slack;
    if (lemma == "6.2")
        return res <= 2.0 * (1.0 + l * a) /
                          (a * (1.0 - (k + 1.0) * a - k * l * l * a * a)) * dist + slack;
    if (lemma == "6.3")
        return b * (1.0 - a) * res <= 3.0 * dist + a * (ctx.tx - z).norm() + slack;
    if (lemma == "6.4") return res <= 4.0 / (b * (1.0 - a) - a) * dist + slack;
    if (lemma == "7.2")
        return res <= 2.0 / (1.0 - std::sqrt(w * k)) * dist +
                      std::sqrt(1.0 - w) / (1.0 - std::sqrt(w * k)) *
                          ((ctx.x0 - ctx.tx).norm() + (ctx.x0 - z).norm()) + slack;
    if (lemma == "7.3")
        return res <= 2.0 * dist +
                      std::sqrt(1.0 - w) * (4.0 * ctx.x0.norm() + (ctx.x0 - ctx.tx).norm() +
                                            (ctx.x - ctx.x0).norm() + (ctx.x0 - z).norm()) + slack;
    throw std::invalid_argument("star_membership: unknown lemma '" + lemma + "'");
}

bool ball_contains_fixed_set(const Ball& ball, const Mapping& t) {
    const FixedSet& f = t.fixed_set();
    if (const auto* p = std::get_if<FixedPoint>(&f))
        return (p->p - ball.center).norm() <= ball.radius;
    if (const auto* a = std::get_if<FixedAffine>(&f)) {
        // An affine subspace with spanning directions is unbounded.
        return a->directions.empty() && (a->base - ball.center).norm() <= ball.radius;
    }
    const auto& body = std::get<FixedBody>(f).body;
    if (body.is_ball()) {
        const Ball& inner = body.as_ball();
        return (inner.center - ball.center).norm() + inner.radius <= ball.radius;
    }
    if (body.is_box()) {
        const Box& box = body.as_box();
        double r2 = 0.0;
        for (int i = 0; i < box.lower.size(); ++i) {
            double lo = std::abs(box.lower[i] - ball.center[i]);
            double hi = std::abs(box.upper[i] - ball.center[i]);
            double m = std::max(lo, hi);
            r2 += m * m;
        }
        return std::sqrt(r2) <= ball.radius;
    }
    return false;  // whole space never fits
}

Cut select_cn_star(Cut cut, const CnStarStrategy& strategy, const Mapping& t) {
    if (std::holds_alternative<CnStarIdentity>(strategy)) return cut;
    const auto& s = std::get<CnStarIntersectBall>(strategy);
    Ball ball{s.center, s.radius};
    if (!ball_contains_fixed_set(ball, t))
        throw std::invalid_argument("select_cn_star: ball is not certified to contain F(T)");
    cut.ball = std::move(ball);
    return cut;
}

std::string dump_cut(const Cut& cut) {
    std::ostringstream os;
    os << "cut " << cut.label << " (" << cut.halfspaces.size() << " halfspaces)\n";
    for (const auto& hs : cut.halfspaces) {
        os << "  a = [" << hs.a.transpose() << "], b = " << hs.b;
        if (hs.degenerate())
            os << (hs.degenerate_feasible() ? "  [degenerate: whole space]"
                                            : "  [degenerate: empty]");
        os << "\n";
    }
    if (cut.ball) os << "  ball: r = " << cut.ball->radius << "\n";
    if (cut.bound) os << "  mu = " << cut.bound->mu << "\n";
    return os.str();
}

}  // namespace cq
