#include "cq/operators.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace cq {

double MappingClass::lipschitz() const {
    if (std::holds_alternative<Nonexpansive>(v_)) return 1.0;
    if (const auto* s = std::get_if<StrictPC>(&v_)) {
        // A kappa-strict pseudo-contraction is Lipschitz with (1+kappa)/(1-kappa).
        return (1.0 + s->kappa) / (1.0 - s->kappa);
    }
    return std::max(std::get<LipschitzPC>(v_).lipschitz, 1.0);
}

bool MappingClass::lipschitz_was_clamped() const {
    const auto* l = std::get_if<LipschitzPC>(&v_);
    return l != nullptr && l->lipschitz < 1.0;
}

std::string MappingClass::describe() const {
    std::ostringstream os;
    if (is_nonexpansive()) {
        os << "nonexpansive";
    } else if (is_strict_pc()) {
        os << "strict-pc(kappa=" << kappa() << ")";
    } else {
        os << "lipschitz-pc(L=" << lipschitz() << ")";
        if (lipschitz_was_clamped()) os << " [declared L<1 clamped to 1]";
    }
    return os.str();
}

Mapping::Mapping(std::string name, int dim, std::function<Vector(const Vector&)> apply,
                 MappingClass cls, FixedSet fixed_set)
    : name_(std::move(name)), dim_(dim), apply_(std::move(apply)), cls_(cls),
      fixed_set_(std::move(fixed_set)) {
    if (dim_ < 1) throw std::invalid_argument("Mapping: dimension must be >= 1");
}

std::string Mapping::describe() const {
    return name_ + " [" + cls_.describe() + ", d=" + std::to_string(dim_) + "]";
}

Vector project_fixed_set(const Mapping& t, const Vector& x) {
    const FixedSet& f = t.fixed_set();
    if (const auto* p = std::get_if<FixedPoint>(&f)) return p->p;
    if (const auto* a = std::get_if<FixedAffine>(&f)) {
        Vector r = a->base;
        for (const Vector& u : a->directions) r += u.dot(x - a->base) * u;
        return r;
    }
    return std::get<FixedBody>(f).body.project(x);
}

Vector sample_fixed_point(const Mapping& t, std::function<double()>& unit_rng) {
    const FixedSet& f = t.fixed_set();
    if (const auto* p = std::get_if<FixedPoint>(&f)) return p->p;
    if (const auto* a = std::get_if<FixedAffine>(&f)) {
        Vector r = a->base;
        for (const Vector& u : a->directions) r += (2.0 * unit_rng() - 1.0) * 3.0 * u;
        return r;
    }
    const auto& body = std::get<FixedBody>(f).body;
    Vector z(t.dim());
    for (int i = 0; i < t.dim(); ++i) z[i] = (2.0 * unit_rng() - 1.0) * 3.0;
    return body.project(z);
}

ClassReport verify_class(const Mapping& t, int samples, unsigned seed, double slack) {
    if (samples < 1) throw std::invalid_argument("verify_class: samples must be >= 1");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-3.0, 3.0);
    ClassReport rep;
    rep.samples = samples;
    const int d = t.dim();
    for (int s = 0; s < samples; ++s) {
        Vector x(d), y(d);
        for (int i = 0; i < d; ++i) { x[i] = dist(rng); y[i] = dist(rng); }
        Vector tx = t(x), ty = t(y);
        double gap = 0.0;  // slack of the class inequality; negative = violation
        if (t.cls().is_nonexpansive()) {
            gap = (x - y).norm() - (tx - ty).norm();
        } else if (t.cls().is_strict_pc()) {
            double lhs = (tx - ty).squaredNorm();
            double rhs = (x - y).squaredNorm() +
                         t.cls().kappa() * ((x - tx) - (y - ty)).squaredNorm();
            gap = rhs - lhs;
        } else {
            // Pseudo-contractive: <Tx-Ty, x-y> <= ||x-y||^2, plus the Lipschitz bound.
            gap = (x - y).squaredNorm() - (tx - ty).dot(x - y);
            double lip_gap = (t.cls().lipschitz() + slack) * (x - y).norm() - (tx - ty).norm();
            gap = std::min(gap, lip_gap);
        }
        if (gap < rep.worst_slack) rep.worst_slack = gap;
        if (gap < -slack) ++rep.violations;
    }
    rep.pass = rep.violations == 0;
    if (!rep.pass) {
        std::ostringstream os;
        os << t.describe() << ": " << rep.violations << "/" << rep.samples
           << " sampled pairs violate the declared class inequality (worst slack "
           << rep.worst_slack << ")";
        rep.detail = os.str();
    }
    return rep;
}

namespace {

double param_or(const std::map<std::string, double>& params, const std::string& key,
                std::optional<double> fallback = std::nullopt) {
    auto it = params.find(key);
    if (it != params.end()) return it->second;
    if (fallback) return *fallback;
    throw std::invalid_argument("builtin: missing parameter '" + key + "'");
}

std::vector<Vector> axes_except(int dim, std::vector<int> skip) {
    std::vector<Vector> dirs;
    for (int i = 0; i < dim; ++i) {
        bool skipped = false;
        for (int s : skip) skipped = skipped || s == i;
        if (!skipped) dirs.push_back(Vector::Unit(dim, i));
    }
    return dirs;
}

Mapping make_rotation(int dim, double theta) {
    if (dim < 2) throw std::invalid_argument("rotation: requires d >= 2");
    double c = std::cos(theta), s = std::sin(theta);
    auto apply = [c, s](const Vector& x) {
        Vector y = x;
        y[0] = c * x[0] - s * x[1];
        y[1] = s * x[0] + c * x[1];
        return y;
    };
    // Fixes the orthogonal complement of the rotation plane (just {0} in d=2).
    FixedSet fixed = dim == 2
        ? FixedSet(FixedPoint{Vector::Zero(2)})
        : FixedSet(FixedAffine{Vector::Zero(dim), axes_except(dim, {0, 1})});
    return Mapping("rotation", dim, apply, MappingClass::nonexpansive(), std::move(fixed));
}

Mapping make_reflection(int dim, int axis) {
    if (axis < 0 || axis >= dim) throw std::invalid_argument("reflection: axis out of range");
    auto apply = [axis](const Vector& x) {
        Vector y = x;
        y[axis] = -x[axis];
        return y;
    };
    return Mapping("reflection", dim, apply, MappingClass::nonexpansive(),
                   FixedAffine{Vector::Zero(dim), axes_except(dim, {axis})});
}

Mapping make_proj_onto(int dim, AmbientSet body, std::string name) {
    auto apply = [body](const Vector& x) { return body.project(x); };
    return Mapping(std::move(name), dim, apply, MappingClass::nonexpansive(),
                   FixedBody{std::move(body)});
}

Mapping make_scale(int dim, double a) {
    if (!(a < -1.0)) throw std::invalid_argument("scale: requires a < -1");
    double kappa = (a * a - 1.0) / ((1.0 - a) * (1.0 - a));
    auto apply = [a](const Vector& x) { return Vector(a * x); };
    return Mapping("scale", dim, apply, MappingClass::strict_pc(kappa),
                   FixedPoint{Vector::Zero(dim)});
}

Mapping make_i_minus_rot90(int dim) {
    if (dim < 2) throw std::invalid_argument("i_minus_rot90: requires d >= 2");
    // T = I - R with R a quarter-turn in the (0,1) plane (identity elsewhere);
    // R is monotone linear, so T is pseudo-contractive with L = sqrt(2).
    auto apply = [](const Vector& x) {
        Vector y = Vector::Zero(x.size());
        y[0] = x[0] + x[1];
        y[1] = x[1] - x[0];
        return y;
    };
    return Mapping("i_minus_rot90", dim, apply, MappingClass::lipschitz_pc(std::sqrt(2.0)),
                   FixedPoint{Vector::Zero(dim)});
}

}  // namespace

Mapping builtin(const std::string& name, int dim, const std::map<std::string, double>& params) {
    if (dim < 1) throw std::invalid_argument("builtin: dimension must be >= 1");
    if (name == "rotation") return make_rotation(dim, param_or(params, "theta"));
    if (name == "reflection")
        return make_reflection(dim, static_cast<int>(param_or(params, "axis", dim - 1)));
    if (name == "proj_ball") {
        double r = param_or(params, "r", 1.0);
        return make_proj_onto(dim, AmbientSet::ball(Vector::Zero(dim), r), "proj_ball");
    }
    if (name == "proj_box") {
        double w = param_or(params, "w", 1.0);
        Vector half = Vector::Constant(dim, w);
        return make_proj_onto(dim, AmbientSet::box(-half, half), "proj_box");
    }
    if (name == "scale") return make_scale(dim, param_or(params, "a"));
    if (name == "i_minus_rot90") return make_i_minus_rot90(dim);
    throw std::invalid_argument("builtin: unknown operator '" + name + "'");
}

std::vector<std::string> builtin_names() {
    return {"rotation", "reflection", "proj_ball", "proj_box", "scale", "i_minus_rot90"};
}

}  // namespace cq
