#pragma once

#include "cq/space.hpp"

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace cq {

/// Declared class of a mapping: nonexpansive, kappa-strict pseudo-contractive,
/// or L-Lipschitz pseudo-contractive.
struct Nonexpansive {};
struct StrictPC {
    double kappa;  // 0 <= kappa < 1
};
struct LipschitzPC {
    double lipschitz;  // clamped to >= 1
};

class MappingClass {
public:
    static MappingClass nonexpansive() { return MappingClass(Nonexpansive{}); }

    static MappingClass strict_pc(double kappa) {
        if (!(kappa >= 0.0 && kappa < 1.0))
            throw std::invalid_argument("StrictPC: kappa must be in [0,1)");
        return MappingClass(StrictPC{kappa});
    }

    static MappingClass lipschitz_pc(double lipschitz) {
        if (!(lipschitz > 0.0)) throw std::invalid_argument("LipschitzPC: L must be positive");
        return MappingClass(LipschitzPC{lipschitz});
    }

    bool is_nonexpansive() const { return std::holds_alternative<Nonexpansive>(v_); }
    bool is_strict_pc() const { return std::holds_alternative<StrictPC>(v_); }
    bool is_lipschitz_pc() const { return std::holds_alternative<LipschitzPC>(v_); }

    /// kappa for strict pseudo-contractions; 0 for nonexpansive maps.
    double kappa() const {
        if (const auto* s = std::get_if<StrictPC>(&v_)) return s->kappa;
        return 0.0;
    }

    /// Lipschitz constant, clamped to >= 1 (noted in the run log when clamped).
    double lipschitz() const;

    bool lipschitz_was_clamped() const;

    std::string describe() const;

private:
    explicit MappingClass(std::variant<Nonexpansive, StrictPC, LipschitzPC> v) : v_(v) {}
    std::variant<Nonexpansive, StrictPC, LipschitzPC> v_;
};

/// Fixed-point set F(T), declared analytically so P_{F(T)} is exact.
struct FixedPoint {
    Vector p;
};
struct FixedAffine {
    Vector base;
    std::vector<Vector> directions;  // orthonormal
};
struct FixedBody {
    AmbientSet body;
};
using FixedSet = std::variant<FixedPoint, FixedAffine, FixedBody>;

/// A self-map of the ambient set with declared class and known fixed-point set.
/// Immutable after construction.
class Mapping {
public:
    Mapping(std::string name, int dim, std::function<Vector(const Vector&)> apply,
            MappingClass cls, FixedSet fixed_set);

    const std::string& name() const { return name_; }
    int dim() const { return dim_; }
    const MappingClass& cls() const { return cls_; }
    const FixedSet& fixed_set() const { return fixed_set_; }

    Vector operator()(const Vector& x) const { return apply_(x); }

    std::string describe() const;

private:
    std::string name_;
    int dim_;
    std::function<Vector(const Vector&)> apply_;
    MappingClass cls_;
    FixedSet fixed_set_;
};

/// Exact metric projection of x onto F(T).
Vector project_fixed_set(const Mapping& t, const Vector& x);

/// Sample a point of F(T) (deterministic per rng state).
Vector sample_fixed_point(const Mapping& t, std::function<double()>& unit_rng);

struct ClassReport {
    bool pass = true;
    double worst_slack = 0.0;  // most negative slack observed (0 if never negative)
    int violations = 0;
    int samples = 0;
    std::string detail;
};

/// Sampled verification of the declared class inequality.
ClassReport verify_class(const Mapping& t, int samples, unsigned seed, double slack = 1e-9);

/// Catalog of builtin test mappings.
/// Names: rotation (theta), reflection (axis), proj_ball (center=0, r),
/// proj_box (half-width), scale (a < -1), i_minus_rot90.
Mapping builtin(const std::string& name, int dim,
                const std::map<std::string, double>& params = {});

std::vector<std::string> builtin_names();

}  // namespace cq
