#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <variant>

namespace cq {

/// Points of the ambient space: R^d with the standard inner product.
using Vector = Eigen::VectorXd;

inline bool is_finite(const Vector& v) { return v.allFinite(); }

inline double inner(const Vector& u, const Vector& v) {
    if (u.size() != v.size()) throw std::invalid_argument("inner: dimension mismatch");
    return u.dot(v);
}

inline double norm_sq(const Vector& v) { return v.squaredNorm(); }

/// Convex combination (1-alpha)*x + alpha*y, alpha in [0,1].
inline Vector combine(double alpha, const Vector& x, const Vector& y) {
    if (x.size() != y.size()) throw std::invalid_argument("combine: dimension mismatch");
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("combine: alpha out of [0,1]");
    return (1.0 - alpha) * x + alpha * y;
}

struct WholeSpace {};

struct Box {
    Vector lower;
    Vector upper;
};

struct Ball {
    Vector center;
    double radius;
};

/// Closed convex ambient set C with an exact closed-form metric projection.
class AmbientSet {
public:
    AmbientSet() : set_(WholeSpace{}) {}

    static AmbientSet whole_space() { return AmbientSet(WholeSpace{}); }

    static AmbientSet box(Vector lower, Vector upper) {
        if (lower.size() != upper.size())
            throw std::invalid_argument("Box: dimension mismatch");
        if ((lower.array() > upper.array()).any())
            throw std::invalid_argument("Box: lower > upper");
        return AmbientSet(Box{std::move(lower), std::move(upper)});
    }

    static AmbientSet ball(Vector center, double radius) {
        if (!(radius > 0.0)) throw std::invalid_argument("Ball: radius must be positive");
        return AmbientSet(Ball{std::move(center), radius});
    }

    bool is_whole_space() const { return std::holds_alternative<WholeSpace>(set_); }
    bool is_box() const { return std::holds_alternative<Box>(set_); }
    bool is_ball() const { return std::holds_alternative<Ball>(set_); }

    const Box& as_box() const { return std::get<Box>(set_); }
    const Ball& as_ball() const { return std::get<Ball>(set_); }

    /// Exact metric projection P_C.
    Vector project(const Vector& x) const {
        if (const auto* b = std::get_if<Box>(&set_)) {
            return x.cwiseMax(b->lower).cwiseMin(b->upper);
        }
        if (const auto* s = std::get_if<Ball>(&set_)) {
            Vector r = x - s->center;
            double n = r.norm();
            if (n <= s->radius) return x;
            return s->center + (s->radius / n) * r;
        }
        return x;
    }

    bool contains(const Vector& x, double tol = 0.0) const {
        if (const auto* b = std::get_if<Box>(&set_)) {
            return ((x.array() >= b->lower.array() - tol) &&
                    (x.array() <= b->upper.array() + tol)).all();
        }
        if (const auto* s = std::get_if<Ball>(&set_)) {
            return (x - s->center).norm() <= s->radius + tol;
        }
        return true;
    }

private:
    explicit AmbientSet(std::variant<WholeSpace, Box, Ball> s) : set_(std::move(s)) {}
    std::variant<WholeSpace, Box, Ball> set_;
};

inline Vector project_ambient(const AmbientSet& c, const Vector& x) { return c.project(x); }

}  // namespace cq
