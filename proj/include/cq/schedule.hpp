#pragma once

#include <stdexcept>
#include <string>

namespace cq {

/// Named closed-form parameter sequences, reproducible from config text:
///   const:c      -> c
///   harmonic     -> 1 - 1/(n+2)
///   reciprocal   -> 1/(n+2)
///   geo_to_one:r -> 1 - r^(n+1)
///   geo_to_zero:r-> r^(n+1)
class Schedule {
public:
    enum class Kind { Unset, Constant, Harmonic, Reciprocal, GeoToOne, GeoToZero };

    Schedule() = default;
    Schedule(Kind kind, double param) : kind_(kind), param_(param) {}

    static Schedule constant(double c) { return {Kind::Constant, c}; }
    static Schedule harmonic() { return {Kind::Harmonic, 0.0}; }
    static Schedule reciprocal() { return {Kind::Reciprocal, 0.0}; }
    static Schedule geo_to_one(double r) { return {Kind::GeoToOne, r}; }
    static Schedule geo_to_zero(double r) { return {Kind::GeoToZero, r}; }

    bool set() const { return kind_ != Kind::Unset; }

    double at(int n) const;

    static Schedule parse(const std::string& text);
    std::string describe() const;

private:
    Kind kind_ = Kind::Unset;
    double param_ = 0.0;
};

}  // namespace cq
