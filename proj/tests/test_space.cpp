#include "cq/schedule.hpp"
#include "cq/space.hpp"

#include "common.hpp"

#include <doctest.h>

using namespace cq;
using cq::test::vec;

TEST_CASE("combine interpolates between its endpoints") {
    Vector x = vec({1.0, -2.0});
    Vector y = vec({3.0, 4.0});
    CHECK((combine(0.0, x, y) - x).norm() == 0.0);
    CHECK((combine(1.0, x, y) - y).norm() == 0.0);
    CHECK((combine(0.5, x, y) - vec({2.0, 1.0})).norm() == doctest::Approx(0.0));
}

TEST_CASE("combine validates its inputs") {
    Vector x = vec({1.0, 2.0});
    CHECK_THROWS_AS(combine(0.5, x, vec({1.0})), std::invalid_argument);
    CHECK_THROWS_AS(combine(-0.1, x, x), std::invalid_argument);
    CHECK_THROWS_AS(combine(1.1, x, x), std::invalid_argument);
    CHECK_THROWS_AS(inner(x, vec({1.0})), std::invalid_argument);
}

TEST_CASE("box projection clamps coordinate-wise") {
    AmbientSet box = AmbientSet::box(vec({-1.0, -1.0}), vec({1.0, 1.0}));
    CHECK((box.project(vec({2.0, 0.5})) - vec({1.0, 0.5})).norm() == 0.0);
    CHECK((box.project(vec({-3.0, -2.0})) - vec({-1.0, -1.0})).norm() == 0.0);
    CHECK(box.contains(vec({0.0, 1.0})));
    CHECK(!box.contains(vec({0.0, 1.1})));
    CHECK(box.contains(vec({0.0, 1.05}), 0.1));
}

TEST_CASE("ball projection is radial retraction") {
    AmbientSet ball = AmbientSet::ball(vec({1.0, 0.0}), 2.0);
    CHECK((ball.project(vec({1.0, 0.5})) - vec({1.0, 0.5})).norm() == 0.0);
    CHECK((ball.project(vec({5.0, 0.0})) - vec({3.0, 0.0})).norm() == doctest::Approx(0.0));
    CHECK(ball.contains(vec({3.0, 0.0})));
    CHECK(!ball.contains(vec({3.1, 0.0})));
}

TEST_CASE("ambient constructors reject malformed sets") {
    CHECK_THROWS_AS(AmbientSet::box(vec({1.0}), vec({1.0, 2.0})), std::invalid_argument);
    CHECK_THROWS_AS(AmbientSet::box(vec({2.0}), vec({1.0})), std::invalid_argument);
    CHECK_THROWS_AS(AmbientSet::ball(vec({0.0}), 0.0), std::invalid_argument);
    CHECK(AmbientSet::whole_space().contains(vec({1e9, -1e9})));
}

TEST_CASE("schedules evaluate their closed forms") {
    CHECK(Schedule::constant(0.3).at(0) == 0.3);
    CHECK(Schedule::constant(0.3).at(100) == 0.3);
    CHECK(Schedule::harmonic().at(0) == doctest::Approx(0.5));
    CHECK(Schedule::harmonic().at(8) == doctest::Approx(0.9));
    CHECK(Schedule::reciprocal().at(0) == doctest::Approx(0.5));
    CHECK(Schedule::reciprocal().at(8) == doctest::Approx(0.1));
    CHECK(Schedule::geo_to_one(0.5).at(0) == doctest::Approx(0.5));
    CHECK(Schedule::geo_to_one(0.5).at(2) == doctest::Approx(0.875));
    CHECK(Schedule::geo_to_zero(0.5).at(2) == doctest::Approx(0.125));
}

TEST_CASE("schedule parsing round-trips through describe") {
    for (const char* text : {"const:0.25", "harmonic", "reciprocal", "geo_to_one:0.5",
                             "geo_to_zero:0.125"}) {
        Schedule s = Schedule::parse(text);
        CHECK(Schedule::parse(s.describe()).at(7) == s.at(7));
    }
}

TEST_CASE("schedule parsing rejects malformed text") {
    CHECK_THROWS_AS(Schedule::parse("nope"), std::invalid_argument);
    CHECK_THROWS_AS(Schedule::parse("const"), std::invalid_argument);
    CHECK_THROWS_AS(Schedule::parse("const:abc"), std::invalid_argument);
    CHECK_THROWS_AS(Schedule::parse("harmonic:0.5"), std::invalid_argument);
    CHECK_THROWS_AS(Schedule::parse("geo_to_one:1.5"), std::invalid_argument);
    CHECK_THROWS_AS(Schedule::parse("geo_to_zero:0"), std::invalid_argument);
    CHECK_THROWS_AS(Schedule::constant(1.0).at(-1), std::invalid_argument);
    CHECK_THROWS_AS(Schedule().at(0), std::logic_error);
}
