#include "cq/projection.hpp"

#include "common.hpp"

#include <doctest.h>
#include <random>

using namespace cq;
using cq::test::vec;

namespace {

Vector random_vec(std::mt19937& gen, int dim, double radius) {
    std::uniform_real_distribution<double> u(-radius, radius);
    Vector v(dim);
    for (int i = 0; i < dim; ++i) v[i] = u(gen);
    return v;
}

Halfspace random_halfspace(std::mt19937& gen, int dim) {
    Vector a = random_vec(gen, dim, 1.0);
    while (a.norm() < 0.1) a = random_vec(gen, dim, 1.0);
    std::uniform_real_distribution<double> u(-1.0, 2.0);
    return Halfspace{a, u(gen)};
}

}  // namespace

TEST_CASE("project_halfspace is the closed-form normal step") {
    Halfspace h{vec({1.0, 0.0}), 1.0};  // z1 <= 1
    CHECK((project_halfspace(h, vec({0.5, 2.0})) - vec({0.5, 2.0})).norm() == 0.0);
    CHECK((project_halfspace(h, vec({3.0, 2.0})) - vec({1.0, 2.0})).norm() ==
          doctest::Approx(0.0));
    Halfspace scaled{vec({2.0, 0.0}), 2.0};  // same set, unnormalized
    CHECK((project_halfspace(scaled, vec({3.0, 2.0})) - vec({1.0, 2.0})).norm() ==
          doctest::Approx(0.0));
}

TEST_CASE("two halfspace corner projection") {
    ProjectionProblem p;
    p.anchor = vec({1.0, 1.0});
    p.halfspaces = {Halfspace{vec({1.0, 0.0}), 0.0}, Halfspace{vec({0.0, 1.0}), 0.0}};
    p.ambient = AmbientSet::whole_space();
    ProjectionResult r = project_intersection(p);
    CHECK(r.point.norm() == doctest::Approx(0.0));

    std::swap(p.halfspaces[0], p.halfspaces[1]);
    ProjectionResult r2 = project_intersection(p);
    CHECK((r.point - r2.point).norm() == doctest::Approx(0.0));
}

TEST_CASE("only the binding halfspace matters when one is slack") {
    ProjectionProblem p;
    p.anchor = vec({3.0, 0.0});
    p.halfspaces = {Halfspace{vec({1.0, 0.0}), 1.0}, Halfspace{vec({0.0, 1.0}), 5.0}};
    p.ambient = AmbientSet::whole_space();
    ProjectionResult r = project_intersection(p);
    CHECK((r.point - vec({1.0, 0.0})).norm() == doctest::Approx(0.0));
}

TEST_CASE("ball ambient clips the halfspace projection") {
    ProjectionProblem p;
    p.anchor = vec({0.0, 3.0});
    p.halfspaces = {Halfspace{vec({0.0, 1.0}), 0.0}};  // z2 <= 0
    p.ambient = AmbientSet::ball(vec({0.0, 0.0}), 1.0);
    ProjectionResult r = project_intersection(p);
    CHECK((r.point - vec({0.0, 0.0})).norm() <= 1e-8);
}

TEST_CASE("box ambient clips coordinate-wise") {
    ProjectionProblem p;
    p.anchor = vec({4.0, 4.0});
    p.halfspaces = {Halfspace{vec({1.0, 0.0}), 0.5}};
    p.ambient = AmbientSet::box(vec({-1.0, -1.0}), vec({1.0, 1.0}));
    ProjectionResult r = project_intersection(p);
    CHECK((r.point - vec({0.5, 1.0})).norm() <= 1e-8);
}

TEST_CASE("solver agrees with the cyclic oracle on random problems") {
    std::mt19937 gen(5);
    for (int trial = 0; trial < 40; ++trial) {
        ProjectionProblem p;
        int dim = (trial % 2 == 0) ? 2 : 4;
        p.anchor = random_vec(gen, dim, 2.0);
        int m = 1 + trial % 2;
        for (int i = 0; i < m; ++i) p.halfspaces.push_back(random_halfspace(gen, dim));
        // Keep the origin feasible so the intersection is never empty.
        for (auto& h : p.halfspaces) h.b = std::max(h.b, 0.1);
        p.ambient = (trial % 3 == 0) ? AmbientSet::ball(Vector::Zero(dim), 3.0)
                                     : AmbientSet::whole_space();
        ProjectionOptions opts;
        opts.certificate_samples = 30;
        ProjectionResult r = project_intersection(p, opts);
        Vector oracle = oracle_project(p);
        CHECK((r.point - oracle).norm() <= 1e-6);
        CHECK(r.vi_residual <= 1e-8);
        CHECK(vi_certificate(p, r.point, 30, 99) <= 1e-8);
    }
}

TEST_CASE("antiparallel empty slab raises InfeasibleError") {
    ProjectionProblem p;
    p.anchor = vec({0.0, 0.0});
    p.halfspaces = {Halfspace{vec({1.0, 0.0}), -1.0},   // z1 <= -1
                    Halfspace{vec({-1.0, 0.0}), -1.0}}; // z1 >= 1
    p.ambient = AmbientSet::whole_space();
    CHECK_THROWS_AS(project_intersection(p), InfeasibleError);
}

TEST_CASE("degenerate halfspaces are whole-space or empty") {
    ProjectionProblem p;
    p.anchor = vec({2.0, 0.0});
    p.halfspaces = {Halfspace{Vector::Zero(2), 1.0}, Halfspace{vec({1.0, 0.0}), 1.0}};
    p.ambient = AmbientSet::whole_space();
    ProjectionResult r = project_intersection(p);
    CHECK((r.point - vec({1.0, 0.0})).norm() == doctest::Approx(0.0));

    p.halfspaces[0].b = -1.0;
    CHECK_THROWS_AS(project_intersection(p), InfeasibleError);
}

TEST_CASE("sample_feasible lands inside the target set") {
    std::mt19937 gen(9);
    ProjectionProblem p;
    p.anchor = vec({0.0, 0.0});
    p.halfspaces = {Halfspace{vec({1.0, 1.0}), 1.0}, Halfspace{vec({1.0, -1.0}), 1.0}};
    p.ambient = AmbientSet::ball(Vector::Zero(2), 5.0);
    for (int trial = 0; trial < 20; ++trial) {
        Vector y = sample_feasible(p, random_vec(gen, 2, 6.0));
        for (const auto& h : p.halfspaces) CHECK(h.contains(y, 1e-9));
        CHECK(p.ambient.contains(y, 1e-9));
    }
}
