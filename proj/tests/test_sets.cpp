#include <doctest.h>

#include "marginforge/oracle.hpp"
#include "marginforge/sets.hpp"
#include "testutil.hpp"

using namespace marginforge;
using namespace marginforge::sets;
using testutil::vec2;

TEST_CASE("projection closed forms") {
    const auto b = ball(vec2(0, 0), 1.0);
    CHECK((project(b, vec2(3, 4)) - vec2(0.6, 0.8)).norm() < 1e-15);

    const auto hp = hyperplane(vec2(0, 1), 0.0);
    CHECK(project(hp, vec2(2, 3)) == vec2(2, 0));

    const auto bx = box(vec2(0, 0), vec2(1, 1));
    CHECK(project(bx, vec2(-1, 0.5)) == vec2(0, 0.5));

    const auto hs = halfspace(vec2(1, 0), 1.0);
    CHECK(project(hs, vec2(0.5, 0.5)) == vec2(0.5, 0.5));  // interior point untouched
    CHECK((project(hs, vec2(3, 0.5)) - vec2(1, 0.5)).norm() < 1e-15);

    CHECK_THROWS_AS(project(b, Vector::Zero(3)), std::invalid_argument);
}

TEST_CASE("distance closed forms") {
    const auto hp = hyperplane(vec2(3, 4), -5.0);
    CHECK(distance(hp, vec2(0, 0)) == doctest::Approx(1.0).epsilon(1e-14));

    const auto ws = whole_space(2);
    CHECK(distance(ws, vec2(17, -3)) == 0.0);

    const auto b = ball(vec2(0, 0), 1.0);
    CHECK(distance(b, vec2(3, 4)) == doctest::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("sq_dist_grad is the projection residual") {
    const auto b = ball(vec2(0, 0), 1.0);
    CHECK((sq_dist_grad(b, vec2(3, 4)) - vec2(2.4, 3.2)).norm() < 1e-14);
    CHECK(sq_dist_grad(b, vec2(0.3, 0.2)) == vec2(0, 0));

    const auto hp = hyperplane(vec2(0, 1), 0.0);
    CHECK(sq_dist_grad(hp, vec2(2, 3)) == vec2(0, 3));
}

TEST_CASE("margin between parallel hyperplanes") {
    CHECK(margin_between({vec2(1, 0), 1.0, -1.0}) == 2.0);
    CHECK(margin_between({vec2(3, 4), 0.0, 5.0}) == 1.0);
    CHECK(margin_between({vec2(3, 4), 2.5, 2.5}) == 0.0);
    CHECK_THROWS_AS(margin_between({vec2(0, 0), 0.0, 1.0}), std::invalid_argument);
}

TEST_CASE("contains") {
    const auto b = ball(vec2(0, 0), 1.0);
    CHECK(contains(b, vec2(1, 0), 0.0));
    CHECK(contains(b, vec2(1.0005, 0), 1e-3));
    CHECK_FALSE(contains(nonneg_orthant(2), vec2(-1, 0), 0.0));
}

TEST_CASE("set factories validate invariants") {
    CHECK_THROWS_AS(ball(vec2(0, 0), 0.0), std::invalid_argument);
    CHECK_THROWS_AS(box(vec2(1, 0), vec2(0, 1)), std::invalid_argument);
    CHECK_THROWS_AS(halfspace(vec2(0, 0), 1.0), std::invalid_argument);
    CHECK_THROWS_AS(hyperplane(vec2(0, 0), 1.0), std::invalid_argument);
    CHECK_THROWS_AS(whole_space(0), std::invalid_argument);
}

TEST_CASE("projection axioms on random data") {
    SplitMix64 rng(101);
    for (int dim : {2, 4}) {
        for (const auto& s : testutil::set_variants(rng, dim)) {
            for (int trial = 0; trial < 500; ++trial) {
                const Vector x = testutil::randn(rng, dim, 3.0);
                const Vector y = testutil::randn(rng, dim, 3.0);
                const Vector px = project(s, x);
                const Vector py = project(s, y);

                // idempotence
                CHECK((project(s, px) - px).norm() <= 1e-12);
                // nonexpansiveness
                CHECK((px - py).norm() <= (x - y).norm() + 1e-12);
                // variational inequality against a random member of the set
                const Vector z = project(s, testutil::randn(rng, dim, 3.0));
                CHECK((x - px).dot(z - px) <= 1e-10);
            }
        }
    }
}

TEST_CASE("sq_dist_grad matches finite differences away from the boundary") {
    SplitMix64 rng(202);
    for (int dim : {2, 3}) {
        for (const auto& s : testutil::set_variants(rng, dim)) {
            if (is_whole_space(s)) continue;  // gradient identically zero
            int checked = 0;
            while (checked < 50) {
                const Vector x = testutil::randn(rng, dim, 3.0);
                if (distance(s, x) <= 1e-3) continue;
                ++checked;
                const Vector g = sq_dist_grad(s, x);
                const Vector fd = oracle::finite_diff(
                    [&s](const Vector& p) {
                        const double d = distance(s, p);
                        return 0.5 * d * d;
                    },
                    x, 1e-6);
                CHECK((fd - g).norm() <= 1e-5 * std::max(1.0, g.norm()));
            }
        }
    }
}

TEST_CASE("hyperplane distance identity") {
    SplitMix64 rng(303);
    for (int trial = 0; trial < 500; ++trial) {
        const int dim = 2 + static_cast<int>(rng.next_below(3));
        Vector normal = testutil::randn(rng, dim);
        while (normal.norm() < 1e-6) normal = testutil::randn(rng, dim);
        const double offset = rng.next_gaussian();
        const auto hp = hyperplane(normal, offset);
        const Vector x = testutil::randn(rng, dim, 4.0);
        const double viaProjection = (x - project(hp, x)).norm();
        const double analytic = std::abs(normal.dot(x) + offset) / normal.norm();
        CHECK(viaProjection == doctest::Approx(analytic).epsilon(1e-12));
    }
}
