#include <doctest.h>

#include <Eigen/Eigenvalues>

#include "marginforge/core.hpp"
#include "testutil.hpp"

using namespace marginforge;
using testutil::vec2;
using testutil::vec3;

TEST_CASE("augment appends 1/biasScale") {
    LabeledDataset raw({{vec2(1, 2), +1}}, 2);
    auto a1 = augment(raw, 1.0);
    CHECK(a1.dim() == 3);
    CHECK(a1.augmented());
    CHECK(a1.samples()[0].x == vec3(1, 2, 1));

    auto a2 = augment(raw, 2.0);
    CHECK(a2.samples()[0].x == vec3(1, 2, 0.5));

    LabeledDataset empty(2);
    auto a3 = augment(empty, 1.0);
    CHECK(a3.dim() == 3);
    CHECK(a3.size() == 0);

    CHECK_THROWS_AS(augment(a1, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(augment(raw, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(augment(raw, -1.0), std::invalid_argument);
}

TEST_CASE("split_bias inverts the embedding") {
    auto [w1, b1] = split_bias(vec3(1, 0, 2), 1.0);
    CHECK(w1 == vec2(1, 0));
    CHECK(b1 == 2.0);

    auto [w2, b2] = split_bias(vec3(1, 0, 2), 2.0);
    CHECK(w2 == vec2(1, 0));
    CHECK(b2 == 1.0);

    Vector tooShort(1);
    tooShort << 3.0;
    CHECK_THROWS_AS(split_bias(tooShort, 1.0), std::invalid_argument);
}

TEST_CASE("dataset validation") {
    CHECK_THROWS_AS(LabeledDataset({{vec2(1, 2), 2}}, 2), std::invalid_argument);
    CHECK_THROWS_AS(LabeledDataset({{vec2(1, 2), +1}}, 3), std::invalid_argument);
    Vector bad = vec2(1, std::numeric_limits<double>::quiet_NaN());
    CHECK_THROWS_AS(LabeledDataset({{bad, +1}}, 2), std::invalid_argument);
}

TEST_CASE("gram matrices") {
    LabeledDataset orthonormal({{vec2(1, 0), +1}, {vec2(0, 1), +1}}, 2);
    const Matrix G = gram(orthonormal, KernelSpec::linear(), false);
    CHECK(G(0, 0) == 1.0);
    CHECK(G(0, 1) == 0.0);
    CHECK(G(1, 0) == 0.0);
    CHECK(G(1, 1) == 1.0);

    LabeledDataset opposite({{vec2(1, 0), +1}, {vec2(1, 0), -1}}, 2);
    const Matrix S = gram(opposite, KernelSpec::linear(), true);
    CHECK(S(0, 0) == 1.0);
    CHECK(S(0, 1) == -1.0);
    CHECK(S(1, 0) == -1.0);

    const Matrix R = gram(opposite, KernelSpec::rbf(1.0), false);
    CHECK(R(0, 0) == 1.0);
    CHECK(R(1, 1) == 1.0);
    CHECK(R(0, 1) == 1.0);  // identical points
}

TEST_CASE("gram matrices are symmetric PSD on random data") {
    SplitMix64 rng(41);
    const std::vector<KernelSpec> kernels = {KernelSpec::linear(), KernelSpec::polynomial(2, 1.0),
                                             KernelSpec::rbf(0.8)};
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<LabeledSample> raw;
        for (int i = 0; i < 8; ++i) {
            raw.push_back({testutil::randn(rng, 3), rng.next_double() < 0.5 ? +1 : -1});
        }
        LabeledDataset ds(std::move(raw), 3);
        for (const auto& k : kernels) {
            for (bool withSigns : {false, true}) {
                const Matrix G = gram(ds, k, withSigns);
                CHECK((G - G.transpose()).lpNorm<Eigen::Infinity>() == 0.0);
                Eigen::SelfAdjointEigenSolver<Matrix> eig(G);
                CHECK(eig.eigenvalues().minCoeff() >= -1e-10);
            }
        }
    }
}

TEST_CASE("kernel parameter validation") {
    CHECK_THROWS_AS(KernelSpec::polynomial(0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(KernelSpec::polynomial(2, -0.5), std::invalid_argument);
    CHECK_THROWS_AS(KernelSpec::rbf(0.0), std::invalid_argument);
}

TEST_CASE("feasibility equivalence of the bias embedding") {
    SplitMix64 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 2 + static_cast<int>(rng.next_below(3));
        const double biasScale = 0.5 + 2.0 * rng.next_double();
        std::vector<LabeledSample> raw;
        for (int i = 0; i < 5; ++i) {
            raw.push_back({testutil::randn(rng, n), rng.next_double() < 0.5 ? +1 : -1});
        }
        LabeledDataset ds(raw, n);
        auto aug = augment(ds, biasScale);

        const Vector w = testutil::randn(rng, n);
        const double b = rng.next_gaussian();
        Vector wHat(n + 1);
        wHat.head(n) = w;
        wHat[n] = biasScale * b;

        for (long i = 0; i < ds.size(); ++i) {
            const auto& s = ds.samples()[static_cast<size_t>(i)];
            const double rawMargin = s.y * (s.x.dot(w) + b);
            const double augMargin =
                aug.samples()[static_cast<size_t>(i)].y * aug.samples()[static_cast<size_t>(i)].x.dot(wHat);
            if (std::abs(rawMargin - 1.0) > 1e-9) {
                CHECK((rawMargin >= 1.0) == (augMargin >= 1.0 - 1e-12));
            }
            CHECK(rawMargin == doctest::Approx(augMargin).epsilon(1e-12));
        }
    }
}

TEST_CASE("norm sandwich under the bias embedding") {
    SplitMix64 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 2 + static_cast<int>(rng.next_below(3));
        const double biasScale = 0.5 + 2.0 * rng.next_double();
        const Vector w = testutil::randn(rng, n);
        const double lb = -1.0 - rng.next_double();
        const double ub = 1.0 + rng.next_double();
        const double b = testutil::uniform(rng, lb, ub);
        Vector wHat(n + 1);
        wHat.head(n) = w;
        wHat[n] = biasScale * b;

        const double lhs = 0.5 * w.squaredNorm();
        const double mid = 0.5 * wHat.squaredNorm();
        const double rhs = lhs + 0.5 * biasScale * biasScale *
                                     std::max(lb * lb, ub * ub);
        CHECK(lhs <= mid + 1e-12);
        CHECK(mid <= rhs + 1e-12);
    }
}

TEST_CASE("signed feature matrix columns") {
    auto ds = testutil::two_point_dataset();
    const Matrix A = signed_feature_matrix(ds);
    CHECK(A.rows() == 3);
    CHECK(A.cols() == 2);
    CHECK(Vector(A.col(0)) == vec3(1, 0, 1));
    CHECK(Vector(A.col(1)) == vec3(1, 0, -1));
}
