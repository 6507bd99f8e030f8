#include <doctest.h>

#include <Eigen/Eigenvalues>

#include "marginforge/dual_solver.hpp"
#include "marginforge/oracle.hpp"
#include "testutil.hpp"

using namespace marginforge;
using namespace marginforge::dual;
using testutil::vec2;
using testutil::vec3;

namespace {

DualProblem two_point_hard(std::optional<sets::ConvexSetSpec> theta = {}) {
    auto ds = testutil::two_point_dataset();
    problems::HardMarginProblem p(ds, theta ? *theta : sets::whole_space(ds.dim()));
    return DualProblem::from_hard(p);
}

// Random operator-form dual problem mixing feasible regions and couplers.
DualProblem random_dual(SplitMix64& rng, long m, int d) {
    Matrix A(d, m);
    for (long j = 0; j < m; ++j) A.col(j) = testutil::randn(rng, d);
    FeasibleRegion feasible = rng.next_double() < 0.5
                                  ? FeasibleRegion{OrthantFeasible{}}
                                  : FeasibleRegion{BoxFeasible{0.2 + rng.next_double()}};
    const auto regs = testutil::regularizer_variants(rng, d);
    const auto setsList = testutil::set_variants(rng, d);
    Coupler coupler;
    if (rng.next_double() < 0.5) {
        coupler = SetTheta{setsList[rng.next_below(setsList.size())]};
    } else {
        coupler = Regularizer{regs[rng.next_below(regs.size())]};
    }
    return DualProblem::from_operator(std::move(A), std::move(feasible), std::move(coupler));
}

}  // namespace

TEST_CASE("dual value on the hand-solved instance") {
    auto dp = two_point_hard();
    CHECK(dual_value(dp, vec2(0.5, 0.5)) == doctest::Approx(-0.5).epsilon(1e-15));
    CHECK(dual_value(dp, vec2(0, 0)) == 0.0);

    // whole space: the distance term vanishes, leaving the plain quadratic
    SplitMix64 rng(1);
    const Vector lambda = vec2(rng.next_double(), rng.next_double());
    const Matrix A = dp.op();
    const double direct = 0.5 * lambda.dot(A.transpose() * A * lambda) - lambda.sum();
    CHECK(dual_value(dp, lambda) == doctest::Approx(direct).epsilon(1e-14));
}

TEST_CASE("dual gradient stationary at the optimum") {
    auto dp = two_point_hard();
    CHECK(dual_gradient(dp, vec2(0.5, 0.5)).norm() <= 1e-15);
    CHECK(dual_gradient(dp, vec2(0, 0)) == vec2(-1, -1));
}

TEST_CASE("dual gradient matches finite differences across couplers") {
    SplitMix64 rng(1212);
    int done = 0;
    while (done < 200) {
        const int d = 2 + static_cast<int>(rng.next_below(3));
        const long m = 2 + static_cast<long>(rng.next_below(4));
        auto dp = random_dual(rng, m, d);
        const Vector lambda = testutil::randn(rng, static_cast<int>(m), 1.5);
        const Vector g = dual_gradient(dp, lambda);
        const Vector fd = oracle::finite_diff(
            [&dp](const Vector& l) { return dual_value(dp, l); }, lambda, 1e-6);
        CHECK((fd - g).norm() <= 1e-5 * std::max(1.0, g.norm()));
        ++done;
    }
}

TEST_CASE("dual value is convex along random segments") {
    SplitMix64 rng(1313);
    for (int trial = 0; trial < 200; ++trial) {
        auto dp = random_dual(rng, 3, 3);
        const Vector a = testutil::randn(rng, 3, 2.0);
        const Vector b = testutil::randn(rng, 3, 2.0);
        const double mid = dual_value(dp, 0.5 * (a + b));
        CHECK(mid <= 0.5 * dual_value(dp, a) + 0.5 * dual_value(dp, b) + 1e-10);
    }
}

TEST_CASE("lipschitz estimate") {
    auto dp = two_point_hard();
    CHECK(lipschitz_estimate(dp) == doctest::Approx(2.0 * 1.01).epsilon(1e-9));

    // rank-1: single column of norm c
    Matrix single(3, 1);
    single.col(0) = vec3(1, 2, 2);  // norm 3
    auto dp1 = DualProblem::from_operator(single, OrthantFeasible{},
                                          SetTheta{sets::whole_space(3)});
    CHECK(lipschitz_estimate(dp1) == doctest::Approx(9.0 * 1.01).epsilon(1e-9));

    // orthogonal equal-norm columns: eigenvalue with multiplicity
    Matrix ortho = Matrix::Zero(3, 2);
    ortho(0, 0) = 2.0;
    ortho(1, 1) = 2.0;
    auto dp2 = DualProblem::from_operator(ortho, OrthantFeasible{},
                                          SetTheta{sets::whole_space(3)});
    CHECK(lipschitz_estimate(dp2) == doctest::Approx(4.0 * 1.01).epsilon(1e-9));
}

TEST_CASE("lipschitz estimate dominates observed gradient variation") {
    SplitMix64 rng(1414);
    for (int trial = 0; trial < 100; ++trial) {
        auto dp = random_dual(rng, 4, 3);
        const double L = lipschitz_estimate(dp);
        const Vector l1 = testutil::randn(rng, 4, 2.0);
        const Vector l2 = testutil::randn(rng, 4, 2.0);
        const double lhs = (dual_gradient(dp, l1) - dual_gradient(dp, l2)).norm();
        CHECK(lhs <= L * (l1 - l2).norm() + 1e-10);
    }
}

TEST_CASE("solve reaches the hand-solved optimum") {
    auto dp = two_point_hard();
    DualConfig cfg;
    cfg.maxIter = 5000;
    cfg.tolerance = 1e-12;
    const auto result = solve(dp, cfg, vec2(0, 0));
    CHECK((result.lambda - vec2(0.5, 0.5)).norm() <= 1e-6);
    CHECK((result.wRecovered - vec3(1, 0, 0)).norm() <= 1e-6);
    CHECK(result.converged);
}

TEST_CASE("soft boxes clip the multipliers") {
    auto ds = testutil::two_point_dataset();
    problems::SoftMarginProblem p(ds, sets::whole_space(3), 0.6);  // C/m = 0.3 < 0.5
    auto dp = DualProblem::from_soft(p);
    DualConfig cfg;
    cfg.maxIter = 5000;
    cfg.tolerance = 1e-12;
    const auto result = solve(dp, cfg, vec2(0, 0));
    CHECK(result.lambda[0] == doctest::Approx(0.3).epsilon(1e-9));
    CHECK(result.lambda[1] == doctest::Approx(0.3).epsilon(1e-9));
}

TEST_CASE("an optimal start terminates immediately") {
    auto dp = two_point_hard();
    DualConfig cfg;
    cfg.tolerance = 1e-10;
    const auto result = solve(dp, cfg, vec2(0.5, 0.5));
    CHECK(result.iterations == 1);
    CHECK(result.converged);
}

TEST_CASE("plain projected gradient descends monotonically") {
    SplitMix64 rng(1515);
    for (int trial = 0; trial < 20; ++trial) {
        auto dp = random_dual(rng, 4, 3);
        DualConfig cfg;
        cfg.maxIter = 300;
        cfg.tolerance = 1e-14;
        cfg.accelerated = false;
        const auto result = solve(dp, cfg, testutil::randn(rng, 4, 1.0));
        const int col = result.trace.column_index("dual_value");
        double prev = std::numeric_limits<double>::infinity();
        for (const auto& row : result.trace.rows) {
            CHECK(row[col] <= prev + 1e-12);
            prev = row[col];
        }
    }
}

TEST_CASE("recover_primal projects the weighted sum") {
    auto dp = two_point_hard();
    CHECK(recover_primal(dp, vec2(0.5, 0.5)) == vec3(1, 0, 0));
    CHECK(recover_primal(dp, vec2(0, 0)) == vec3(0, 0, 0));

    auto ballDp = two_point_hard(sets::ball(Vector::Zero(3), 0.5));
    CHECK((recover_primal(ballDp, vec2(0.5, 0.5)) - vec3(0.5, 0, 0)).norm() < 1e-15);
}

TEST_CASE("epsilon transfer: primal recovery is operator-norm stable") {
    SplitMix64 rng(1616);
    auto dp = two_point_hard(sets::ball(Vector::Zero(3), 0.8));
    const Vector lambdaStar = vec2(0.5, 0.5);
    const Vector wStar = recover_primal(dp, lambdaStar);
    Eigen::SelfAdjointEigenSolver<Matrix> eig(dp.op().transpose() * dp.op());
    const double opNorm = std::sqrt(eig.eigenvalues().maxCoeff());
    for (int trial = 0; trial < 200; ++trial) {
        const Vector delta = testutil::randn(rng, 2, 1e-3);
        const Vector w = recover_primal(dp, lambdaStar + delta);
        CHECK((w - wStar).norm() <= opNorm * delta.norm() + 1e-10);
    }
}

TEST_CASE("kernelized duals") {
    auto ds = testutil::two_point_dataset();
    // non-linear kernel with a proper constraint set is rejected
    CHECK_THROWS_AS(DualProblem::from_kernel(ds, KernelSpec::rbf(1.0), OrthantFeasible{},
                                             sets::ball(Vector::Zero(3), 1.0)),
                    std::invalid_argument);

    // linear kernel routes to the operator form
    auto linear = DualProblem::from_kernel(ds, KernelSpec::linear(), OrthantFeasible{},
                                           sets::whole_space(3));
    CHECK(linear.has_primal_operator());

    // rbf + whole space: Gram-only problem, no primal recovery
    auto rbf = DualProblem::from_kernel(ds, KernelSpec::rbf(1.0), OrthantFeasible{},
                                        sets::whole_space(3));
    CHECK_FALSE(rbf.has_primal_operator());
    CHECK_THROWS_AS(recover_primal(rbf, vec2(0.1, 0.1)), std::invalid_argument);

    DualConfig cfg;
    cfg.maxIter = 2000;
    cfg.tolerance = 1e-10;
    const auto result = solve(rbf, cfg, vec2(0, 0));
    CHECK(result.converged);
    CHECK(result.wRecovered.size() == 0);
    // gradient of 0.5 l^T G l - e^T l vanishes where G l = e
    const Vector g = rbf.gram() * result.lambda - Vector::Ones(2);
    for (Eigen::Index i = 0; i < 2; ++i) {
        if (result.lambda[i] > 1e-8) CHECK(std::abs(g[i]) <= 1e-7);
    }
}

TEST_CASE("primal and dual paths agree across constraint-set shapes") {
    SplitMix64 rng(777);
    for (int inst = 0; inst < 6; ++inst) {
        auto ds = testutil::random_separable(rng, 5, 2);
        const int d = ds.dim();
        sets::ConvexSetSpec theta =
            inst % 3 == 0 ? sets::box(Vector::Constant(d, -0.4), Vector::Constant(d, 0.4))
            : inst % 3 == 1 ? sets::halfspace(vec3(1, 0, 0), 0.2)
                            : sets::nonneg_orthant(d);
        problems::SoftMarginProblem p(ds, theta, 1.0);
        const auto primal = oracle::long_run_reference(p, 2000000);
        const auto dp = DualProblem::from_soft(p);
        DualConfig cfg;
        cfg.maxIter = 300000;
        cfg.tolerance = 1e-12;
        cfg.recordEvery = cfg.maxIter;
        const auto dres = solve(dp, cfg, Vector::Zero(5));
        const double gap = primal.fStar - (-dres.dualValue);
        CHECK(gap <= 1e-6);
        CHECK(gap >= -1e-9);
    }
}

TEST_CASE("a zero operator is estimated at 0 and rejected by solve") {
    Matrix zero = Matrix::Zero(3, 2);
    auto dp = DualProblem::from_operator(zero, OrthantFeasible{}, SetTheta{sets::whole_space(3)});
    CHECK(lipschitz_estimate(dp) == 0.0);
    DualConfig cfg;
    CHECK_THROWS_AS(solve(dp, cfg, vec2(0, 0)), std::invalid_argument);
}

TEST_CASE("kernelized solve agrees with the grid oracle") {
    auto ds = testutil::two_point_dataset();
    auto dp = DualProblem::from_kernel(ds, KernelSpec::rbf(1.0), OrthantFeasible{},
                                       sets::whole_space(3));
    DualConfig cfg;
    cfg.maxIter = 5000;
    cfg.tolerance = 1e-12;
    const auto result = solve(dp, cfg, vec2(0, 0));
    const auto grid = oracle::dual_grid(dp, 400, 2.0 * result.lambda.lpNorm<Eigen::Infinity>());
    CHECK((result.lambda - *grid.lambdaStar).lpNorm<Eigen::Infinity>() <= 0.02);
    CHECK(dual_value(dp, result.lambda) <= dual_value(dp, *grid.lambdaStar) + 1e-12);
}

TEST_CASE("gram-only dual matches the operator form for linear kernels") {
    SplitMix64 rng(1717);
    auto ds = testutil::random_separable(rng, 4, 2);
    auto opForm = DualProblem::from_kernel(ds, KernelSpec::linear(), OrthantFeasible{},
                                           sets::whole_space(ds.dim()));
    // build the Gram route by hand to compare objective values
    const Matrix G = gram(ds, KernelSpec::linear(), true);
    for (int trial = 0; trial < 50; ++trial) {
        const Vector lambda = testutil::randn(rng, 4, 1.0).cwiseAbs();
        const double viaOperator = dual_value(opForm, lambda);
        const double viaGram = 0.5 * lambda.dot(G * lambda) - lambda.sum();
        CHECK(viaOperator == doctest::Approx(viaGram).epsilon(1e-12));
    }
}
