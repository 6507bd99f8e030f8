#pragma once

#include <cstdint>
#include <optional>
#include <variant>

#include "marginforge/problems.hpp"
#include "marginforge/trace.hpp"

namespace marginforge::dual {

// Multiplier feasible region: the nonnegative orthant (hard margin) or the
// box [0, upper]^m with upper = C/m (soft margin).
struct OrthantFeasible {};
struct BoxFeasible {
    double upper;
};
using FeasibleRegion = std::variant<OrthantFeasible, BoxFeasible>;

// Coupling term of the dual objective: either the squared distance to a
// constraint set or the Moreau envelope of a regularizer. Both cases reduce
// to the same envelope machinery, with the set handled as its indicator.
struct SetTheta {
    sets::ConvexSetSpec set;
};
struct Regularizer {
    prox::RegularizerSpec h;
};
using Coupler = std::variant<SetTheta, Regularizer>;

// Minimization form of the Lagrange dual:
//   phi(lambda) = 0.5 lambda^T A^T A lambda - e^T lambda - 0.5 d(A lambda; Theta)^2
// (set coupling), or D_h(A lambda) - e^T lambda (regularizer coupling), over
// the feasible region. A has column j = y_j x_j. Kernelized problems carry
// only the signed Gram matrix: they expose no primal operator and admit no
// coupling term, as the distance term needs an explicit primal vector.
class DualProblem {
public:
    static DualProblem from_hard(const problems::HardMarginProblem& p);
    static DualProblem from_soft(const problems::SoftMarginProblem& p);
    static DualProblem from_regularized(const problems::RegularizedProblem& p);
    static DualProblem from_operator(Matrix A, FeasibleRegion feasible, Coupler coupler);

    // Linear kernels build the explicit operator; any other kernel requires
    // theta to be the whole space and yields a Gram-only problem.
    static DualProblem from_kernel(const LabeledDataset& ds, const KernelSpec& k,
                                   FeasibleRegion feasible, const sets::ConvexSetSpec& theta);

    long multipliers() const { return m_; }
    bool has_primal_operator() const { return hasOperator_; }
    const Matrix& op() const;
    const Matrix& gram() const;
    const FeasibleRegion& feasible() const { return feasible_; }
    const Coupler& coupler() const;
    // Coupler translated to its proximal form (set -> indicator).
    const prox::RegularizerSpec& coupling_regularizer() const;

private:
    DualProblem() = default;
    Matrix A_;
    Matrix G_;
    bool hasOperator_ = true;
    long m_ = 0;
    FeasibleRegion feasible_;
    std::optional<Coupler> coupler_;
    std::optional<prox::RegularizerSpec> h_;
};

Vector project_feasible(const FeasibleRegion& f, const Vector& lambda);

double dual_value(const DualProblem& dp, const Vector& lambda);

// grad phi(lambda) = A^T prox_h(A lambda) - e (Gram-only: G lambda - e).
// Lipschitz with constant lambda_max(A^T A).
Vector dual_gradient(const DualProblem& dp, const Vector& lambda);

// Power iteration on A^T A from a fixed pseudo-random start (seed 0x5EED)
// until the Rayleigh quotient settles to 1e-10 relative or 500 iterations,
// times a 1.01 safety factor. Returns 0 for the zero operator.
double lipschitz_estimate(const DualProblem& dp);

// w = prox_h(A lambda), i.e. P(A lambda; Theta) for set coupling. Throws for
// Gram-only problems.
Vector recover_primal(const DualProblem& dp, const Vector& lambda);

// Objective of the primal problem the dual was built from, evaluated at a
// recovered point: 0.5||w||^2 plus the coupler penalty, plus the hinge term
// when the feasible region is a box.
double primal_objective(const DualProblem& dp, const Vector& w);

struct DualConfig {
    long maxIter = 5000;
    double tolerance = 1e-8;  // on the gradient-mapping norm ||L (lambda - lambda+)||
    bool accelerated = true;
    double stepsizeSafety = 1.0;  // step = stepsizeSafety / L
    long recordEvery = 1;
};

struct DualResult {
    Vector lambda;
    Vector wRecovered;  // empty for Gram-only problems
    double dualValue;
    long iterations;
    bool converged;
    SolverTrace trace;
};

// Projected gradient with step 1/L, or its Nesterov-accelerated variant with
// adaptive restart on dual-value increase. Stops on the projected-gradient
// mapping criterion or at maxIter. Trace columns: k, dual_value,
// grad_map_norm, primal_value_of_recovered, gap, ns.
DualResult solve(const DualProblem& dp, const DualConfig& c, const Vector& lambda0);

}  // namespace marginforge::dual
