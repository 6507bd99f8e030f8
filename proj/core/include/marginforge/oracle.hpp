#pragma once

#include <functional>
#include <optional>

#include "marginforge/dual_solver.hpp"
#include "marginforge/problems.hpp"

namespace marginforge::oracle {

enum class OracleMethod { ActiveSet, GridSearch, LongRun };

// Reference solution at desk scale. For ActiveSet, fStar is the recomputed
// primal objective at wStar; for GridSearch it is the negated best dual value
// (the dual estimate of the primal optimum); for LongRun the best objective
// value seen.
struct OracleSolution {
    Vector wStar;
    std::optional<Vector> lambdaStar;
    double fStar;
    OracleMethod method;
};

// Exact hard-margin solver for theta = whole space by enumeration of active
// sets (m <= 12). For each subset S solves the equality-constrained quadratic
// via the signed Gram subsystem, keeps candidates with lambda_S >= -1e-12 and
// all margins >= 1 - 1e-10, and returns the feasible candidate of minimum
// 0.5||w||^2. Singular subsystems are skipped. Throws InfeasibleProblem when
// no candidate survives.
OracleSolution active_set_hard_margin(const LabeledDataset& ds);

// High-iteration hybrid subgradient run on a deliberately separate code path.
// Returns the best iterate found; the value carries uncertainty of order
// ell^2 ln(iters) / (gamma iters).
OracleSolution long_run_reference(const problems::SoftMarginProblem& p, long iters);

// Exhaustive grid over [0, radius]^m (clipped to the box when boxed), m <= 3.
OracleSolution dual_grid(const dual::DualProblem& dp, int perAxis, double radius);

// Central differences: ((f(x + h e_i) - f(x - h e_i)) / 2h)_i.
Vector finite_diff(const std::function<double(const Vector&)>& f, const Vector& x, double h);

}  // namespace marginforge::oracle
