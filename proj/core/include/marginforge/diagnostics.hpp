#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "marginforge/dual_solver.hpp"
#include "marginforge/primal_solver.hpp"

namespace marginforge::diagnostics {

// Residuals of the KKT system for a primal/dual pair. All fields >= 0; a pair
// is KKT-consistent when every field is below the caller's tolerance.
struct KktReport {
    double stationarity;       // ||w - prox_h(A lambda)||
    double primalFeasibility;  // max of margin violations and set distance
    double dualFeasibility;    // violation of lambda >= 0 (and lambda <= C/m when boxed)
    double complementarity;    // max_i |lambda_i (1 - y_i <x_i, w>)|
};

KktReport kkt_report(const dual::DualProblem& dp, const Vector& w, const Vector& lambda);

// primalValue - dualValue in the maximization orientation; weak duality
// predicts a nonnegative result up to numerical tolerance.
double duality_gap(double primalValue, double dualValueMaxOrientation);
bool weak_duality_violated(double gap, double tol = 1e-9);

enum class SupportClass { InteriorZero, OnMargin, BoundActive };

struct SupportVectorReport {
    std::vector<SupportClass> classes;
};

// lambda_i <= tol -> InteriorZero; lambda_i >= boxUpper - tol -> BoundActive
// (boxed only); anything else -> OnMargin.
SupportVectorReport support_vectors(const Vector& lambda, std::optional<double> boxUpper,
                                    double tol);

// Largest violation of the saddle inequalities
//   L(wBar, lambda) <= L(wBar, lambdaBar) <= L(w, lambdaBar)
// for the hard-margin Lagrangian over random feasible perturbations, plus the
// analytic minimizer of L(., lambdaBar) and coordinate probes in lambda.
// Returns 0 when no violation is found.
double saddle_check(const dual::DualProblem& dp, const Vector& wBar, const Vector& lambdaBar,
                    int trials, std::uint64_t seed);

struct BoundAudit {
    bool passed;
    long firstOffendingK;  // -1 when passed
    double maxExcess;
};

// Checks every recorded row of a primal trace against the schedule's rate
// bound: f(u_k) - fStar for the hybrid schedule, V_k - fStar for pegasos.
BoundAudit bound_audit(const SolverTrace& trace, const problems::SolverConstants& c,
                       const primal::StepSchedule& s, double fStar, double dist1);

// Stable-key-order JSON for CLI output and golden tests.
std::string to_json(const KktReport& r);
std::string to_json(const SupportVectorReport& r);

}  // namespace marginforge::diagnostics
