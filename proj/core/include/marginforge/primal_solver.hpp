#pragma once

#include <cstdint>
#include <variant>

#include "marginforge/problems.hpp"
#include "marginforge/trace.hpp"

namespace marginforge::primal {

// alpha_k = 2 / (gamma (k + r)), requires r >= 16 L^2 / gamma^2. The update
// splits the objective into hinge subgradient plus explicit quadratic
// gradient.
struct HybridSchedule {
    double gamma;
    double r;
};

// alpha_k = 1 / (gamma k); whole objective treated as one nonsmooth function.
struct PegasosSchedule {
    double gamma;
};

using StepSchedule = std::variant<HybridSchedule, PegasosSchedule>;

// Validates r against 16 L^2 / gamma^2; defaults to max(16 L^2 / gamma^2, 16).
StepSchedule hybrid_schedule(const problems::SolverConstants& c, double r);
StepSchedule hybrid_schedule(const problems::SolverConstants& c);
StepSchedule pegasos_schedule(double gamma);

double step_size(const StepSchedule& s, long k);

inline constexpr long kFullBatch = 0;

struct PrimalConfig {
    long maxIter = 1000;
    std::uint64_t seed = 0;
    long recordEvery = 1;
    long batchSize = kFullBatch;
};

// wLast is the point after the final update; wAvg the uniform average of the
// maxIter evaluated iterates (u_k with k = maxIter); bestValue the running
// minimum V_k of objective values at the iterates; maxIterateNorm the largest
// ||w_k|| seen, for containment checks against containment_radius().
struct PrimalResult {
    Vector wLast;
    Vector wAvg;
    double bestValue;
    double maxIterateNorm;
    SolverTrace trace;
};

// Projected subgradient iteration w_{k+1} = P(w_k - alpha_k (v_k + w_k); theta)
// with the full hinge subgradient. If w1 is outside theta it is projected in
// (with a warning on stderr). Trace columns: k, f_w, f_u, v_best, step, ns.
PrimalResult solve_subgradient(const problems::SoftMarginProblem& p, const StepSchedule& s,
                               const PrimalConfig& c, const Vector& w1);

// Mini-batch variant: the hinge term is estimated from batchSize indices drawn
// uniformly with replacement (unbiased). batchSize == m or kFullBatch runs the
// exact path and reproduces solve_subgradient bit for bit.
PrimalResult solve_stochastic(const problems::SoftMarginProblem& p, const StepSchedule& s,
                              const PrimalConfig& c, const Vector& w1);

// Rate-bound value at iteration k:
//   hybrid:  gamma r / (4k) * dist1^2 + ell^2 ln(k+r+1) / (gamma k)
//   pegasos: ell^2 (1 + ln k) / (2 gamma k)
// dist1 is (an upper bound on) the distance from w_1 to the solution set.
double theoretical_bound(const problems::SolverConstants& c, const StepSchedule& s, double dist1,
                         long k);

// Norm radius C * max_i ||x_i|| of the compact set containing all iterates
// when theta is the whole space, w1 starts inside and every alpha_k <= 1.
// Necessary-condition form of the convex-hull containment statement.
double containment_radius(const problems::SoftMarginProblem& p);

}  // namespace marginforge::primal
