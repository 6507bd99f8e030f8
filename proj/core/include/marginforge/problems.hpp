#pragma once

#include <optional>

#include "marginforge/prox.hpp"
#include "marginforge/sets.hpp"

namespace marginforge::problems {

// min 0.5||w||^2  s.t.  y_i <x_i, w> >= 1,  w in theta.
// Solved through its dual; the hinge-free primal gives no subgradient signal
// off the feasible set.
class HardMarginProblem {
public:
    HardMarginProblem(LabeledDataset ds, sets::ConvexSetSpec theta);

    const LabeledDataset& dataset() const { return ds_; }
    const sets::ConvexSetSpec& theta() const { return theta_; }
    const Matrix& feature_rows() const { return X_; }
    const Vector& labels() const { return y_; }

private:
    LabeledDataset ds_;
    sets::ConvexSetSpec theta_;
    Matrix X_;
    Vector y_;
};

// min 0.5||w||^2 + (C/m) sum max{0, 1 - y_i <x_i, w>}  s.t.  w in theta.
class SoftMarginProblem {
public:
    SoftMarginProblem(LabeledDataset ds, sets::ConvexSetSpec theta, double C);

    const LabeledDataset& dataset() const { return ds_; }
    const sets::ConvexSetSpec& theta() const { return theta_; }
    double C() const { return C_; }
    const Matrix& feature_rows() const { return X_; }
    const Vector& labels() const { return y_; }

private:
    LabeledDataset ds_;
    sets::ConvexSetSpec theta_;
    double C_;
    Matrix X_;
    Vector y_;
};

// min 0.5||w||^2 + h(w)  s.t.  y_i <x_i, w> >= 1.
class RegularizedProblem {
public:
    RegularizedProblem(LabeledDataset ds, prox::RegularizerSpec h);

    const LabeledDataset& dataset() const { return ds_; }
    const prox::RegularizerSpec& regularizer() const { return h_; }

private:
    LabeledDataset ds_;
    prox::RegularizerSpec h_;
};

// Constants feeding the subgradient-method step sizes and rate bounds:
// gamma strong convexity of the objective, L smoothness of the quadratic
// part, M a bound on hinge subgradient norms, ell the composite constant
// sqrt(4||grad R(w*)||^2 + 2 M^2).
struct SolverConstants {
    double gamma;
    double L;
    double M;
    double ell;
};

// Componentwise hinge losses max{0, 1 - y_i <x_i, w>}. Shared by
// soft_objective and slack_lift so the two objectives agree bit for bit.
Vector hinge_losses(const SoftMarginProblem& p, const Vector& w);

double soft_objective(const SoftMarginProblem& p, const Vector& w);

// Subgradient split: smooth = w (gradient of the quadratic part), nonsmooth a
// hinge selection. Samples with margin exactly 1 contribute 0, a valid
// extreme of the max-rule interval.
struct Subgradient {
    Vector smooth;
    Vector nonsmooth;
};
Subgradient soft_subgradient(const SoftMarginProblem& p, const Vector& w);

struct Feasibility {
    Vector marginViolations;  // max(0, 1 - y_i <x_i, w>)
    double setDistance;
};
Feasibility hard_feasibility(const HardMarginProblem& p, const Vector& w);

// Lifts w to the slack formulation: xi_i = max{0, 1 - y_i <x_i, w>}.
struct SlackLift {
    Vector w;
    Vector xi;
};
SlackLift slack_lift(const SoftMarginProblem& p, const Vector& w);

// 0.5||w||^2 + (C/m) sum xi. Equals soft_objective(p, w) exactly when xi
// comes from slack_lift(p, w).
double slack_objective(const SoftMarginProblem& p, const Vector& w, const Vector& xi);

// gamma = L = 1 for the 0.5||w||^2 part, M = (C/m) sum ||x_i||. The reference
// gradient norm uses ||wref|| when given, else the bound ||w*|| <= sqrt(2C)
// (valid when 0 is theta-feasible; callers must pass wref otherwise).
SolverConstants constants(const SoftMarginProblem& p, const std::optional<Vector>& wref = {});

double regularized_objective(const RegularizedProblem& p, const Vector& w);

}  // namespace marginforge::problems
