#pragma once

#include <variant>

#include "marginforge/sets.hpp"

namespace marginforge::prox {

// Proper convex regularizers restricted to closed-form proximal maps, so the
// dual gradients built on them are exact.

struct Zero {};

// (coef/2) * ||w||^2
struct ScaledSqNorm {
    double coef;
};

// coef * ||w||_1
struct ScaledL1 {
    double coef;
};

// Indicator of a closed convex set.
struct SetIndicator {
    sets::ConvexSetSpec set;
};

using RegularizerSpec = std::variant<Zero, ScaledSqNorm, ScaledL1, SetIndicator>;

RegularizerSpec zero();
RegularizerSpec scaled_sq_norm(double mu);
RegularizerSpec scaled_l1(double tau);
RegularizerSpec set_indicator(sets::ConvexSetSpec s);

// h(w); +inf outside the indicator set (membership tested at tolerance 1e-9).
double eval(const RegularizerSpec& h, const Vector& w);

// argmin_y { h(y) + 0.5 ||z - y||^2 }.
Vector prox(const RegularizerSpec& h, const Vector& z);

// Moreau envelope M_h(z) = h(prox_h(z)) + 0.5 ||prox_h(z) - z||^2.
double moreau_env(const RegularizerSpec& h, const Vector& z);

// grad M_h(z) = z - prox_h(z). 1-Lipschitz.
Vector moreau_grad(const RegularizerSpec& h, const Vector& z);

// D_h(z) = 0.5 ||z||^2 - M_h(z), with grad D_h(z) = prox_h(z). Convex, 1-smooth.
struct DualEnv {
    double value;
    Vector grad;
};
DualEnv dual_env(const RegularizerSpec& h, const Vector& z);

}  // namespace marginforge::prox
