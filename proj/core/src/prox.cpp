#include "marginforge/prox.hpp"

#include <cmath>
#include <limits>

namespace marginforge::prox {

namespace {

int reg_dim(const RegularizerSpec& h) {
    if (const auto* ind = std::get_if<SetIndicator>(&h)) return sets::dim(ind->set);
    return -1;  // dimension-free
}

void check_dim(const RegularizerSpec& h, const Vector& z) {
    const int d = reg_dim(h);
    if (d >= 0 && d != z.size()) {
        throw std::invalid_argument("regularizer/vector dimension mismatch");
    }
}

}  // namespace

RegularizerSpec zero() { return Zero{}; }

RegularizerSpec scaled_sq_norm(double mu) {
    if (!(mu > 0.0)) throw std::invalid_argument("squared-norm coefficient must be > 0");
    return ScaledSqNorm{mu};
}

RegularizerSpec scaled_l1(double tau) {
    if (!(tau > 0.0)) throw std::invalid_argument("l1 coefficient must be > 0");
    return ScaledL1{tau};
}

RegularizerSpec set_indicator(sets::ConvexSetSpec s) { return SetIndicator{std::move(s)}; }

double eval(const RegularizerSpec& h, const Vector& w) {
    check_dim(h, w);
    return std::visit(
        [&w](const auto& v) -> double {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Zero>) {
                return 0.0;
            } else if constexpr (std::is_same_v<T, ScaledSqNorm>) {
                return 0.5 * v.coef * w.squaredNorm();
            } else if constexpr (std::is_same_v<T, ScaledL1>) {
                return v.coef * w.lpNorm<1>();
            } else {
                return sets::contains(v.set, w, 1e-9) ? 0.0
                                                      : std::numeric_limits<double>::infinity();
            }
        },
        h);
}

Vector prox(const RegularizerSpec& h, const Vector& z) {
    check_dim(h, z);
    return std::visit(
        [&z](const auto& v) -> Vector {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Zero>) {
                return z;
            } else if constexpr (std::is_same_v<T, ScaledSqNorm>) {
                return z / (1.0 + v.coef);
            } else if constexpr (std::is_same_v<T, ScaledL1>) {
                // soft threshold; exact threshold points map to 0
                Vector out(z.size());
                for (Eigen::Index i = 0; i < z.size(); ++i) {
                    const double m = std::abs(z[i]) - v.coef;
                    out[i] = m > 0.0 ? (z[i] > 0.0 ? m : -m) : 0.0;
                }
                return out;
            } else {
                return sets::project(v.set, z);
            }
        },
        h);
}

double moreau_env(const RegularizerSpec& h, const Vector& z) {
    check_dim(h, z);
    const Vector p = prox(h, z);
    // h(p) is finite by construction; the indicator case contributes 0.
    const double hp = std::holds_alternative<SetIndicator>(h) ? 0.0 : eval(h, p);
    return hp + 0.5 * (p - z).squaredNorm();
}

Vector moreau_grad(const RegularizerSpec& h, const Vector& z) {
    return z - prox(h, z);
}

DualEnv dual_env(const RegularizerSpec& h, const Vector& z) {
    check_dim(h, z);
    return {0.5 * z.squaredNorm() - moreau_env(h, z), prox(h, z)};
}

}  // namespace marginforge::prox
