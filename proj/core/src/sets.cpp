#include "marginforge/sets.hpp"

#include <cmath>

namespace marginforge::sets {

namespace {

void check_dim(const ConvexSetSpec& s, const Vector& x) {
    if (dim(s) != x.size()) throw std::invalid_argument("set/vector dimension mismatch");
}

}  // namespace

ConvexSetSpec whole_space(int d) {
    if (d < 1) throw std::invalid_argument("whole space dimension must be >= 1");
    return WholeSpace{d};
}

ConvexSetSpec ball(Vector center, double radius) {
    if (center.size() < 1) throw std::invalid_argument("ball center must be nonempty");
    if (!center.allFinite()) throw std::invalid_argument("ball center must be finite");
    if (!(radius > 0.0)) throw std::invalid_argument("ball radius must be > 0");
    return Ball{std::move(center), radius};
}

ConvexSetSpec box(Vector lower, Vector upper) {
    if (lower.size() != upper.size() || lower.size() < 1) {
        throw std::invalid_argument("box bounds must share a positive dimension");
    }
    if (!lower.allFinite() || !upper.allFinite()) {
        throw std::invalid_argument("box bounds must be finite");
    }
    if (((upper - lower).array() < 0.0).any()) {
        throw std::invalid_argument("box requires lower <= upper componentwise");
    }
    return Box{std::move(lower), std::move(upper)};
}

ConvexSetSpec nonneg_orthant(int d) {
    if (d < 1) throw std::invalid_argument("orthant dimension must be >= 1");
    return NonnegOrthant{d};
}

ConvexSetSpec halfspace(Vector normal, double offset) {
    if (normal.size() < 1 || normal.isZero(0.0)) {
        throw std::invalid_argument("halfspace normal must be nonzero");
    }
    if (!normal.allFinite() || !std::isfinite(offset)) {
        throw std::invalid_argument("halfspace parameters must be finite");
    }
    return Halfspace{std::move(normal), offset};
}

ConvexSetSpec hyperplane(Vector normal, double offset) {
    if (normal.size() < 1 || normal.isZero(0.0)) {
        throw std::invalid_argument("hyperplane normal must be nonzero");
    }
    if (!normal.allFinite() || !std::isfinite(offset)) {
        throw std::invalid_argument("hyperplane parameters must be finite");
    }
    return Hyperplane{std::move(normal), offset};
}

int dim(const ConvexSetSpec& s) {
    return std::visit(
        [](const auto& v) -> int {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, WholeSpace> || std::is_same_v<T, NonnegOrthant>) {
                return v.dim;
            } else if constexpr (std::is_same_v<T, Ball>) {
                return static_cast<int>(v.center.size());
            } else if constexpr (std::is_same_v<T, Box>) {
                return static_cast<int>(v.lower.size());
            } else {
                return static_cast<int>(v.normal.size());
            }
        },
        s);
}

bool is_whole_space(const ConvexSetSpec& s) {
    return std::holds_alternative<WholeSpace>(s);
}

Vector project(const ConvexSetSpec& s, const Vector& x) {
    check_dim(s, x);
    return std::visit(
        [&x](const auto& v) -> Vector {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, WholeSpace>) {
                return x;
            } else if constexpr (std::is_same_v<T, Ball>) {
                const Vector d = x - v.center;
                const double n = d.norm();
                if (n <= v.radius) return x;
                return v.center + (v.radius / n) * d;
            } else if constexpr (std::is_same_v<T, Box>) {
                return x.cwiseMax(v.lower).cwiseMin(v.upper);
            } else if constexpr (std::is_same_v<T, NonnegOrthant>) {
                return x.cwiseMax(0.0);
            } else if constexpr (std::is_same_v<T, Halfspace>) {
                const double slack = v.normal.dot(x) - v.offset;
                if (slack <= 0.0) return x;
                return x - (slack / v.normal.squaredNorm()) * v.normal;
            } else {  // Hyperplane
                const double r = v.normal.dot(x) + v.offset;
                return x - (r / v.normal.squaredNorm()) * v.normal;
            }
        },
        s);
}

double distance(const ConvexSetSpec& s, const Vector& x) {
    return (x - project(s, x)).norm();
}

Vector sq_dist_grad(const ConvexSetSpec& s, const Vector& x) {
    return x - project(s, x);
}

bool contains(const ConvexSetSpec& s, const Vector& x, double tol) {
    if (tol < 0.0) throw std::invalid_argument("tolerance must be >= 0");
    return distance(s, x) <= tol;
}

double margin_between(const HyperplanePair& p) {
    if (p.normal.size() < 1 || p.normal.isZero(0.0)) {
        throw std::invalid_argument("hyperplane pair normal must be nonzero");
    }
    return std::abs(p.offset1 - p.offset2) / p.normal.norm();
}

}  // namespace marginforge::sets
