#include "marginforge/dual_solver.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include "marginforge/rng.hpp"

namespace marginforge::dual {

namespace {

prox::RegularizerSpec to_regularizer(const Coupler& c) {
    if (const auto* st = std::get_if<SetTheta>(&c)) return prox::set_indicator(st->set);
    return std::get<Regularizer>(c).h;
}

void check_lambda(const DualProblem& dp, const Vector& lambda) {
    if (lambda.size() != dp.multipliers()) {
        throw std::invalid_argument("multiplier vector dimension mismatch");
    }
    if (!lambda.allFinite()) throw std::invalid_argument("multiplier vector must be finite");
}

double quiet_nan() { return std::numeric_limits<double>::quiet_NaN(); }

}  // namespace

DualProblem DualProblem::from_operator(Matrix A, FeasibleRegion feasible, Coupler coupler) {
    if (A.cols() < 1 || A.rows() < 1) throw std::invalid_argument("operator must be nonempty");
    if (!A.allFinite()) throw std::invalid_argument("operator entries must be finite");
    if (const auto* box = std::get_if<BoxFeasible>(&feasible)) {
        if (!(box->upper > 0.0)) throw std::invalid_argument("box upper bound must be > 0");
    }
    const int d = static_cast<int>(A.rows());
    const int cd = std::visit(
        [](const auto& v) -> int {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, SetTheta>) return sets::dim(v.set);
            else {
                const auto& h = v.h;
                if (const auto* ind = std::get_if<prox::SetIndicator>(&h)) return sets::dim(ind->set);
                return -1;
            }
        },
        coupler);
    if (cd >= 0 && cd != d) {
        throw std::invalid_argument("coupler dimension does not match operator rows");
    }
    DualProblem dp;
    dp.A_ = std::move(A);
    dp.m_ = dp.A_.cols();
    dp.feasible_ = std::move(feasible);
    dp.h_ = to_regularizer(coupler);
    dp.coupler_ = std::move(coupler);
    return dp;
}

DualProblem DualProblem::from_hard(const problems::HardMarginProblem& p) {
    return from_operator(signed_feature_matrix(p.dataset()), OrthantFeasible{},
                         SetTheta{p.theta()});
}

DualProblem DualProblem::from_soft(const problems::SoftMarginProblem& p) {
    const double upper = p.C() / static_cast<double>(p.dataset().size());
    return from_operator(signed_feature_matrix(p.dataset()), BoxFeasible{upper},
                         SetTheta{p.theta()});
}

DualProblem DualProblem::from_regularized(const problems::RegularizedProblem& p) {
    return from_operator(signed_feature_matrix(p.dataset()), OrthantFeasible{},
                         Regularizer{p.regularizer()});
}

DualProblem DualProblem::from_kernel(const LabeledDataset& ds, const KernelSpec& k,
                                     FeasibleRegion feasible, const sets::ConvexSetSpec& theta) {
    if (k.kind() == KernelKind::Linear) {
        return from_operator(signed_feature_matrix(ds), std::move(feasible), SetTheta{theta});
    }
    if (!sets::is_whole_space(theta)) {
        throw std::invalid_argument(
            "non-linear kernels require theta = whole space in the dual path: the distance "
            "term needs an explicit primal vector");
    }
    if (ds.size() < 1) throw std::invalid_argument("kernel dual needs a nonempty dataset");
    DualProblem dp;
    dp.G_ = marginforge::gram(ds, k, true);
    dp.hasOperator_ = false;
    dp.m_ = ds.size();
    dp.feasible_ = std::move(feasible);
    return dp;
}

const Matrix& DualProblem::op() const {
    if (!hasOperator_) throw std::logic_error("Gram-only dual problem has no primal operator");
    return A_;
}

const Matrix& DualProblem::gram() const {
    if (hasOperator_) throw std::logic_error("operator-form dual problem stores no Gram matrix");
    return G_;
}

const Coupler& DualProblem::coupler() const {
    if (!coupler_) throw std::logic_error("Gram-only dual problem has no coupler");
    return *coupler_;
}

const prox::RegularizerSpec& DualProblem::coupling_regularizer() const {
    if (!h_) throw std::logic_error("Gram-only dual problem has no coupler");
    return *h_;
}

Vector project_feasible(const FeasibleRegion& f, const Vector& lambda) {
    if (std::holds_alternative<OrthantFeasible>(f)) return lambda.cwiseMax(0.0);
    const double upper = std::get<BoxFeasible>(f).upper;
    return lambda.cwiseMax(0.0).cwiseMin(upper);
}

double dual_value(const DualProblem& dp, const Vector& lambda) {
    check_lambda(dp, lambda);
    if (!dp.has_primal_operator()) {
        return 0.5 * lambda.dot(dp.gram() * lambda) - lambda.sum();
    }
    const Vector z = dp.op() * lambda;
    return prox::dual_env(dp.coupling_regularizer(), z).value - lambda.sum();
}

Vector dual_gradient(const DualProblem& dp, const Vector& lambda) {
    check_lambda(dp, lambda);
    if (!dp.has_primal_operator()) {
        return dp.gram() * lambda - Vector::Ones(lambda.size());
    }
    const Vector z = dp.op() * lambda;
    const Vector p = prox::prox(dp.coupling_regularizer(), z);
    return dp.op().transpose() * p - Vector::Ones(lambda.size());
}

double lipschitz_estimate(const DualProblem& dp) {
    const long m = dp.multipliers();
    const auto matvec = [&](const Vector& v) -> Vector {
        if (dp.has_primal_operator()) return dp.op().transpose() * (dp.op() * v);
        return dp.gram() * v;
    };

    SplitMix64 rng(0x5EED);
    Vector v(m);
    for (long i = 0; i < m; ++i) v[i] = rng.next_gaussian();
    double vn = v.norm();
    if (vn == 0.0) v[0] = 1.0, vn = 1.0;
    v /= vn;

    double rq = 0.0;
    for (int it = 0; it < 500; ++it) {
        const Vector u = matvec(v);
        const double next = v.dot(u);
        const double un = u.norm();
        if (un == 0.0) return 0.0;  // zero operator (or start in its null space)
        const bool settled = std::abs(next - rq) <= 1e-10 * std::max(std::abs(next), 1e-300);
        rq = next;
        v = u / un;
        if (settled && it > 0) break;
    }
    return rq * 1.01;
}

Vector recover_primal(const DualProblem& dp, const Vector& lambda) {
    check_lambda(dp, lambda);
    if (!dp.has_primal_operator()) {
        throw std::invalid_argument("kernelized dual problem has no explicit primal vector");
    }
    return prox::prox(dp.coupling_regularizer(), dp.op() * lambda);
}

double primal_objective(const DualProblem& dp, const Vector& w) {
    if (!dp.has_primal_operator()) return quiet_nan();
    double value = 0.5 * w.squaredNorm();
    if (std::holds_alternative<Regularizer>(dp.coupler())) {
        value += prox::eval(std::get<Regularizer>(dp.coupler()).h, w);
    }
    if (const auto* box = std::get_if<BoxFeasible>(&dp.feasible())) {
        const long m = dp.multipliers();
        const double C = box->upper * static_cast<double>(m);
        const Vector margins = dp.op().transpose() * w;
        value += (C / static_cast<double>(m)) * (1.0 - margins.array()).max(0.0).sum();
    }
    return value;
}

DualResult solve(const DualProblem& dp, const DualConfig& c, const Vector& lambda0) {
    if (c.maxIter < 1) throw std::invalid_argument("maxIter must be >= 1");
    if (!(c.tolerance > 0.0)) throw std::invalid_argument("tolerance must be > 0");
    if (!(c.stepsizeSafety > 0.0) || c.stepsizeSafety > 1.0) {
        throw std::invalid_argument("stepsizeSafety must be in (0, 1]");
    }
    if (c.recordEvery < 1) throw std::invalid_argument("recordEvery must be >= 1");
    check_lambda(dp, lambda0);

    const double L = lipschitz_estimate(dp);
    if (!(L > 0.0)) throw std::invalid_argument("zero dual operator; nothing to solve");
    const double step = c.stepsizeSafety / L;

    Vector lambda = project_feasible(dp.feasible(), lambda0);
    Vector y = lambda;
    double t = 1.0;
    double value = dual_value(dp, lambda);

    SolverTrace trace;
    trace.columns = {"k", "dual_value", "grad_map_norm", "primal_value_of_recovered", "gap", "ns"};

    long iterations = 0;
    bool converged = false;
    const auto t0 = std::chrono::steady_clock::now();
    for (long k = 1; k <= c.maxIter; ++k) {
        const Vector& point = c.accelerated ? y : lambda;
        const Vector grad = dual_gradient(dp, point);
        const Vector next = project_feasible(dp.feasible(), point - step * grad);
        const double gradMapNorm = L * (point - next).norm();
        const double nextValue = dual_value(dp, next);
        if (!std::isfinite(nextValue)) {
            throw NumericalFailure("nonfinite dual value at iteration " + std::to_string(k));
        }

        if (c.accelerated) {
            if (nextValue > value) {
                // adaptive restart: the dual need not be strongly convex
                t = 1.0;
                y = next;
            } else {
                const double tNext = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
                y = next + ((t - 1.0) / tNext) * (next - lambda);
                t = tNext;
            }
        }
        lambda = next;
        value = nextValue;
        iterations = k;
        converged = gradMapNorm <= c.tolerance;

        if (k % c.recordEvery == 0 || k == c.maxIter || converged) {
            double primalValue = quiet_nan();
            double gap = quiet_nan();
            if (dp.has_primal_operator()) {
                const Vector w = recover_primal(dp, lambda);
                primalValue = primal_objective(dp, w);
                gap = primalValue - (-value);
            }
            const auto ns = std::chrono::duration_cast<std::chrono::nanoseconds>(
                                std::chrono::steady_clock::now() - t0)
                                .count();
            trace.rows.push_back({static_cast<double>(k), value, gradMapNorm, primalValue, gap,
                                  static_cast<double>(ns)});
        }
        if (converged) break;
    }

    DualResult result;
    result.lambda = lambda;
    result.wRecovered = dp.has_primal_operator() ? recover_primal(dp, lambda) : Vector(0);
    result.dualValue = value;
    result.iterations = iterations;
    result.converged = converged;
    result.trace = std::move(trace);
    return result;
}

}  // namespace marginforge::dual
