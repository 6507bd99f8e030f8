#include "marginforge/oracle.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>

namespace marginforge::oracle {

OracleSolution active_set_hard_margin(const LabeledDataset& ds) {
    const long m = ds.size();
    if (m > 12) throw std::invalid_argument("active-set enumeration is limited to m <= 12");
    const int d = ds.dim();
    const Matrix A = signed_feature_matrix(ds);
    const Matrix G = A.transpose() * A;

    double bestF = std::numeric_limits<double>::infinity();
    Vector bestW;
    Vector bestLambda;
    bool found = false;

    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
        std::vector<long> active;
        for (long i = 0; i < m; ++i) {
            if (mask & (std::uint64_t{1} << i)) active.push_back(i);
        }
        const long k = static_cast<long>(active.size());

        Vector lambda = Vector::Zero(m);
        Vector w = Vector::Zero(d);
        if (k > 0) {
            Matrix Gs(k, k);
            for (long a = 0; a < k; ++a) {
                for (long b = 0; b < k; ++b) Gs(a, b) = G(active[a], active[b]);
            }
            Eigen::FullPivLU<Matrix> lu(Gs);
            lu.setThreshold(1e-12);
            if (!lu.isInvertible()) continue;
            const Vector ls = lu.solve(Vector::Ones(k));
            if ((ls.array() < -1e-12).any()) continue;
            for (long a = 0; a < k; ++a) {
                lambda[active[a]] = ls[a];
                w += ls[a] * A.col(active[a]);
            }
        }

        if (m > 0) {
            const Vector margins = A.transpose() * w;
            if ((margins.array() < 1.0 - 1e-10).any()) continue;
        }
        const double f = 0.5 * w.squaredNorm();
        if (f < bestF) {  // strict: ties keep the first (smallest) active set
            bestF = f;
            bestW = w;
            bestLambda = lambda;
            found = true;
        }
    }

    if (!found) {
        throw InfeasibleProblem("no active set yields a feasible hard-margin solution");
    }
    return {std::move(bestW), std::move(bestLambda), bestF, OracleMethod::ActiveSet};
}

OracleSolution long_run_reference(const problems::SoftMarginProblem& p, long iters) {
    if (iters < 1) throw std::invalid_argument("iters must be >= 1");
    const long m = p.dataset().size();
    const int d = p.dataset().dim();
    const double C = p.C();
    const double invM = m > 0 ? 1.0 / static_cast<double>(m) : 0.0;

    // Plain hybrid loop, written out sample by sample so it shares no code
    // with the solver it is used to check.
    const double r = 16.0;
    Vector w = sets::project(p.theta(), Vector::Zero(d));
    double best = std::numeric_limits<double>::infinity();
    Vector wBest = w;
    for (long k = 1; k <= iters; ++k) {
        double hinge = 0.0;
        Vector sub = Vector::Zero(d);
        for (const auto& s : p.dataset().samples()) {
            const double margin = s.y * s.x.dot(w);
            if (1.0 - margin > 0.0) {
                hinge += 1.0 - margin;
                sub -= s.y * s.x;
            }
        }
        const double f = 0.5 * w.squaredNorm() + C * invM * hinge;
        if (f < best) {
            best = f;
            wBest = w;
        }
        const double alpha = 2.0 / (static_cast<double>(k) + r);
        w = sets::project(p.theta(), w - alpha * (w + C * invM * sub));
    }
    return {std::move(wBest), std::nullopt, best, OracleMethod::LongRun};
}

OracleSolution dual_grid(const dual::DualProblem& dp, int perAxis, double radius) {
    const long m = dp.multipliers();
    if (m > 3) throw std::invalid_argument("dual_grid is limited to m <= 3");
    if (perAxis < 1 || perAxis > 400) throw std::invalid_argument("perAxis must be in [1, 400]");
    if (radius < 0.0) throw std::invalid_argument("radius must be >= 0");

    double upper = radius;
    if (const auto* box = std::get_if<dual::BoxFeasible>(&dp.feasible())) {
        upper = std::min(upper, box->upper);
    }
    const long points = (radius == 0.0 || perAxis == 1) ? 1 : perAxis;
    const double h = points > 1 ? upper / static_cast<double>(points - 1) : 0.0;

    Vector lambda = Vector::Zero(m);
    std::vector<long> idx(static_cast<size_t>(m), 0);
    double bestValue = std::numeric_limits<double>::infinity();
    Vector bestLambda = lambda;

    bool done = false;
    while (!done) {
        for (long i = 0; i < m; ++i) lambda[i] = h * static_cast<double>(idx[static_cast<size_t>(i)]);
        const double v = dual_value(dp, lambda);
        if (v < bestValue) {
            bestValue = v;
            bestLambda = lambda;
        }
        long pos = 0;
        while (pos < m) {
            if (++idx[static_cast<size_t>(pos)] < points) break;
            idx[static_cast<size_t>(pos)] = 0;
            ++pos;
        }
        done = pos == m;
    }

    Vector w = dp.has_primal_operator() ? dual::recover_primal(dp, bestLambda) : Vector(0);
    return {std::move(w), std::move(bestLambda), -bestValue, OracleMethod::GridSearch};
}

Vector finite_diff(const std::function<double(const Vector&)>& f, const Vector& x, double h) {
    if (!(h > 0.0)) throw std::invalid_argument("step must be > 0");
    Vector g(x.size());
    Vector probe = x;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        probe[i] = x[i] + h;
        const double fp = f(probe);
        probe[i] = x[i] - h;
        const double fm = f(probe);
        probe[i] = x[i];
        if (!std::isfinite(fp) || !std::isfinite(fm)) {
            throw NumericalFailure("nonfinite value in finite difference");
        }
        g[i] = (fp - fm) / (2.0 * h);
    }
    return g;
}

}  // namespace marginforge::oracle
