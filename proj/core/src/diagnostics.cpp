#include "marginforge/diagnostics.hpp"

#include <cmath>

#include <json.hpp>

#include "marginforge/rng.hpp"

namespace marginforge::diagnostics {

namespace {

// Hard-margin Lagrangian L(w, lambda) = 0.5||w||^2 + pen(w) + sum lambda_i (1 - y_i <x_i, w>),
// with pen the regularizer value for regularizer coupling and 0 for set
// coupling (probes are projected into the set before evaluation).
double lagrangian(const dual::DualProblem& dp, const Vector& w, const Vector& lambda) {
    double value = 0.5 * w.squaredNorm();
    if (std::holds_alternative<dual::Regularizer>(dp.coupler())) {
        value += prox::eval(std::get<dual::Regularizer>(dp.coupler()).h, w);
    }
    const Vector margins = dp.op().transpose() * w;
    value += lambda.dot(Vector::Ones(lambda.size()) - margins);
    return value;
}

// Pull a probe point into the domain of the Lagrangian's w argument.
Vector admit_w(const dual::DualProblem& dp, const Vector& w) {
    if (const auto* st = std::get_if<dual::SetTheta>(&dp.coupler())) {
        return sets::project(st->set, w);
    }
    const auto& h = std::get<dual::Regularizer>(dp.coupler()).h;
    if (const auto* ind = std::get_if<prox::SetIndicator>(&h)) {
        return sets::project(ind->set, w);
    }
    return w;
}

}  // namespace

KktReport kkt_report(const dual::DualProblem& dp, const Vector& w, const Vector& lambda) {
    if (w.size() != dp.op().rows()) throw std::invalid_argument("w dimension mismatch");
    if (lambda.size() != dp.multipliers()) {
        throw std::invalid_argument("lambda dimension mismatch");
    }

    KktReport r{};
    r.stationarity = (w - dual::recover_primal(dp, lambda)).norm();

    const Vector margins = dp.op().transpose() * w;
    double primal = 0.0;
    for (Eigen::Index i = 0; i < margins.size(); ++i) {
        primal = std::max(primal, 1.0 - margins[i]);
    }
    if (const auto* st = std::get_if<dual::SetTheta>(&dp.coupler())) {
        primal = std::max(primal, sets::distance(st->set, w));
    } else {
        const auto& h = std::get<dual::Regularizer>(dp.coupler()).h;
        if (const auto* ind = std::get_if<prox::SetIndicator>(&h)) {
            primal = std::max(primal, sets::distance(ind->set, w));
        }
    }
    r.primalFeasibility = primal;

    double dualViol = 0.0;
    for (Eigen::Index i = 0; i < lambda.size(); ++i) {
        dualViol = std::max(dualViol, -lambda[i]);
    }
    if (const auto* box = std::get_if<dual::BoxFeasible>(&dp.feasible())) {
        for (Eigen::Index i = 0; i < lambda.size(); ++i) {
            dualViol = std::max(dualViol, lambda[i] - box->upper);
        }
    }
    r.dualFeasibility = std::max(dualViol, 0.0);

    double compl_ = 0.0;
    for (Eigen::Index i = 0; i < lambda.size(); ++i) {
        compl_ = std::max(compl_, std::abs(lambda[i] * (1.0 - margins[i])));
    }
    r.complementarity = compl_;
    return r;
}

double duality_gap(double primalValue, double dualValueMaxOrientation) {
    return primalValue - dualValueMaxOrientation;
}

bool weak_duality_violated(double gap, double tol) { return gap < -tol; }

SupportVectorReport support_vectors(const Vector& lambda, std::optional<double> boxUpper,
                                    double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be > 0");
    SupportVectorReport r;
    r.classes.reserve(static_cast<size_t>(lambda.size()));
    for (Eigen::Index i = 0; i < lambda.size(); ++i) {
        if (lambda[i] <= tol) {
            r.classes.push_back(SupportClass::InteriorZero);
        } else if (boxUpper && lambda[i] >= *boxUpper - tol) {
            r.classes.push_back(SupportClass::BoundActive);
        } else {
            r.classes.push_back(SupportClass::OnMargin);
        }
    }
    return r;
}

double saddle_check(const dual::DualProblem& dp, const Vector& wBar, const Vector& lambdaBar,
                    int trials, std::uint64_t seed) {
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
    if (wBar.size() != dp.op().rows() || lambdaBar.size() != dp.multipliers()) {
        throw std::invalid_argument("saddle_check dimension mismatch");
    }

    const double lBar = lagrangian(dp, wBar, lambdaBar);
    double violation = 0.0;
    const auto addLambdaProbe = [&](const Vector& lam) {
        violation = std::max(violation, lagrangian(dp, wBar, lam) - lBar);
    };
    const auto addWProbe = [&](const Vector& w) {
        violation = std::max(violation, lBar - lagrangian(dp, w, lambdaBar));
    };

    // Analytic minimizer of L(., lambdaBar) and structured lambda probes.
    addWProbe(dual::recover_primal(dp, lambdaBar));
    addLambdaProbe(Vector::Zero(lambdaBar.size()));
    addLambdaProbe(2.0 * lambdaBar);
    for (Eigen::Index i = 0; i < lambdaBar.size(); ++i) {
        Vector lam = lambdaBar;
        lam[i] += 1.0;
        addLambdaProbe(lam);
    }

    SplitMix64 rng(seed);
    const double wScale = 0.5 * std::max(1.0, wBar.norm());
    const double lScale = 0.5 * std::max(1.0, lambdaBar.lpNorm<Eigen::Infinity>());
    for (int t = 0; t < trials; ++t) {
        Vector dw(wBar.size());
        for (Eigen::Index i = 0; i < dw.size(); ++i) dw[i] = wScale * rng.next_gaussian();
        addWProbe(admit_w(dp, wBar + dw));

        Vector lam(lambdaBar.size());
        for (Eigen::Index i = 0; i < lam.size(); ++i) {
            lam[i] = std::max(0.0, lambdaBar[i] + lScale * rng.next_gaussian());
        }
        addLambdaProbe(lam);
    }
    return std::max(violation, 0.0);
}

BoundAudit bound_audit(const SolverTrace& trace, const problems::SolverConstants& c,
                       const primal::StepSchedule& s, double fStar, double dist1) {
    const bool hybrid = std::holds_alternative<primal::HybridSchedule>(s);
    const int kCol = trace.column_index("k");
    const int valCol = trace.column_index(hybrid ? "f_u" : "v_best");
    if (kCol < 0 || valCol < 0) throw std::invalid_argument("trace lacks required columns");

    BoundAudit audit{true, -1, 0.0};
    for (const auto& row : trace.rows) {
        const long k = static_cast<long>(row[static_cast<size_t>(kCol)]);
        const double lhs = row[static_cast<size_t>(valCol)] - fStar;
        const double rhs = primal::theoretical_bound(c, s, dist1, k);
        const double excess = lhs - rhs;
        if (excess > 0.0) {
            if (audit.passed) audit.firstOffendingK = k;
            audit.passed = false;
            audit.maxExcess = std::max(audit.maxExcess, excess);
        }
    }
    return audit;
}

std::string to_json(const KktReport& r) {
    nlohmann::ordered_json j;
    j["stationarity"] = r.stationarity;
    j["primal_feasibility"] = r.primalFeasibility;
    j["dual_feasibility"] = r.dualFeasibility;
    j["complementarity"] = r.complementarity;
    return j.dump();
}

std::string to_json(const SupportVectorReport& r) {
    nlohmann::ordered_json j;
    auto names = nlohmann::ordered_json::array();
    for (const auto c : r.classes) {
        switch (c) {
            case SupportClass::InteriorZero: names.push_back("interior_zero"); break;
            case SupportClass::OnMargin: names.push_back("on_margin"); break;
            case SupportClass::BoundActive: names.push_back("bound_active"); break;
        }
    }
    j["classes"] = std::move(names);
    return j.dump();
}

}  // namespace marginforge::diagnostics
