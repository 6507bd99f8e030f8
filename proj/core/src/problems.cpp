#include "marginforge/problems.hpp"

#include <cmath>

namespace marginforge::problems {

namespace {

void check_theta_dim(const sets::ConvexSetSpec& theta, int dim) {
    if (sets::dim(theta) != dim) {
        throw std::invalid_argument("constraint set dimension does not match dataset");
    }
}

void check_w_dim(const Vector& w, int dim) {
    if (w.size() != dim) throw std::invalid_argument("weight vector dimension mismatch");
}

}  // namespace

HardMarginProblem::HardMarginProblem(LabeledDataset ds, sets::ConvexSetSpec theta)
    : ds_(std::move(ds)), theta_(std::move(theta)) {
    check_theta_dim(theta_, ds_.dim());
    X_ = ds_.feature_rows();
    y_ = ds_.labels();
}

SoftMarginProblem::SoftMarginProblem(LabeledDataset ds, sets::ConvexSetSpec theta, double C)
    : ds_(std::move(ds)), theta_(std::move(theta)), C_(C) {
    if (!(C > 0.0)) throw std::invalid_argument("C must be > 0");
    check_theta_dim(theta_, ds_.dim());
    X_ = ds_.feature_rows();
    y_ = ds_.labels();
}

RegularizedProblem::RegularizedProblem(LabeledDataset ds, prox::RegularizerSpec h)
    : ds_(std::move(ds)), h_(std::move(h)) {
    if (const auto* ind = std::get_if<prox::SetIndicator>(&h_)) {
        if (sets::dim(ind->set) != ds_.dim()) {
            throw std::invalid_argument("regularizer dimension does not match dataset");
        }
    }
}

Vector hinge_losses(const SoftMarginProblem& p, const Vector& w) {
    check_w_dim(w, p.dataset().dim());
    if (p.dataset().size() == 0) return Vector(0);
    const Vector margins = p.labels().cwiseProduct(p.feature_rows() * w);
    return (1.0 - margins.array()).max(0.0).matrix();
}

double soft_objective(const SoftMarginProblem& p, const Vector& w) {
    const double quad = 0.5 * w.squaredNorm();
    const long m = p.dataset().size();
    if (m == 0) return quad;
    return quad + (p.C() / static_cast<double>(m)) * hinge_losses(p, w).sum();
}

Subgradient soft_subgradient(const SoftMarginProblem& p, const Vector& w) {
    check_w_dim(w, p.dataset().dim());
    const long m = p.dataset().size();
    Subgradient g{w, Vector::Zero(w.size())};
    if (m == 0) return g;
    const Vector margins = p.labels().cwiseProduct(p.feature_rows() * w);
    const double scale = p.C() / static_cast<double>(m);
    Vector coeff(m);
    for (long i = 0; i < m; ++i) {
        // strict inequality: a margin of exactly 1 contributes 0
        coeff[i] = (1.0 - margins[i] > 0.0) ? -scale * p.labels()[i] : 0.0;
    }
    g.nonsmooth = p.feature_rows().transpose() * coeff;
    return g;
}

Feasibility hard_feasibility(const HardMarginProblem& p, const Vector& w) {
    check_w_dim(w, p.dataset().dim());
    Vector violations(p.dataset().size());
    if (p.dataset().size() > 0) {
        const Vector margins = p.labels().cwiseProduct(p.feature_rows() * w);
        violations = (1.0 - margins.array()).max(0.0).matrix();
    }
    return {std::move(violations), sets::distance(p.theta(), w)};
}

SlackLift slack_lift(const SoftMarginProblem& p, const Vector& w) {
    return {w, hinge_losses(p, w)};
}

double slack_objective(const SoftMarginProblem& p, const Vector& w, const Vector& xi) {
    if (xi.size() != p.dataset().size()) {
        throw std::invalid_argument("slack vector length mismatch");
    }
    const double quad = 0.5 * w.squaredNorm();
    const long m = p.dataset().size();
    if (m == 0) return quad;
    return quad + (p.C() / static_cast<double>(m)) * xi.sum();
}

SolverConstants constants(const SoftMarginProblem& p, const std::optional<Vector>& wref) {
    const long m = p.dataset().size();
    if (m == 0) throw std::invalid_argument("constants() needs a nonempty dataset");
    double sumNorms = 0.0;
    for (const auto& s : p.dataset().samples()) sumNorms += s.x.norm();
    const double M = (p.C() / static_cast<double>(m)) * sumNorms;
    double gradRef;
    if (wref) {
        check_w_dim(*wref, p.dataset().dim());
        gradRef = wref->norm();
    } else {
        // f(0) = C >= 0.5 ||w*||^2 when 0 is feasible
        gradRef = std::sqrt(2.0 * p.C());
    }
    const double ell = std::sqrt(4.0 * gradRef * gradRef + 2.0 * M * M);
    return {1.0, 1.0, M, ell};
}

double regularized_objective(const RegularizedProblem& p, const Vector& w) {
    if (w.size() != p.dataset().dim()) {
        throw std::invalid_argument("weight vector dimension mismatch");
    }
    return 0.5 * w.squaredNorm() + prox::eval(p.regularizer(), w);
}

}  // namespace marginforge::problems
