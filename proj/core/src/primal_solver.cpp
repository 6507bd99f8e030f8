#include "marginforge/primal_solver.hpp"

#include <chrono>
#include <cmath>
#include <iostream>
#include <limits>

#include "marginforge/rng.hpp"

namespace marginforge::primal {

namespace {

void check_config(const PrimalConfig& c) {
    if (c.maxIter < 1) throw std::invalid_argument("maxIter must be >= 1");
    if (c.recordEvery < 1 || c.recordEvery > c.maxIter) {
        throw std::invalid_argument("recordEvery must be in [1, maxIter]");
    }
    if (c.batchSize < 0) throw std::invalid_argument("batchSize must be positive or kFullBatch");
}

// One engine drives both entry points; `stochastic` only switches the hinge
// term between the exact sum and the sampled estimate.
PrimalResult run(const problems::SoftMarginProblem& p, const StepSchedule& s,
                 const PrimalConfig& c, const Vector& w1, bool stochastic) {
    check_config(c);
    const long m = p.dataset().size();
    if (w1.size() != p.dataset().dim()) {
        throw std::invalid_argument("start vector dimension mismatch");
    }
    if (stochastic && c.batchSize > m) {
        throw std::invalid_argument("batchSize exceeds dataset size");
    }
    const bool exactHinge = !stochastic || c.batchSize == kFullBatch || c.batchSize == m;

    Vector w = w1;
    if (!sets::contains(p.theta(), w, 1e-9)) {
        std::cerr << "marginforge: start point outside the constraint set; projecting in\n";
        w = sets::project(p.theta(), w);
    }

    SplitMix64 rng(c.seed);
    const double scale =
        (!exactHinge && c.batchSize > 0) ? p.C() / static_cast<double>(c.batchSize) : 0.0;

    Vector wSum = Vector::Zero(w.size());
    double vBest = std::numeric_limits<double>::infinity();
    double maxNorm = 0.0;
    SolverTrace trace;
    trace.columns = {"k", "f_w", "f_u", "v_best", "step", "ns"};

    const auto t0 = std::chrono::steady_clock::now();
    for (long k = 1; k <= c.maxIter; ++k) {
        const double fw = problems::soft_objective(p, w);
        if (!std::isfinite(fw)) {
            throw NumericalFailure("nonfinite objective at iteration " + std::to_string(k));
        }
        vBest = std::min(vBest, fw);
        maxNorm = std::max(maxNorm, w.norm());
        wSum += w;

        const double alpha = step_size(s, k);
        if (k % c.recordEvery == 0 || k == c.maxIter) {
            const Vector u = wSum / static_cast<double>(k);
            const double fu = problems::soft_objective(p, u);
            const auto ns = std::chrono::duration_cast<std::chrono::nanoseconds>(
                                std::chrono::steady_clock::now() - t0)
                                .count();
            trace.rows.push_back({static_cast<double>(k), fw, fu, vBest, alpha,
                                  static_cast<double>(ns)});
        }

        Vector direction;
        if (exactHinge) {
            const auto g = problems::soft_subgradient(p, w);
            direction = g.smooth + g.nonsmooth;
        } else {
            Vector estimate = Vector::Zero(w.size());
            for (long b = 0; b < c.batchSize; ++b) {
                const auto j = static_cast<long>(rng.next_below(static_cast<std::uint64_t>(m)));
                const auto& sample = p.dataset().samples()[static_cast<size_t>(j)];
                const double margin = sample.y * sample.x.dot(w);
                if (1.0 - margin > 0.0) estimate -= scale * sample.y * sample.x;
            }
            direction = w + estimate;
        }
        w = sets::project(p.theta(), w - alpha * direction);
    }

    PrimalResult result;
    result.wLast = std::move(w);
    result.wAvg = wSum / static_cast<double>(c.maxIter);
    result.bestValue = vBest;
    result.maxIterateNorm = maxNorm;
    result.trace = std::move(trace);
    return result;
}

}  // namespace

StepSchedule hybrid_schedule(const problems::SolverConstants& c, double r) {
    if (!(c.gamma > 0.0)) throw std::invalid_argument("gamma must be > 0");
    const double rMin = 16.0 * c.L * c.L / (c.gamma * c.gamma);
    if (r < rMin) throw std::invalid_argument("hybrid schedule requires r >= 16 L^2 / gamma^2");
    return HybridSchedule{c.gamma, r};
}

StepSchedule hybrid_schedule(const problems::SolverConstants& c) {
    const double rMin = 16.0 * c.L * c.L / (c.gamma * c.gamma);
    return hybrid_schedule(c, std::max(rMin, 16.0));
}

StepSchedule pegasos_schedule(double gamma) {
    if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be > 0");
    return PegasosSchedule{gamma};
}

double step_size(const StepSchedule& s, long k) {
    if (k < 1) throw std::invalid_argument("iteration index must be >= 1");
    if (const auto* h = std::get_if<HybridSchedule>(&s)) {
        return 2.0 / (h->gamma * (static_cast<double>(k) + h->r));
    }
    const auto& peg = std::get<PegasosSchedule>(s);
    return 1.0 / (peg.gamma * static_cast<double>(k));
}

PrimalResult solve_subgradient(const problems::SoftMarginProblem& p, const StepSchedule& s,
                               const PrimalConfig& c, const Vector& w1) {
    return run(p, s, c, w1, false);
}

PrimalResult solve_stochastic(const problems::SoftMarginProblem& p, const StepSchedule& s,
                              const PrimalConfig& c, const Vector& w1) {
    PrimalConfig cfg = c;
    if (cfg.batchSize == kFullBatch) cfg.batchSize = p.dataset().size();
    if (cfg.batchSize < 1) throw std::invalid_argument("batchSize must be >= 1");
    return run(p, s, cfg, w1, true);
}

double theoretical_bound(const problems::SolverConstants& c, const StepSchedule& s, double dist1,
                         long k) {
    if (k < 1) throw std::invalid_argument("bound is defined for k >= 1");
    if (dist1 < 0.0) throw std::invalid_argument("dist1 must be >= 0");
    const double kk = static_cast<double>(k);
    if (const auto* h = std::get_if<HybridSchedule>(&s)) {
        return h->gamma * h->r / (4.0 * kk) * dist1 * dist1 +
               c.ell * c.ell * std::log(kk + h->r + 1.0) / (h->gamma * kk);
    }
    const auto& peg = std::get<PegasosSchedule>(s);
    return c.ell * c.ell * (1.0 + std::log(kk)) / (2.0 * peg.gamma * kk);
}

double containment_radius(const problems::SoftMarginProblem& p) {
    if (p.dataset().size() == 0) {
        throw std::invalid_argument("containment radius needs a nonempty dataset");
    }
    double maxNorm = 0.0;
    for (const auto& s : p.dataset().samples()) maxNorm = std::max(maxNorm, s.x.norm());
    return p.C() * maxNorm;
}

}  // namespace marginforge::primal
