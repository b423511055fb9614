#include "np/metrics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace np {

RegretValue simple_regret(const NoisyProblem& problem, const SearchPoint& x_tilde,
                          RandomStream* mc_rng, std::uint64_t mc_samples) {
    check_point(x_tilde, problem.dimension);
    if (!problem.optimum.has_value())
        throw std::runtime_error("simple_regret: problem '" + problem.name +
                                 "' has no known optimum");
    if (problem.expected_value) {
        return {problem.expected_value(x_tilde) - problem.expected_value(*problem.optimum), true,
                0.0};
    }
    if (mc_rng == nullptr)
        throw std::runtime_error("simple_regret: problem '" + problem.name +
                                 "' has no expected-value oracle and Monte Carlo is disabled");
    auto estimate = [&](const SearchPoint& x, double& mean, double& var) {
        double m = 0.0, m2 = 0.0;
        for (std::uint64_t k = 1; k <= mc_samples; ++k) {
            const double v = evaluate(problem, x, *mc_rng);
            const double d = v - m;
            m += d / static_cast<double>(k);
            m2 += d * (v - m);
        }
        mean = m;
        var = m2 / static_cast<double>(mc_samples - 1);
    };
    double m1, v1, m0, v0;
    estimate(x_tilde, m1, v1);
    estimate(*problem.optimum, m0, v0);
    const double half_width = 1.96 * std::sqrt((v1 + v0) / static_cast<double>(mc_samples));
    return {m1 - m0, false, half_width};
}

SlopeReport slope(const RunTrace& trace) {
    if (trace.samples.size() < 2)
        throw std::invalid_argument("slope requires a trace with at least 2 samples");
    SlopeReport rep;
    const TraceSample& last = trace.final_sample();
    rep.n_final = last.total_evals;
    rep.regret_final = last.regret;
    if (last.regret <= 0.0) {
        rep.optimal = true;
        rep.endpoint_slope = std::numeric_limits<double>::quiet_NaN();
    } else {
        rep.endpoint_slope =
            std::log(last.regret) / std::log(static_cast<double>(last.total_evals));
    }

    // least squares of log(regret) against log(evals), ignoring the burn-in
    // below 10 evaluations and any exact-zero regrets
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t count = 0;
    for (const TraceSample& s : trace.samples) {
        if (s.total_evals < 10 || s.regret <= 0.0) continue;
        const double x = std::log(static_cast<double>(s.total_evals));
        const double y = std::log(s.regret);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++count;
    }
    if (count >= 2) {
        const double denom = static_cast<double>(count) * sxx - sx * sx;
        rep.regression_slope =
            denom == 0.0 ? 0.0 : (static_cast<double>(count) * sxy - sx * sy) / denom;
    } else {
        rep.regression_slope = std::numeric_limits<double>::quiet_NaN();
    }
    return rep;
}

double delta_gap(const std::vector<double>& regrets, std::size_t i) {
    if (regrets.empty()) throw std::invalid_argument("delta_gap: empty regret vector");
    if (i >= regrets.size()) throw std::invalid_argument("delta_gap: index out of range");
    double best = regrets[0];
    for (double r : regrets) {
        if (!std::isfinite(r)) throw std::invalid_argument("delta_gap: non-finite regret");
        best = std::min(best, r);
    }
    return regrets[i] - best;
}

double SolverClassification::epsilon(std::uint64_t n) const {
    return C / std::pow(static_cast<double>(n), alpha_star);
}

SolverClassification classify_solvers(const std::vector<SolverProfile>& profiles) {
    if (profiles.size() < 2)
        throw std::invalid_argument("classify_solvers requires at least 2 profiles");
    SolverClassification out;
    double min_gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < profiles.size(); ++i)
        for (std::size_t j = 0; j < profiles.size(); ++j) {
            const double gap = std::abs(profiles[i].C - profiles[j].C);
            if (gap > 0.0) min_gap = std::min(min_gap, gap);
        }
    if (!std::isfinite(min_gap)) {
        out.degenerate = true;  // all constants equal: C is undefined
    } else {
        out.C = min_gap / 3.0;
    }

    out.alpha_star = profiles[0].alpha;
    for (const SolverProfile& p : profiles) out.alpha_star = std::max(out.alpha_star, p.alpha);

    out.C_star = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < profiles.size(); ++i)
        if (profiles[i].alpha == out.alpha_star) {
            out.set_optim.push_back(i);
            out.C_star = std::min(out.C_star, profiles[i].C);
        }
    for (std::size_t i : out.set_optim)
        if (profiles[i].C == out.C_star) out.subset_optim.push_back(i);
    return out;
}

}  // namespace np
