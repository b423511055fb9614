#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "np/problem.hpp"
#include "np/trace.hpp"

namespace np {

struct RegretValue {
    double value = 0.0;
    bool exact = true;
    double ci95 = 0.0;  // half-width; 0 for exact values
};

// Simple regret E f(x_tilde) - E f(x*). Exact when the problem carries an
// expected-value oracle; otherwise estimated by Monte Carlo with mc_samples
// draws per point (flagged non-exact, with a 95% confidence half-width).
// Throws when neither route is available.
RegretValue simple_regret(const NoisyProblem& problem, const SearchPoint& x_tilde,
                          RandomStream* mc_rng = nullptr, std::uint64_t mc_samples = 10000);

struct SlopeReport {
    double endpoint_slope = 0.0;    // log(SR_final) / log(n_final)
    double regression_slope = 0.0;  // least squares in log-log over the trace
    std::uint64_t n_final = 0;
    double regret_final = 0.0;
    bool optimal = false;  // final regret is exactly zero: the optimum was hit
};

/// Convergence slope estimates of a run trace. Requires >= 2 samples.
SlopeReport slope(const RunTrace& trace);

/// regrets[i] - min(regrets): the price of picking solver i.
double delta_gap(const std::vector<double>& regrets, std::size_t i);

/// Regret model of one solver: simple regret ~ C / n^alpha.
struct SolverProfile {
    double C = 1.0;
    double alpha = 1.0;
};

// Classification of a solver set by regret profiles:
//   C       = 1/3 min |C_i - C_j| over distinct values,
//   alpha*  = max_i alpha_i,
//   C*      = min C_i among solvers with alpha_i = alpha*,
//   SetOptim    = solvers with the best exponent,
//   SubSetOptim = solvers with the best exponent and best constant,
//   epsilon_n   = C / n^alpha*.
// All-equal constants leave C undefined; the result is flagged degenerate.
struct SolverClassification {
    bool degenerate = false;
    double C = 0.0;
    double alpha_star = 0.0;
    double C_star = 0.0;
    std::vector<std::size_t> set_optim;
    std::vector<std::size_t> subset_optim;

    double epsilon(std::uint64_t n) const;
};

SolverClassification classify_solvers(const std::vector<SolverProfile>& profiles);

}  // namespace np
