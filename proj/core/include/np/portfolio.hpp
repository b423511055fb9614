#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "np/metrics.hpp"
#include "np/problem.hpp"
#include "np/schedule.hpp"
#include "np/solvers.hpp"
#include "np/trace.hpp"

namespace np {

struct PortfolioConfig {
    std::vector<SolverFactory> solvers;  // M >= 2
    Schedule schedule;
    PortfolioMode mode = PortfolioMode::nopa;
    bool sharing = false;
    std::uint64_t total_budget = 0;  // evaluations, portfolio + comparison
    bool dense_trace = false;
};

// One selection step: evaluate each recommendation s_n times and pick the
// minimal empirical mean (first index on ties). Charges M * s_n comparison
// evaluations to the counter.
SelectionRecord select(const NoisyProblem& problem, const std::vector<SearchPoint>& recommendations,
                       std::uint64_t s_n, RandomStream& rng, EvaluationCounter& counter);

// Runs the portfolio until the budget is exhausted. All three modes share
// milestone semantics (solvers advance by whole iterations until their own
// counter reaches the milestone, which reduces to one-evaluation-at-a-time
// for fine-grain solvers):
//   nopa         every solver is advanced to r_n before selection n,
//   nopa-coarse  same, with optional recommendation sharing after selections,
//   inopa        non-selected solvers only ever reach lag(r_n); the chosen
//                solver is topped up to r_{n+1} after selection n.
// Selections always compare recommendations frozen at index lag(r_n), with
// s_n resamplings. Until the first selection completes, the portfolio
// recommendation is solver 0's current recommendation.
RunTrace run_portfolio(const PortfolioConfig& config, const NoisyProblem& problem,
                       std::uint64_t run_seed);

/// A single solver run to the given budget, traced the same way.
RunTrace run_solo(const SolverFactory& solver, const NoisyProblem& problem, std::uint64_t budget,
                  std::uint64_t run_seed, bool dense_trace = false);

/// The shared initial iterate of a run: uniform over [-1, 1]^d.
SearchPoint draw_initial_point(std::size_t dimension, std::uint64_t run_seed);

}  // namespace np
