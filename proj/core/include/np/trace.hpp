#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "np/search_point.hpp"

namespace np {

// One selection step: which solver the portfolio picked at milestone r_n,
// comparing recommendations frozen at evaluation index lag(r_n).
struct SelectionRecord {
    std::uint64_t n = 0;            // selection index
    std::uint64_t compared_at = 0;  // lag(r_n)
    std::size_t chosen = 0;         // argmin of resampled means, first index on ties
    std::vector<double> resampled_means;
    std::uint64_t evals_spent = 0;  // comparison cost, M * s_n when complete
    std::uint64_t total_after = 0;  // instrumented total right after this selection
    std::vector<std::uint64_t> per_solver_after;
};

struct TraceSample {
    std::uint64_t total_evals = 0;
    std::vector<std::uint64_t> per_solver_evals;
    std::uint64_t comparison_evals = 0;
    SearchPoint recommendation;
    double regret = 0.0;
    bool regret_exact = true;
};

// Time series of one run: recommendation and true regret indexed by the
// evaluation count, plus the selection history. total_evals is strictly
// increasing across samples.
struct RunTrace {
    std::string problem;
    std::string label;
    std::uint64_t seed = 0;
    std::uint64_t budget = 0;
    std::vector<TraceSample> samples;
    std::vector<SelectionRecord> selections;

    const TraceSample& final_sample() const { return samples.back(); }
};

}  // namespace np
