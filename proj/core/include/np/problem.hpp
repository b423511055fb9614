#pragma once

#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "np/random.hpp"
#include "np/search_point.hpp"

namespace np {

// A stochastic objective. One sampler call is one noisy fitness draw and one
// budget unit. expected_value, when present, is the exact E f(x) used for
// regret reporting; synthetic problems also carry their optimum.
struct NoisyProblem {
    std::size_t dimension = 0;
    std::string name;
    std::function<double(const SearchPoint&, RandomStream&)> sampler;
    std::function<double(const SearchPoint&)> expected_value;  // may be empty
    std::optional<SearchPoint> optimum;

    bool has_oracle() const { return static_cast<bool>(expected_value) && optimum.has_value(); }
};

// Splits the evaluation budget into per-solver buckets plus the comparison
// bucket used by selection steps. total() is the sum by construction.
class EvaluationCounter {
public:
    EvaluationCounter() = default;
    explicit EvaluationCounter(std::size_t n_solvers) : per_solver_(n_solvers, 0) {}

    void charge_solver(std::size_t i, std::uint64_t k) { per_solver_.at(i) += k; }
    void charge_comparison(std::uint64_t k) { comparison_ += k; }

    std::uint64_t solver(std::size_t i) const { return per_solver_.at(i); }
    const std::vector<std::uint64_t>& per_solver() const { return per_solver_; }
    std::uint64_t comparison() const { return comparison_; }

    std::uint64_t total() const {
        return std::accumulate(per_solver_.begin(), per_solver_.end(), comparison_);
    }

private:
    std::vector<std::uint64_t> per_solver_;
    std::uint64_t comparison_ = 0;
};

/// One noisy draw f(x, w). Costs one budget unit to the caller.
inline double evaluate(const NoisyProblem& problem, const SearchPoint& x, RandomStream& rng) {
    check_point(x, problem.dimension);
    const double value = problem.sampler(x, rng);
    if (!std::isfinite(value))
        throw std::runtime_error("problem '" + problem.name + "' returned a non-finite fitness");
    return value;
}

/// Mean of s independent draws at x. Costs s budget units to the caller.
inline double resampled_mean(const NoisyProblem& problem, const SearchPoint& x,
                             std::uint64_t s, RandomStream& rng) {
    if (s == 0) throw std::invalid_argument("resampled_mean requires s >= 1");
    double acc = 0.0;
    for (std::uint64_t j = 0; j < s; ++j) acc += evaluate(problem, x, rng);
    return acc / static_cast<double>(s);
}

}  // namespace np
