#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>

#include "np/problem.hpp"
#include "np/random.hpp"
#include "np/search_point.hpp"

namespace np {

// Stepwise noisy optimization solver. A driver owns its iterate state and a
// sparse log of recommendations keyed by its own evaluation count, so that
// recommendation_at(m) returns the recommendation in force after the m-th
// evaluation (the last milestone <= m). Milestone 0 is the initial iterate.
//
// step() runs one native iteration and returns the evaluations consumed,
// never more than `allowance`. When the allowance cannot cover a whole
// iteration, the step is truncated: the partial draws are counted but the
// iterate and recommendation stay unchanged.
class SolverDriver {
public:
    explicit SolverDriver(SearchPoint initial) {
        log_.emplace(0, std::move(initial));
    }
    virtual ~SolverDriver() = default;

    virtual std::uint64_t step(const NoisyProblem& problem, RandomStream& rng,
                               std::uint64_t allowance) = 0;

    // Runs whole iterations until evals_used() >= target (coarse-grain
    // solvers may overshoot) or the allowance runs out. Returns evaluations
    // consumed.
    virtual std::uint64_t advance_to(const NoisyProblem& problem, RandomStream& rng,
                                     std::uint64_t target, std::uint64_t allowance) {
        std::uint64_t consumed = 0;
        while (evals_ < target && consumed < allowance) {
            const std::uint64_t c = step(problem, rng, allowance - consumed);
            consumed += c;
            if (c == 0) break;  // cannot make progress
        }
        return consumed;
    }

    /// Externally supplied iterate (information sharing).
    virtual void inject(const SearchPoint& x) = 0;

    std::uint64_t evals_used() const { return evals_; }

    const SearchPoint& recommendation() const { return log_.rbegin()->second; }

    const SearchPoint& recommendation_at(std::uint64_t m) const {
        auto it = log_.upper_bound(m);
        if (it == log_.begin()) throw std::logic_error("recommendation log is empty");
        return std::prev(it)->second;
    }

protected:
    void consume(std::uint64_t k) { evals_ += k; }

    void record(SearchPoint rec) { log_.insert_or_assign(evals_, std::move(rec)); }

private:
    std::uint64_t evals_ = 0;
    std::map<std::uint64_t, SearchPoint> log_;
};

}  // namespace np
