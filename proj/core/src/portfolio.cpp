#include "np/portfolio.hpp"

#include <algorithm>
#include <stdexcept>

namespace np {

SelectionRecord select(const NoisyProblem& problem, const std::vector<SearchPoint>& recommendations,
                       std::uint64_t s_n, RandomStream& rng, EvaluationCounter& counter) {
    if (recommendations.size() < 2)
        throw std::invalid_argument("select requires at least 2 recommendations");
    if (s_n == 0) throw std::invalid_argument("select requires s_n >= 1");
    SelectionRecord rec;
    rec.resampled_means.reserve(recommendations.size());
    for (const SearchPoint& x : recommendations) {
        rec.resampled_means.push_back(resampled_mean(problem, x, s_n, rng));
        counter.charge_comparison(s_n);
    }
    rec.evals_spent = s_n * recommendations.size();
    rec.chosen = 0;
    for (std::size_t i = 1; i < recommendations.size(); ++i)
        if (rec.resampled_means[i] < rec.resampled_means[rec.chosen]) rec.chosen = i;
    return rec;
}

namespace {

// Per-run state shared by the portfolio and solo runners.
class Runner {
public:
    Runner(const NoisyProblem& problem, std::uint64_t budget, std::uint64_t run_seed,
           std::size_t n_solvers, bool dense)
        : problem_(problem),
          budget_(budget),
          counter_(n_solvers),
          comparison_rng_(run_seed, stream_id::kComparison),
          metrics_rng_(run_seed, stream_id::kComparison + 1),
          dense_(dense),
          next_sample_(dense ? 1 : 10) {
        solver_rng_.reserve(n_solvers);
        for (std::size_t i = 0; i < n_solvers; ++i)
            solver_rng_.emplace_back(run_seed, stream_id::kSolverBase + i);
        trace_.seed = run_seed;
        trace_.budget = budget;
        trace_.problem = problem.name;
    }

    std::uint64_t remaining() const {
        const std::uint64_t used = counter_.total();
        return used >= budget_ ? 0 : budget_ - used;
    }

    // Advances solver i until its own counter reaches `target`, chunked so
    // the trace grid is honored even inside long advances.
    void advance_solver(std::vector<std::unique_ptr<SolverDriver>>& drivers, std::size_t i,
                        std::uint64_t target) {
        SolverDriver& driver = *drivers[i];
        while (driver.evals_used() < target && remaining() > 0) {
            const std::uint64_t total = counter_.total();
            const std::uint64_t room = next_sample_ > total ? next_sample_ - total : 1;
            const std::uint64_t sub_target =
                std::min<std::uint64_t>(target, driver.evals_used() + room);
            const std::uint64_t consumed =
                driver.advance_to(problem_, solver_rng_[i], sub_target, remaining());
            counter_.charge_solver(i, consumed);
            maybe_sample(drivers);
            if (consumed == 0) break;
        }
    }

    // Selection step n over recommendations frozen at lag(r_n). Returns false
    // when the budget cannot cover the full comparison: the partial cost is
    // counted and the previous choice stays in force.
    bool perform_selection(std::vector<std::unique_ptr<SolverDriver>>& drivers,
                           const Schedule& schedule, std::uint64_t n) {
        const std::uint64_t lag_rn = schedule.lag_of_r(n);
        const std::uint64_t s_n = schedule.s(n);
        std::vector<SearchPoint> recs;
        recs.reserve(drivers.size());
        for (auto& d : drivers) recs.push_back(d->recommendation_at(lag_rn));

        const std::uint64_t cost = s_n * drivers.size();
        if (remaining() < cost) {
            // aborted comparison: draw what the budget allows, keep previous choice
            std::uint64_t left = remaining();
            for (std::size_t i = 0; i < recs.size() && left > 0; ++i) {
                const std::uint64_t k = std::min<std::uint64_t>(left, s_n);
                resampled_mean(problem_, recs[i], k, comparison_rng_);
                counter_.charge_comparison(k);
                left -= k;
            }
            return false;
        }

        SelectionRecord rec = select(problem_, recs, s_n, comparison_rng_, counter_);
        rec.n = n;
        rec.compared_at = lag_rn;
        rec.total_after = counter_.total();
        rec.per_solver_after = counter_.per_solver();
        chosen_ = rec.chosen;
        has_chosen_ = true;
        trace_.selections.push_back(std::move(rec));
        return true;
    }

    const SearchPoint& current_recommendation(
        const std::vector<std::unique_ptr<SolverDriver>>& drivers) const {
        return drivers[has_chosen_ ? chosen_ : 0]->recommendation();
    }

    void sample(const std::vector<std::unique_ptr<SolverDriver>>& drivers) {
        const std::uint64_t total = counter_.total();
        if (!trace_.samples.empty() && trace_.samples.back().total_evals == total) {
            trace_.samples.pop_back();  // keep totals strictly increasing
        }
        TraceSample s;
        s.total_evals = total;
        s.per_solver_evals = counter_.per_solver();
        s.comparison_evals = counter_.comparison();
        s.recommendation = current_recommendation(drivers);
        RegretValue r = simple_regret(problem_, s.recommendation,
                                      problem_.expected_value ? nullptr : &metrics_rng_);
        s.regret = r.value;
        s.regret_exact = r.exact;
        trace_.samples.push_back(std::move(s));
        while (next_sample_ <= total) {
            next_sample_ = dense_ ? total + 1
                                  : std::max<std::uint64_t>(
                                        total + 1, static_cast<std::uint64_t>(
                                                       static_cast<double>(next_sample_) * 1.12));
        }
    }

    void maybe_sample(const std::vector<std::unique_ptr<SolverDriver>>& drivers) {
        if (counter_.total() >= next_sample_) sample(drivers);
    }

    std::size_t chosen() const { return chosen_; }
    bool has_chosen() const { return has_chosen_; }
    EvaluationCounter& counter() { return counter_; }
    RunTrace& trace() { return trace_; }
    const NoisyProblem& problem() const { return problem_; }
    RandomStream& solver_rng(std::size_t i) { return solver_rng_[i]; }

private:
    const NoisyProblem& problem_;
    std::uint64_t budget_;
    EvaluationCounter counter_;
    std::vector<RandomStream> solver_rng_;
    RandomStream comparison_rng_;
    RandomStream metrics_rng_;
    RunTrace trace_;
    bool dense_ = false;
    std::uint64_t next_sample_;
    std::size_t chosen_ = 0;
    bool has_chosen_ = false;
};

}  // namespace

SearchPoint draw_initial_point(std::size_t dimension, std::uint64_t run_seed) {
    RandomStream rng(run_seed, stream_id::kInit);
    SearchPoint x(std::vector<double>(dimension, 0.0));
    for (std::size_t i = 0; i < dimension; ++i) x[i] = rng.uniform(-1.0, 1.0);
    return x;
}

RunTrace run_portfolio(const PortfolioConfig& config, const NoisyProblem& problem,
                       std::uint64_t run_seed) {
    const std::size_t M = config.solvers.size();
    if (M < 2) throw std::invalid_argument("portfolio requires at least 2 solvers");
    const std::uint64_t first_cost = M * (config.schedule.s(1) + config.schedule.lag_of_r(1));
    if (config.total_budget < first_cost)
        throw std::invalid_argument("budget below the cost of the first comparison");

    Runner run(problem, config.total_budget, run_seed, M, config.dense_trace);
    const SearchPoint initial = draw_initial_point(problem.dimension, run_seed);
    std::vector<std::unique_ptr<SolverDriver>> drivers;
    drivers.reserve(M);
    for (const SolverFactory& f : config.solvers) drivers.push_back(f.make(problem.dimension, initial));

    run.sample(drivers);
    for (std::uint64_t n = 1; run.remaining() > 0; ++n) {
        const std::uint64_t phase_target = config.mode == PortfolioMode::inopa
                                               ? config.schedule.lag_of_r(n)
                                               : config.schedule.r(n);
        for (std::size_t i = 0; i < M; ++i) run.advance_solver(drivers, i, phase_target);

        bool reached = true;
        for (std::size_t i = 0; i < M; ++i)
            reached = reached && drivers[i]->evals_used() >= phase_target;
        if (!reached || !run.perform_selection(drivers, config.schedule, n)) break;
        run.sample(drivers);

        if (config.sharing) {
            const SearchPoint shared = drivers[run.chosen()]->recommendation();
            for (auto& d : drivers) d->inject(shared);
        }
        if (config.mode == PortfolioMode::inopa)
            run.advance_solver(drivers, run.chosen(), config.schedule.r(n + 1));
    }
    run.sample(drivers);
    return run.trace();
}

RunTrace run_solo(const SolverFactory& solver, const NoisyProblem& problem, std::uint64_t budget,
                  std::uint64_t run_seed, bool dense_trace) {
    Runner run(problem, budget, run_seed, 1, dense_trace);
    const SearchPoint initial = draw_initial_point(problem.dimension, run_seed);
    std::vector<std::unique_ptr<SolverDriver>> drivers;
    drivers.push_back(solver.make(problem.dimension, initial));
    run.trace().label = solver.name;

    run.sample(drivers);
    while (run.remaining() > 0) {
        const std::uint64_t consumed =
            drivers[0]->step(problem, run.solver_rng(0), run.remaining());
        if (consumed == 0) break;
        run.counter().charge_solver(0, consumed);
        run.maybe_sample(drivers);
    }
    run.sample(drivers);
    return run.trace();
}

}  // namespace np
