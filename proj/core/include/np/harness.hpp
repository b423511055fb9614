#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "np/metrics.hpp"
#include "np/portfolio.hpp"
#include "np/schedule.hpp"
#include "np/trace.hpp"

namespace np {

// Flat key=value experiment description. Recognized keys:
//   problem, solvers (comma list), mode (solo|nopa|inopa|nopa-coarse),
//   schedule.a, schedule.b, schedule.lag (pow:<c>|log|none), sharing,
//   budget, repetitions, seed, output, label, dense,
//   check.slope.min, check.slope.max
struct ExperimentConfig {
    std::string label;
    std::string problem_key;
    std::vector<std::string> solver_keys;
    std::string mode = "solo";
    PowerLawSchedule schedule;
    bool sharing = false;
    std::uint64_t budget = 0;
    std::uint64_t repetitions = 1;
    std::uint64_t base_seed = 1;
    std::string output_dir;
    bool dense = false;
    std::optional<double> check_slope_min;
    std::optional<double> check_slope_max;

    void validate() const;
};

ExperimentConfig parse_experiment_config(const std::string& text);
ExperimentConfig load_experiment_config(const std::string& path);

struct SlopeTableRow {
    std::string label;
    double mean_slope = 0.0;
    double stderr_slope = 0.0;
    std::uint64_t optimal_hits = 0;
    std::uint64_t reps = 0;
    std::uint64_t budget = 0;
    std::uint64_t seed = 0;
};

struct SlopeTable {
    std::vector<SlopeTableRow> rows;
};

/// Mean endpoint slope over the traces; Optimal runs are counted, not averaged.
SlopeTableRow aggregate(const std::string& label, const std::vector<RunTrace>& traces,
                        std::uint64_t budget, std::uint64_t seed);

struct ExperimentResult {
    ExperimentConfig config;
    std::vector<RunTrace> traces;
    SlopeTableRow row;
    std::vector<std::string> notes;
};

// Runs `repetitions` independently seeded runs (seed, run index) -> run seed,
// optionally spread over a worker pool. Results do not depend on the worker
// count. Writes one trace CSV per run plus aggregate.csv when the config
// names an output directory.
ExperimentResult run_experiment(const ExperimentConfig& config, std::size_t workers = 0);

std::string trace_csv(const RunTrace& trace);
std::string selections_csv(const RunTrace& trace);
std::string aggregate_csv(const SlopeTable& table);
void write_file(const std::string& path, const std::string& content);

// ---------------------------------------------------------------------------
// Lag-necessity experiment: two synthetic solvers with alpha_1 = 1 - e and
// alpha_2 = 1 - 2e (C_1 = C_2 = 1) under standard Gaussian evaluation noise,
// selections at r_n = n^4 with s_n = ceil(r_n^beta) resamplings. Reports, per
// selection step, the frequency of picking the worse solver (index 2) next
// to its closed form Phi_bar(delta_n / sqrt(2/s_n)), and the frequency of the
// proof's noise event Z_1 - Z_2 > delta'_n with delta'_n twice the lagless
// regret gap. Resampled means are drawn through their sufficient statistic
// N(value, 1/s_n); s_n reaches 200^4, literal draws are out of reach.
struct LagNecessityRow {
    std::uint64_t n = 0;
    std::uint64_t r_n = 0;
    std::uint64_t compared_at = 0;  // lag(r_n), or r_n without lag
    double s_n = 0.0;
    double misrank_freq = 0.0;
    double misrank_prob = 0.0;  // closed form for this n
    double tau_freq = 0.0;
    double tau_prob = 0.0;  // closed form Phi_bar(delta'_n / sqrt(2/s_n))
};

struct LagNecessityReport {
    bool with_lag = false;
    double e = 0.0;
    double beta = 0.0;
    std::uint64_t reps = 0;
    std::vector<LagNecessityRow> rows;
    // pooled over selection steps n in [10, n_max]
    double pooled_misrank_freq = 0.0;
    double pooled_tau_freq = 0.0;

    std::string to_csv() const;
};

LagNecessityReport lag_necessity_experiment(double e, double beta, std::uint64_t n_max,
                                            std::uint64_t reps, bool with_lag,
                                            double lag_exponent = 0.25,
                                            std::uint64_t base_seed = 1);

// ---------------------------------------------------------------------------
// Budget-shift experiment: one solver against NOPA and INOPA portfolios of M
// identical copies (distinct streams). Offsets are horizontal log-evaluation
// shifts between mean log-regret curves at matched regret levels; the last
// level is the deepest regret all three curves reach.
struct ShiftReport {
    std::size_t M = 0;
    double log_m = 0.0;
    std::vector<double> levels;         // regret levels, shallow to deep
    std::vector<double> nopa_offsets;   // log(evals) shift vs solo per level
    std::vector<double> inopa_offsets;

    double nopa_deepest() const { return nopa_offsets.back(); }
    double inopa_deepest() const { return inopa_offsets.back(); }
    std::string to_csv() const;
};

ShiftReport budget_shift_experiment(std::size_t M, const std::string& solver_key,
                                    const std::string& problem_key,
                                    const PowerLawSchedule& schedule, std::uint64_t budget,
                                    std::uint64_t reps, std::uint64_t base_seed,
                                    std::size_t workers = 0);

// ---------------------------------------------------------------------------
// Chebyshev selection bound: with solver regret profiles known, the chance
// that a selection at milestone lag(r_n) picks a solver whose regret gap
// exceeds 2 eps_{lag(r_n)} is at most M / (s_n eps_{lag(r_n)}^2). Checked
// empirically wherever the bound is informative (< 1).
struct ChebyshevRow {
    std::uint64_t n = 0;
    std::uint64_t compared_at = 0;
    double s_n = 0.0;
    double bound = 0.0;
    bool applicable = false;  // bound < 1
    double freq = 0.0;
    bool holds = true;  // freq <= bound + 3 SE, or not applicable
};

std::vector<ChebyshevRow> chebyshev_selection_check(const std::vector<SolverProfile>& profiles,
                                                    const PowerLawSchedule& schedule,
                                                    const std::vector<std::uint64_t>& steps,
                                                    std::uint64_t reps, std::uint64_t base_seed);

}  // namespace np
