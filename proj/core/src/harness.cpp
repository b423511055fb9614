#include "np/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "np/problems.hpp"
#include "np/util.hpp"

namespace np {
namespace {

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

// comma split that ignores commas inside {...} (solver keys carry brace args)
std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    int depth = 0;
    for (char ch : s) {
        if (ch == '{') ++depth;
        if (ch == '}') --depth;
        if (ch == ',' && depth == 0) {
            const std::string t = trim(cur);
            if (!t.empty()) out.push_back(t);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    const std::string t = trim(cur);
    if (!t.empty()) out.push_back(t);
    return out;
}

bool parse_bool(const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw std::invalid_argument("expected a boolean, got: " + v);
}

void parallel_for(std::size_t count, std::size_t workers,
                  const std::function<void(std::size_t)>& fn) {
    if (workers == 0) workers = std::max<std::size_t>(1, std::thread::hardware_concurrency());
    workers = std::min(workers, count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
        });
    for (auto& t : pool) t.join();
}

std::uint64_t arm_seed(std::uint64_t base, std::uint64_t arm) {
    return derive_run_seed(base, 0xA5A5A5A5ULL + arm);
}

}  // namespace

// ---------------------------------------------------------------------------
// Configuration

void ExperimentConfig::validate() const {
    if (repetitions < 1) throw std::invalid_argument("repetitions must be >= 1");
    if (budget < 10) throw std::invalid_argument("budget must be >= 10 evaluations");
    if (problem_key.empty()) throw std::invalid_argument("missing problem key");
    if (solver_keys.empty()) throw std::invalid_argument("missing solver list");
    if (mode == "solo") {
        if (solver_keys.size() != 1)
            throw std::invalid_argument("mode solo takes exactly one solver");
    } else {
        parse_mode(mode);
        if (solver_keys.size() < 2)
            throw std::invalid_argument("portfolio modes take at least two solvers");
    }
    for (const auto& k : solver_keys) make_solver_factory(k);  // key syntax check
}

ExperimentConfig parse_experiment_config(const std::string& text) {
    ExperimentConfig cfg;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(line_no) +
                                        ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        try {
            if (key == "problem") cfg.problem_key = value;
            else if (key == "solvers") cfg.solver_keys = split_list(value);
            else if (key == "mode") cfg.mode = value;
            else if (key == "schedule.a") cfg.schedule.a = std::stod(value);
            else if (key == "schedule.b") cfg.schedule.b = std::stod(value);
            else if (key == "schedule.lag") cfg.schedule.lag = parse_lag(value);
            else if (key == "sharing") cfg.sharing = parse_bool(value);
            else if (key == "budget") cfg.budget = std::stoull(value);
            else if (key == "repetitions") cfg.repetitions = std::stoull(value);
            else if (key == "seed") cfg.base_seed = std::stoull(value);
            else if (key == "output") cfg.output_dir = value;
            else if (key == "label") cfg.label = value;
            else if (key == "dense") cfg.dense = parse_bool(value);
            else if (key == "check.slope.min") cfg.check_slope_min = std::stod(value);
            else if (key == "check.slope.max") cfg.check_slope_max = std::stod(value);
            else
                throw std::invalid_argument("unknown key '" + key + "'");
        } catch (const std::invalid_argument&) {
            throw;
        } catch (const std::exception& ex) {
            throw std::invalid_argument("config line " + std::to_string(line_no) + ": " +
                                        ex.what());
        }
    }
    if (cfg.label.empty()) {
        cfg.label = cfg.mode == "solo" && !cfg.solver_keys.empty()
                        ? cfg.solver_keys[0]
                        : cfg.mode + (cfg.sharing ? "+s" : "");
        cfg.label += "-" + cfg.problem_key;
    }
    return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
    if (!std::filesystem::is_regular_file(path))
        throw std::invalid_argument("not a config file: " + path);
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_experiment_config(buf.str());
}

// ---------------------------------------------------------------------------
// Aggregation and CSV

SlopeTableRow aggregate(const std::string& label, const std::vector<RunTrace>& traces,
                        std::uint64_t budget, std::uint64_t seed) {
    if (traces.empty()) throw std::invalid_argument("aggregate: no traces");
    SlopeTableRow row;
    row.label = label;
    row.reps = traces.size();
    row.budget = budget;
    row.seed = seed;
    std::vector<double> slopes;
    slopes.reserve(traces.size());
    for (const RunTrace& t : traces) {
        const SlopeReport rep = slope(t);
        if (rep.optimal) {
            ++row.optimal_hits;
        } else {
            slopes.push_back(rep.endpoint_slope);
        }
    }
    if (!slopes.empty()) {
        double mean = 0.0;
        for (double s : slopes) mean += s;
        mean /= static_cast<double>(slopes.size());
        row.mean_slope = mean;
        if (slopes.size() > 1) {
            double ss = 0.0;
            for (double s : slopes) ss += (s - mean) * (s - mean);
            const double sd = std::sqrt(ss / static_cast<double>(slopes.size() - 1));
            row.stderr_slope = sd / std::sqrt(static_cast<double>(slopes.size()));
        }
    }
    return row;
}

std::string trace_csv(const RunTrace& trace) {
    std::ostringstream out;
    const std::size_t m = trace.samples.empty() ? 0 : trace.samples[0].per_solver_evals.size();
    out << "total_evals,comparison_evals";
    for (std::size_t i = 0; i < m; ++i) out << ",solver" << i << "_evals";
    out << ",regret,regret_exact\n";
    for (const TraceSample& s : trace.samples) {
        out << s.total_evals << ',' << s.comparison_evals;
        for (std::size_t i = 0; i < m; ++i) out << ',' << s.per_solver_evals[i];
        out << ',' << fmt17(s.regret) << ',' << (s.regret_exact ? 1 : 0) << '\n';
    }
    return out.str();
}

std::string selections_csv(const RunTrace& trace) {
    std::ostringstream out;
    const std::size_t m = trace.selections.empty() ? 0 : trace.selections[0].resampled_means.size();
    out << "n,compared_at,chosen,evals_spent,total_after";
    for (std::size_t i = 0; i < m; ++i) out << ",mean" << i;
    out << '\n';
    for (const SelectionRecord& s : trace.selections) {
        out << s.n << ',' << s.compared_at << ',' << s.chosen << ',' << s.evals_spent << ','
            << s.total_after;
        for (double v : s.resampled_means) out << ',' << fmt17(v);
        out << '\n';
    }
    return out.str();
}

std::string aggregate_csv(const SlopeTable& table) {
    std::ostringstream out;
    out << "label,mean_slope,stderr,optimal_hits,reps,budget,seed\n";
    for (const SlopeTableRow& r : table.rows) {
        out << r.label << ',' << fmt17(r.mean_slope) << ',' << fmt17(r.stderr_slope) << ','
            << r.optimal_hits << ',' << r.reps << ',' << r.budget << ',' << r.seed << '\n';
    }
    return out.str();
}

void write_file(const std::string& path, const std::string& content) {
    const std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

// ---------------------------------------------------------------------------
// Experiment runner

ExperimentResult run_experiment(const ExperimentConfig& config, std::size_t workers) {
    config.validate();
    ExperimentResult result;
    result.config = config;
    const NoisyProblem problem = make_problem(config.problem_key);

    if (config.problem_key.rfind("sphere", 0) == 0 && problem.expected_value) {
        // Var f(x) <= 1 holds globally only for z = 0; reported, not enforced
        const std::size_t zpos = config.problem_key.find("-z");
        if (zpos != std::string::npos && std::stod(config.problem_key.substr(zpos + 2)) > 0.0)
            result.notes.push_back(
                "note: Var f(x) <= 1 only holds where ||x||^z <= 1 on this problem");
    }

    std::vector<SolverFactory> factories;
    for (const auto& k : config.solver_keys) factories.push_back(make_solver_factory(k));

    result.traces.assign(config.repetitions, RunTrace{});
    const bool solo = config.mode == "solo";
    PortfolioConfig pc;
    if (!solo) {
        pc.solvers = factories;
        pc.schedule = config.schedule.to_schedule();
        pc.mode = parse_mode(config.mode);
        pc.sharing = config.sharing;
        pc.total_budget = config.budget;
        pc.dense_trace = config.dense;
    }
    parallel_for(config.repetitions, workers, [&](std::size_t r) {
        const std::uint64_t run_seed = derive_run_seed(config.base_seed, r);
        RunTrace t = solo ? run_solo(factories[0], problem, config.budget, run_seed, config.dense)
                          : run_portfolio(pc, problem, run_seed);
        t.label = config.label;
        result.traces[r] = std::move(t);
    });

    result.row = aggregate(config.label, result.traces, config.budget, config.base_seed);

    if (!config.output_dir.empty()) {
        const std::filesystem::path dir(config.output_dir);
        for (std::size_t r = 0; r < result.traces.size(); ++r) {
            write_file((dir / ("trace_rep" + std::to_string(r) + ".csv")).string(),
                       trace_csv(result.traces[r]));
            if (!result.traces[r].selections.empty())
                write_file((dir / ("selections_rep" + std::to_string(r) + ".csv")).string(),
                           selections_csv(result.traces[r]));
        }
        SlopeTable table;
        table.rows.push_back(result.row);
        write_file((dir / "aggregate.csv").string(), aggregate_csv(table));
    }
    return result;
}

// ---------------------------------------------------------------------------
// Lag-necessity experiment

LagNecessityReport lag_necessity_experiment(double e, double beta, std::uint64_t n_max,
                                            std::uint64_t reps, bool with_lag,
                                            double lag_exponent, std::uint64_t base_seed) {
    if (!(e >= 0.0 && e < 0.5))
        throw std::invalid_argument("lag-necessity requires e in [0, 0.5)");
    if (beta > 2.0 - 4.0 * e + 1e-12)
        throw std::invalid_argument("lag-necessity requires beta <= 2 - 4e");
    if (n_max < 1 || reps < 1) throw std::invalid_argument("n_max and reps must be >= 1");

    const double alpha1 = 1.0 - e, alpha2 = 1.0 - 2.0 * e;
    LagNecessityReport rep;
    rep.with_lag = with_lag;
    rep.e = e;
    rep.beta = beta;
    rep.reps = reps;
    rep.rows.resize(n_max);

    std::vector<std::uint64_t> misrank(n_max, 0), tau(n_max, 0);
    for (std::uint64_t run = 0; run < reps; ++run) {
        RandomStream rng(derive_run_seed(base_seed, run), stream_id::kComparison);
        for (std::uint64_t n = 1; n <= n_max; ++n) {
            const std::uint64_t r_n = n * n * n * n;
            const std::uint64_t compared_at = with_lag ? ceil_pow(r_n, lag_exponent) : r_n;
            const double s_n = std::ceil(std::pow(static_cast<double>(r_n), beta));
            const double noise_sd = 1.0 / std::sqrt(s_n);  // mean of s_n unit-variance draws
            const double v1 = synthetic_regret_value(1.0, alpha1, compared_at);
            const double v2 = synthetic_regret_value(1.0, alpha2, compared_at);
            const double z1 = noise_sd * rng.gaussian();
            const double z2 = noise_sd * rng.gaussian();
            const double delta_prime =
                2.0 * (std::pow(static_cast<double>(r_n), -(1.0 - 2.0 * e)) -
                       std::pow(static_cast<double>(r_n), -(1.0 - e)));
            if (v2 + z2 < v1 + z1) ++misrank[n - 1];
            if (z1 - z2 > delta_prime) ++tau[n - 1];
            if (run == 0) {
                LagNecessityRow& row = rep.rows[n - 1];
                row.n = n;
                row.r_n = r_n;
                row.compared_at = compared_at;
                row.s_n = s_n;
                const double pair_sd = noise_sd * std::sqrt(2.0);
                row.misrank_prob = gaussian_upper_tail((v2 - v1) / pair_sd);
                row.tau_prob = gaussian_upper_tail(delta_prime / pair_sd);
            }
        }
    }

    std::uint64_t pooled_mis = 0, pooled_tau = 0, pooled_count = 0;
    const std::uint64_t pool_from = std::min<std::uint64_t>(10, n_max);
    for (std::uint64_t n = 1; n <= n_max; ++n) {
        LagNecessityRow& row = rep.rows[n - 1];
        row.misrank_freq = static_cast<double>(misrank[n - 1]) / static_cast<double>(reps);
        row.tau_freq = static_cast<double>(tau[n - 1]) / static_cast<double>(reps);
        if (n >= pool_from) {
            pooled_mis += misrank[n - 1];
            pooled_tau += tau[n - 1];
            pooled_count += reps;
        }
    }
    rep.pooled_misrank_freq = static_cast<double>(pooled_mis) / static_cast<double>(pooled_count);
    rep.pooled_tau_freq = static_cast<double>(pooled_tau) / static_cast<double>(pooled_count);
    return rep;
}

std::string LagNecessityReport::to_csv() const {
    std::ostringstream out;
    out << "n,r_n,compared_at,s_n,misrank_freq,misrank_prob,tau_freq,tau_prob\n";
    for (const LagNecessityRow& r : rows)
        out << r.n << ',' << r.r_n << ',' << r.compared_at << ',' << fmt17(r.s_n) << ','
            << fmt17(r.misrank_freq) << ',' << fmt17(r.misrank_prob) << ',' << fmt17(r.tau_freq)
            << ',' << fmt17(r.tau_prob) << '\n';
    return out.str();
}

// ---------------------------------------------------------------------------
// Budget-shift experiment

namespace {

struct MeanCurve {
    std::vector<double> log_e;
    std::vector<double> log_sr;

    double start() const { return log_sr.front(); }
    double deepest() const { return *std::min_element(log_sr.begin(), log_sr.end()); }
};

// Geometric-mean regret across reps on a common log-evaluation grid.
MeanCurve mean_log_curve(const std::vector<RunTrace>& traces, double le_min, double le_max,
                         std::size_t points) {
    MeanCurve curve;
    curve.log_e.resize(points);
    curve.log_sr.assign(points, 0.0);
    for (std::size_t k = 0; k < points; ++k)
        curve.log_e[k] = le_min + (le_max - le_min) * static_cast<double>(k) /
                                      static_cast<double>(points - 1);
    constexpr double kFloor = 1e-300;
    for (const RunTrace& t : traces) {
        std::vector<double> xs, ys;
        for (const TraceSample& s : t.samples) {
            if (s.total_evals == 0) continue;
            xs.push_back(std::log(static_cast<double>(s.total_evals)));
            ys.push_back(std::log(std::max(s.regret, kFloor)));
        }
        for (std::size_t k = 0; k < points; ++k) {
            const double x = curve.log_e[k];
            double y;
            if (x <= xs.front()) {
                y = ys.front();
            } else if (x >= xs.back()) {
                y = ys.back();
            } else {
                const auto it = std::upper_bound(xs.begin(), xs.end(), x);
                const std::size_t hi = static_cast<std::size_t>(it - xs.begin());
                const double w = (x - xs[hi - 1]) / (xs[hi] - xs[hi - 1]);
                y = ys[hi - 1] + w * (ys[hi] - ys[hi - 1]);
            }
            curve.log_sr[k] += y;
        }
    }
    for (double& v : curve.log_sr) v /= static_cast<double>(traces.size());
    return curve;
}

// Smallest log-evaluation count at which the mean curve reaches `level`.
double curve_crossing(const MeanCurve& curve, double level) {
    if (curve.log_sr.front() <= level) return curve.log_e.front();
    for (std::size_t k = 1; k < curve.log_sr.size(); ++k) {
        if (curve.log_sr[k] <= level) {
            const double w =
                (curve.log_sr[k - 1] - level) / (curve.log_sr[k - 1] - curve.log_sr[k]);
            return curve.log_e[k - 1] + w * (curve.log_e[k] - curve.log_e[k - 1]);
        }
    }
    return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

ShiftReport budget_shift_experiment(std::size_t M, const std::string& solver_key,
                                    const std::string& problem_key,
                                    const PowerLawSchedule& schedule, std::uint64_t budget,
                                    std::uint64_t reps, std::uint64_t base_seed,
                                    std::size_t workers) {
    if (M < 1) throw std::invalid_argument("shift experiment requires M >= 1");
    ShiftReport report;
    report.M = M;
    report.log_m = std::log(static_cast<double>(M));
    if (M == 1) {
        // degenerate: the portfolio is the solver
        report.levels.assign(5, 0.0);
        report.nopa_offsets.assign(5, 0.0);
        report.inopa_offsets.assign(5, 0.0);
        return report;
    }

    const NoisyProblem problem = make_problem(problem_key);
    const SolverFactory solver = make_solver_factory(solver_key);

    auto run_arm = [&](PortfolioMode mode, std::uint64_t arm) {
        std::vector<RunTrace> traces(reps);
        PortfolioConfig pc;
        pc.solvers.assign(M, solver);
        pc.schedule = schedule.to_schedule();
        pc.mode = mode;
        pc.total_budget = budget;
        parallel_for(reps, workers, [&](std::size_t r) {
            traces[r] = run_portfolio(pc, problem, derive_run_seed(arm_seed(base_seed, arm), r));
        });
        return traces;
    };
    std::vector<RunTrace> solo_traces(reps);
    parallel_for(reps, workers, [&](std::size_t r) {
        solo_traces[r] =
            run_solo(solver, problem, budget, derive_run_seed(arm_seed(base_seed, 0), r));
    });
    const std::vector<RunTrace> nopa_traces = run_arm(PortfolioMode::nopa, 1);
    const std::vector<RunTrace> inopa_traces = run_arm(PortfolioMode::inopa, 2);

    const double le_min = std::log(50.0);
    const double le_max = std::log(static_cast<double>(budget));
    const MeanCurve solo = mean_log_curve(solo_traces, le_min, le_max, 120);
    const MeanCurve nopa = mean_log_curve(nopa_traces, le_min, le_max, 120);
    const MeanCurve inopa = mean_log_curve(inopa_traces, le_min, le_max, 120);

    const double top = std::min({solo.start(), nopa.start(), inopa.start()});
    const double bottom = std::max({solo.deepest(), nopa.deepest(), inopa.deepest()});
    if (!(bottom < top))
        throw std::runtime_error("shift experiment: curves share no regret range");

    // Matched levels live in the steep part of every mean curve. The deepest
    // 30% of the common range is excluded: there the shallowest curve
    // flattens into its floor and crossing times are ill-conditioned.
    const double fractions[5] = {0.2, 0.325, 0.45, 0.575, 0.7};
    for (double f : fractions) {
        const double level = top + f * (bottom - top);
        report.levels.push_back(std::exp(level));
        const double base_cross = curve_crossing(solo, level);
        report.nopa_offsets.push_back(curve_crossing(nopa, level) - base_cross);
        report.inopa_offsets.push_back(curve_crossing(inopa, level) - base_cross);
    }
    return report;
}

std::string ShiftReport::to_csv() const {
    std::ostringstream out;
    out << "level,nopa_offset,inopa_offset\n";
    for (std::size_t k = 0; k < levels.size(); ++k)
        out << fmt17(levels[k]) << ',' << fmt17(nopa_offsets[k]) << ','
            << fmt17(inopa_offsets[k]) << '\n';
    return out.str();
}

// ---------------------------------------------------------------------------
// Chebyshev selection bound

std::vector<ChebyshevRow> chebyshev_selection_check(const std::vector<SolverProfile>& profiles,
                                                    const PowerLawSchedule& schedule,
                                                    const std::vector<std::uint64_t>& steps,
                                                    std::uint64_t reps, std::uint64_t base_seed) {
    const SolverClassification cls = classify_solvers(profiles);
    if (cls.degenerate)
        throw std::invalid_argument("chebyshev check needs at least two distinct constants");
    const std::size_t m = profiles.size();
    const Schedule sched = schedule.to_schedule();

    std::vector<ChebyshevRow> rows;
    RandomStream rng(base_seed, stream_id::kComparison);
    for (std::uint64_t n : steps) {
        ChebyshevRow row;
        row.n = n;
        row.compared_at = sched.lag_of_r(n);
        row.s_n = static_cast<double>(sched.s(n));
        const double eps = cls.epsilon(row.compared_at);
        row.bound = static_cast<double>(m) / (row.s_n * eps * eps);
        row.applicable = row.bound < 1.0;

        std::vector<double> sr(m);
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < m; ++i) {
            sr[i] = profiles[i].C /
                    std::pow(static_cast<double>(row.compared_at), profiles[i].alpha);
            best = std::min(best, sr[i]);
        }
        const double noise_sd = 1.0 / std::sqrt(row.s_n);
        std::uint64_t events = 0;
        for (std::uint64_t rep = 0; rep < reps; ++rep) {
            std::size_t chosen = 0;
            double y_best = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < m; ++i) {
                const double y = sr[i] + noise_sd * rng.gaussian();
                if (y < y_best) {
                    y_best = y;
                    chosen = i;
                }
            }
            if (sr[chosen] - best >= 2.0 * eps) ++events;
        }
        row.freq = static_cast<double>(events) / static_cast<double>(reps);
        if (row.applicable) {
            const double se = std::sqrt(row.bound * (1.0 - row.bound) /
                                        static_cast<double>(reps));
            row.holds = row.freq <= row.bound + 3.0 * se;
        }
        rows.push_back(row);
    }
    return rows;
}

}  // namespace np
