// noisy-portfolio: experiment runner for noisy optimization solvers and
// NOPA/INOPA portfolios. Subcommands: run, lag-necessity, shift,
// validate-schedule. Exit codes: 0 ok, 2 configuration error, 3 check-mode
// threshold failure.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "np/harness.hpp"
#include "np/metrics.hpp"
#include "np/util.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitCheckFailed = 3;

std::uint64_t seed_override(std::uint64_t seed) {
    if (const char* env = std::getenv("NP_SEED")) return std::stoull(env);
    return seed;
}

int cmd_run(const std::string& config_path, std::size_t workers, bool check, bool dense) {
    np::ExperimentConfig cfg = np::load_experiment_config(config_path);
    cfg.base_seed = seed_override(cfg.base_seed);
    if (dense) cfg.dense = true;
    const auto started = std::chrono::steady_clock::now();
    const np::ExperimentResult result = np::run_experiment(cfg, workers);
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    for (const auto& note : result.notes) std::cout << note << "\n";

    const auto& row = result.row;
    std::cout << "label=" << row.label << " mean_slope=" << np::format_double(row.mean_slope)
              << " stderr=" << np::format_double(row.stderr_slope)
              << " optimal_hits=" << row.optimal_hits << " reps=" << row.reps
              << " budget=" << row.budget << " seed=" << row.seed << " wall_seconds="
              << np::format_double(elapsed) << "\n";
    if (!cfg.output_dir.empty())
        std::cout << "wrote " << cfg.output_dir << "/aggregate.csv and " << result.traces.size()
                  << " trace files\n";

    if (check) {
        bool ok = true;
        if (cfg.check_slope_min && row.mean_slope < *cfg.check_slope_min) ok = false;
        if (cfg.check_slope_max && row.mean_slope > *cfg.check_slope_max) ok = false;
        if (!ok) {
            std::cout << "check FAILED: mean slope " << np::format_double(row.mean_slope)
                      << " outside [" << (cfg.check_slope_min ? np::format_double(*cfg.check_slope_min) : "-inf")
                      << ", " << (cfg.check_slope_max ? np::format_double(*cfg.check_slope_max) : "inf")
                      << "]\n";
            return kExitCheckFailed;
        }
        std::cout << "check passed\n";
    }
    return kExitOk;
}

int cmd_lag_necessity(double e, double beta, std::uint64_t nmax, std::uint64_t reps,
                      const std::string& lag, std::uint64_t seed, const std::string& out,
                      bool check) {
    bool with_lag = false;
    double lag_c = 0.25;
    if (!lag.empty()) {
        const np::LagSpec spec = np::parse_lag(lag);
        if (spec.kind == np::LagSpec::Kind::power) {
            with_lag = true;
            lag_c = spec.c;
        } else if (spec.kind != np::LagSpec::Kind::none) {
            throw std::invalid_argument("lag-necessity supports pow:<c> or none");
        }
    }
    const np::LagNecessityReport rep =
        np::lag_necessity_experiment(e, beta, nmax, reps, with_lag, lag_c, seed_override(seed));
    std::cout << "lag=" << (with_lag ? "pow:" + np::format_double(lag_c) : "none") << " e=" << e
              << " beta=" << beta << " reps=" << reps << "\n"
              << "pooled misranking frequency (n >= 10): "
              << np::format_double(rep.pooled_misrank_freq) << "\n"
              << "pooled tau-event frequency  (n >= 10): "
              << np::format_double(rep.pooled_tau_freq) << "\n";
    if (!out.empty()) {
        np::write_file(out, rep.to_csv());
        std::cout << "wrote " << out << "\n";
    }
    if (check) {
        const bool ok = with_lag ? rep.pooled_misrank_freq < 0.01 : rep.pooled_misrank_freq >= 0.04;
        std::cout << (ok ? "check passed\n" : "check FAILED\n");
        if (!ok) return kExitCheckFailed;
    }
    return kExitOk;
}

int cmd_shift(std::size_t m, const std::string& solver, const std::string& problem,
              double a, double b, const std::string& lag, std::uint64_t budget,
              std::uint64_t reps, std::uint64_t seed, std::size_t workers,
              const std::string& out, bool check) {
    np::PowerLawSchedule schedule;
    schedule.a = a;
    schedule.b = b;
    schedule.lag = np::parse_lag(lag);
    const np::ShiftReport rep = np::budget_shift_experiment(m, solver, problem, schedule, budget,
                                                            reps, seed_override(seed), workers);
    std::cout << "M=" << m << " log(M)=" << np::format_double(rep.log_m) << "\n";
    for (std::size_t k = 0; k < rep.levels.size(); ++k)
        std::cout << "level " << np::format_double(rep.levels[k])
                  << ": nopa_offset=" << np::format_double(rep.nopa_offsets[k])
                  << " inopa_offset=" << np::format_double(rep.inopa_offsets[k]) << "\n";
    if (!out.empty()) {
        np::write_file(out, rep.to_csv());
        std::cout << "wrote " << out << "\n";
    }
    if (check && m > 1) {
        const double lo = 0.7 * rep.log_m, hi = 1.4 * rep.log_m;
        const bool nopa_ok = rep.nopa_deepest() >= lo && rep.nopa_deepest() <= hi;
        const bool inopa_ok = rep.inopa_deepest() < rep.nopa_deepest();
        std::cout << "nopa deepest offset " << np::format_double(rep.nopa_deepest()) << " in ["
                  << np::format_double(lo) << ", " << np::format_double(hi) << "]: "
                  << (nopa_ok ? "yes" : "NO") << "\n"
                  << "inopa deepest offset " << np::format_double(rep.inopa_deepest())
                  << " < nopa: " << (inopa_ok ? "yes" : "NO") << "\n";
        if (!nopa_ok || !inopa_ok) return kExitCheckFailed;
        std::cout << "check passed\n";
    }
    return kExitOk;
}

int cmd_validate_schedule(double a, double b, const std::string& lag, double alpha_star) {
    np::PowerLawSchedule schedule;
    schedule.a = a;
    schedule.b = b;
    schedule.lag = np::parse_lag(lag);
    const np::ScheduleValidityReport rep = np::schedule_validity(schedule, alpha_star);
    std::cout << rep.to_string();
    std::cout << (rep.all_hold() ? "schedule satisfies all conditions\n"
                                 : "schedule violates at least one condition (reported only; "
                                   "runs are never blocked)\n");
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"noisy black-box optimization solvers and NOPA/INOPA portfolios"};
    app.require_subcommand(1);

    std::string config_path, lag = "none", solver = "fabian1", problem = "sphere-d2-z0", out;
    std::size_t workers = 0, m = 4;
    bool check = false, dense = false;
    double e = 0.25, beta = 1.0, a = 4.2, b = 2.2, alpha_star = 1.0;
    std::uint64_t nmax = 200, reps = 100, seed = 1, budget = 400000;

    auto* run = app.add_subcommand("run", "run an experiment config file");
    run->add_option("config", config_path, "flat key=value experiment file")->required();
    run->add_option("--workers", workers, "worker threads (0 = hardware)");
    run->add_flag("--check", check, "exit 3 when the config's slope band is violated");
    run->add_flag("--dense", dense, "record every milestone in trace CSVs");

    auto* lagcmd = app.add_subcommand("lag-necessity", "misranking frequency with/without lag");
    lagcmd->add_option("--e", e, "regret exponent parameter, alpha_i = 1 - i e");
    lagcmd->add_option("--beta", beta, "resampling exponent, s_n = ceil(r_n^beta)");
    lagcmd->add_option("--nmax", nmax, "number of selection steps");
    lagcmd->add_option("--reps", reps, "independent repetitions");
    lagcmd->add_option("--lag", lag, "pow:<c> enables the lag (default none)");
    lagcmd->add_option("--seed", seed, "base seed");
    lagcmd->add_option("--out", out, "write the per-step CSV here");
    lagcmd->add_flag("--check", check, "exit 3 when the misranking thresholds fail");

    auto* shift = app.add_subcommand("shift", "log(M) budget-shift experiment");
    shift->add_option("--m", m, "number of identical solver copies");
    shift->add_option("--solver", solver, "solver key");
    shift->add_option("--problem", problem, "problem key");
    shift->add_option("--a", a, "schedule exponent for r_n");
    shift->add_option("--b", b, "schedule exponent for s_n");
    shift->add_option("--lag", lag, "lag spec (pow:<c>, log, none)");
    shift->add_option("--budget", budget, "total evaluations per arm");
    shift->add_option("--reps", reps, "repetitions per arm");
    shift->add_option("--seed", seed, "base seed");
    shift->add_option("--workers", workers, "worker threads (0 = hardware)");
    shift->add_option("--out", out, "write the offsets CSV here");
    shift->add_flag("--check", check, "exit 3 when offsets leave the expected bands");

    auto* validate = app.add_subcommand("validate-schedule", "schedule condition report");
    validate->add_option("--a", a, "schedule exponent for r_n")->required();
    validate->add_option("--b", b, "schedule exponent for s_n")->required();
    validate->add_option("--lag", lag, "lag spec (pow:<c>, log, none)")->required();
    validate->add_option("--alpha-star", alpha_star, "best regret exponent alpha*");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (run->parsed()) return cmd_run(config_path, workers, check, dense);
        if (lagcmd->parsed())
            return cmd_lag_necessity(e, beta, nmax, reps, lag == "none" ? "" : lag, seed, out,
                                     check);
        if (shift->parsed())
            return cmd_shift(m, solver, problem, a, b, lag, budget, reps, seed, workers, out,
                             check);
        if (validate->parsed()) return cmd_validate_schedule(a, b, lag, alpha_star);
    } catch (const std::invalid_argument& ex) {
        std::cerr << "configuration error: " << ex.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    }
    return kExitOk;
}
