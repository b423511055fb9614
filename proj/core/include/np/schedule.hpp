#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace np {

// The triple governing portfolio comparisons: comparison milestones r_n,
// resampling counts s_n, and the lag index lag(m) <= m at which frozen
// recommendations are compared. r and s are indexed by the selection count
// n >= 1; lag applies to evaluation indices.
struct Schedule {
    std::function<std::uint64_t(std::uint64_t)> r;
    std::function<std::uint64_t(std::uint64_t)> s;
    std::function<std::uint64_t(std::uint64_t)> lag;

    std::uint64_t lag_of_r(std::uint64_t n) const { return lag(r(n)); }
};

struct LagSpec {
    enum class Kind { power, log, none };
    Kind kind = Kind::power;
    double c = 1.0;  // exponent for the power form, lag(m) = ceil(m^c)

    static LagSpec power(double c) { return {Kind::power, c}; }
    static LagSpec logarithmic() { return {Kind::log, 0.0}; }
    static LagSpec none() { return {Kind::none, 1.0}; }

    std::uint64_t operator()(std::uint64_t m) const;
    std::string label() const;
};

/// Parses "pow:<c>", "log" or "none".
LagSpec parse_lag(const std::string& text);

// r_n = ceil(n^a), s_n = ceil(n^b), with one of the lag forms above.
struct PowerLawSchedule {
    double a = 4.2;
    double b = 2.2;
    LagSpec lag = LagSpec::power(1.0 / 4.2);

    Schedule to_schedule() const;
};

// Asymptotic conditions on a power-law schedule, for solver profiles with
// epsilon_n = C / n^(alpha*):
//   convergence: sum_j 1 / (s_j * eps_{lag(r_j)}^2) finite,
//   budget:      sum_{i<=n} s_i = o(r_n),
//   lag growth:  lag(n) = o(n).
// The report never blocks a run; schedules that fail a condition are usable.
struct ScheduleValidityReport {
    struct Line {
        std::string name;
        bool holds = false;
        std::string detail;
    };
    Line convergence;
    Line budget;
    Line lag_smallness;

    bool all_hold() const { return convergence.holds && budget.holds && lag_smallness.holds; }
    std::string to_string() const;
};

ScheduleValidityReport schedule_validity(const PowerLawSchedule& schedule, double alpha_star);

enum class PortfolioMode { nopa, inopa, nopa_coarse };

PortfolioMode parse_mode(const std::string& text);
std::string mode_label(PortfolioMode mode);

// Closed-form evaluation count at the n-th selection:
//   NOPA:  e_n = r_n * M * (1 + sum_{i<=n} s_i / r_n)
//   INOPA: e_n = r_n * M' * (1 + (M/M') sum_{i<=n} s_i / r_n) + (M - M') lag(r_n)
// M' = M reduces the second form to the first.
std::uint64_t theoretical_budget(PortfolioMode mode, std::size_t M, std::size_t M_prime,
                                 const Schedule& schedule, std::uint64_t n);

}  // namespace np
