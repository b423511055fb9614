#include "np/schedule.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "np/util.hpp"

namespace np {

std::uint64_t LagSpec::operator()(std::uint64_t m) const {
    if (m == 0) throw std::invalid_argument("lag argument must be >= 1");
    switch (kind) {
        case Kind::power: {
            const std::uint64_t v = ceil_pow(m, c);
            return v == 0 ? 1 : std::min(v, m);
        }
        case Kind::log: {
            const std::uint64_t v = ceil_snapped(std::log(static_cast<double>(m)));
            return v == 0 ? 1 : std::min(v, m);
        }
        case Kind::none:
            return m;
    }
    return m;
}

std::string LagSpec::label() const {
    switch (kind) {
        case Kind::power:
            return "pow:" + format_double(c);
        case Kind::log:
            return "log";
        case Kind::none:
            return "none";
    }
    return "?";
}

LagSpec parse_lag(const std::string& text) {
    if (text == "log") return LagSpec::logarithmic();
    if (text == "none") return LagSpec::none();
    if (text.rfind("pow:", 0) == 0) {
        const double c = std::stod(text.substr(4));
        if (!(c > 0.0 && c <= 1.0))
            throw std::invalid_argument("lag exponent must be in (0, 1]: " + text);
        return LagSpec::power(c);
    }
    throw std::invalid_argument("unknown lag spec (expected pow:<c>, log or none): " + text);
}

Schedule PowerLawSchedule::to_schedule() const {
    if (a <= 0.0 || b <= 0.0)
        throw std::invalid_argument("power-law schedule requires a > 0 and b > 0");
    const double ra = a, rb = b;
    const LagSpec lg = lag;
    Schedule sch;
    sch.r = [ra](std::uint64_t n) { return ceil_pow(n, ra); };
    sch.s = [rb](std::uint64_t n) { return ceil_pow(n, rb); };
    sch.lag = [lg](std::uint64_t m) { return lg(m); };
    return sch;
}

ScheduleValidityReport schedule_validity(const PowerLawSchedule& schedule, double alpha_star) {
    ScheduleValidityReport rep;
    const double a = schedule.a, b = schedule.b;
    std::ostringstream detail;

    rep.budget.name = "budget: sum s_i = o(r_n)";
    rep.budget.holds = b + 1.0 < a;
    detail << "b + 1 = " << format_double(b + 1.0) << (rep.budget.holds ? " < " : " >= ")
           << "a = " << format_double(a);
    rep.budget.detail = detail.str();

    rep.convergence.name = "convergence: sum 1/(s_j eps_lag(r_j)^2) < inf";
    rep.lag_smallness.name = "lag growth: lag(n) = o(n)";
    switch (schedule.lag.kind) {
        case LagSpec::Kind::power: {
            const double c = schedule.lag.c;
            const double margin = b - 2.0 * alpha_star * a * c;
            rep.convergence.holds = margin > 1.0;
            rep.convergence.detail = "b - 2 alpha* a c = " + format_double(margin) +
                                     (rep.convergence.holds ? " > 1" : " <= 1");
            rep.lag_smallness.holds = c < 1.0;
            rep.lag_smallness.detail =
                "c = " + format_double(c) + (rep.lag_smallness.holds ? " < 1" : " >= 1");
            break;
        }
        case LagSpec::Kind::log:
            rep.convergence.holds = b > 1.0;
            rep.convergence.detail = "log lag: series ~ sum log(j)^(2 alpha*)/j^b, b = " +
                                     format_double(b) + (rep.convergence.holds ? " > 1" : " <= 1");
            rep.lag_smallness.holds = true;
            rep.lag_smallness.detail = "log(n) = o(n)";
            break;
        case LagSpec::Kind::none: {
            const double margin = b - 2.0 * alpha_star * a;
            rep.convergence.holds = margin > 1.0;
            rep.convergence.detail = "no lag: b - 2 alpha* a = " + format_double(margin) +
                                     (rep.convergence.holds ? " > 1" : " <= 1");
            rep.lag_smallness.holds = false;
            rep.lag_smallness.detail = "lag(n) = n";
            break;
        }
    }
    return rep;
}

std::string ScheduleValidityReport::to_string() const {
    std::ostringstream out;
    for (const Line* line : {&convergence, &budget, &lag_smallness})
        out << (line->holds ? "[ok]   " : "[FAIL] ") << line->name << "  (" << line->detail
            << ")\n";
    return out.str();
}

PortfolioMode parse_mode(const std::string& text) {
    if (text == "nopa") return PortfolioMode::nopa;
    if (text == "inopa") return PortfolioMode::inopa;
    if (text == "nopa-coarse") return PortfolioMode::nopa_coarse;
    throw std::invalid_argument("unknown mode (expected nopa, inopa or nopa-coarse): " + text);
}

std::string mode_label(PortfolioMode mode) {
    switch (mode) {
        case PortfolioMode::nopa:
            return "nopa";
        case PortfolioMode::inopa:
            return "inopa";
        case PortfolioMode::nopa_coarse:
            return "nopa-coarse";
    }
    return "?";
}

std::uint64_t theoretical_budget(PortfolioMode mode, std::size_t M, std::size_t M_prime,
                                 const Schedule& schedule, std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("theoretical_budget requires n >= 1");
    if (M_prime > M) throw std::invalid_argument("theoretical_budget requires M' <= M");
    if (M_prime == 0) throw std::invalid_argument("theoretical_budget requires M' >= 1");
    std::uint64_t sum_s = 0;
    for (std::uint64_t i = 1; i <= n; ++i) sum_s += schedule.s(i);
    const std::uint64_t rn = schedule.r(n);
    if (mode == PortfolioMode::inopa)
        return M_prime * rn + M * sum_s + (M - M_prime) * schedule.lag(rn);
    return M * (rn + sum_s);
}

}  // namespace np
