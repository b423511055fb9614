#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "np/metrics.hpp"
#include "np/problems.hpp"

using namespace np;

namespace {

RunTrace synthetic_trace(const std::vector<std::pair<std::uint64_t, double>>& points) {
    RunTrace t;
    for (const auto& [n, regret] : points) {
        TraceSample s;
        s.total_evals = n;
        s.regret = regret;
        t.samples.push_back(s);
    }
    return t;
}

}  // namespace

TEST_CASE("simple regret on the sphere is the squared norm") {
    const NoisyProblem s2 = make_sphere(2, 0.0);
    CHECK(simple_regret(s2, SearchPoint{0.0, 0.0}).value == 0.0);
    CHECK(simple_regret(s2, SearchPoint{1.0, 0.0}).value == 1.0);
    const NoisyProblem s15 = make_sphere(15, 2.0);
    SearchPoint x(std::vector<double>(15, 0.1));
    const RegretValue r = simple_regret(s15, x);
    CHECK(r.value == doctest::Approx(0.15).epsilon(1e-12));
    CHECK(r.exact);
    CHECK(r.ci95 == 0.0);
}

TEST_CASE("Monte Carlo fallback estimates regret with a confidence interval") {
    // actuator noise on a linear base: E f(x + w) = base(x), so the true
    // regret of x against the optimum point is base(x) - base(opt)
    const auto base = [](const SearchPoint& x) { return x[0] + x[1]; };
    const NoisyProblem p =
        make_actuator_noise(2, base, 0.5, SearchPoint{-1.0, -1.0});
    RandomStream rng(33, 1);
    const RegretValue r = simple_regret(p, SearchPoint{1.0, 0.5}, &rng);
    CHECK_FALSE(r.exact);
    CHECK(r.ci95 > 0.0);
    CHECK(std::abs(r.value - 3.5) < 2.0 * r.ci95);
}

TEST_CASE("regret without an oracle or Monte Carlo is an error") {
    const NoisyProblem p = make_actuator_noise(1, [](const SearchPoint& x) { return x[0]; }, 0.5);
    CHECK_THROWS_AS(simple_regret(p, SearchPoint{0.0}), std::runtime_error);
    const NoisyProblem q =
        make_actuator_noise(1, [](const SearchPoint& x) { return x[0]; }, 0.5, SearchPoint{0.0});
    CHECK_THROWS_AS(simple_regret(q, SearchPoint{0.0}), std::runtime_error);
}

TEST_CASE("slope of an exact 1/n trace") {
    std::vector<std::pair<std::uint64_t, double>> pts;
    for (std::uint64_t n = 10; n <= 10000; n *= 2) pts.emplace_back(n, 1.0 / n);
    const SlopeReport rep = slope(synthetic_trace(pts));
    CHECK(rep.endpoint_slope == doctest::Approx(-1.0).epsilon(1e-9));
    CHECK(rep.regression_slope == doctest::Approx(-1.0).epsilon(1e-9));
    CHECK_FALSE(rep.optimal);
}

TEST_CASE("endpoint slope of 4/n^2 at n = 100") {
    std::vector<std::pair<std::uint64_t, double>> pts;
    for (std::uint64_t n = 10; n <= 100; n += 10) pts.emplace_back(n, 4.0 / (n * n));
    const SlopeReport rep = slope(synthetic_trace(pts));
    CHECK(rep.endpoint_slope == doctest::Approx(std::log(4e-4) / std::log(100.0)).epsilon(1e-12));
    CHECK(rep.endpoint_slope == doctest::Approx(-1.69897).epsilon(1e-5));
    CHECK(rep.regression_slope == doctest::Approx(-2.0).epsilon(1e-9));
}

TEST_CASE("hitting the optimum raises the Optimal flag") {
    const SlopeReport rep = slope(synthetic_trace({{10, 0.5}, {100, 0.0}}));
    CHECK(rep.optimal);
    CHECK(rep.regret_final == 0.0);
}

TEST_CASE("slope needs at least two samples") {
    CHECK_THROWS_AS(slope(synthetic_trace({{10, 0.5}})), std::invalid_argument);
}

TEST_CASE("regression recovers the exponent of K/n^alpha traces") {
    RandomStream rng(808, 0);
    for (int trial = 0; trial < 25; ++trial) {
        const double K = std::exp(rng.uniform(-7.0, 7.0));
        const double alpha = rng.uniform(0.1, 3.0);
        std::vector<std::pair<std::uint64_t, double>> pts;
        for (std::uint64_t n = 16; n <= 1u << 20; n *= 2)
            pts.emplace_back(n, K / std::pow(static_cast<double>(n), alpha));
        const SlopeReport rep = slope(synthetic_trace(pts));
        CHECK(rep.regression_slope == doctest::Approx(-alpha).epsilon(1e-6));
        // endpoint estimator converges at rate |log K| / log n
        const double bound =
            std::abs(std::log(K)) / std::log(static_cast<double>(pts.back().first)) + 1e-9;
        CHECK(std::abs(rep.endpoint_slope + alpha) <= bound);
    }
}

TEST_CASE("delta gaps") {
    CHECK(delta_gap({1.0, 2.0, 5.0}, 0) == 0.0);
    CHECK(delta_gap({1.0, 2.0, 5.0}, 2) == 4.0);
    CHECK(delta_gap({3.0, 3.0, 3.0}, 1) == 0.0);
    CHECK_THROWS_AS(delta_gap({}, 0), std::invalid_argument);
    CHECK_THROWS_AS(delta_gap({1.0}, 2), std::invalid_argument);
}

TEST_CASE("solver classification on the worked example") {
    const auto cls = classify_solvers({{1.0, 1.0}, {2.0, 1.0}, {1.0, 0.5}});
    CHECK_FALSE(cls.degenerate);
    CHECK(cls.C == doctest::Approx(1.0 / 3.0));
    CHECK(cls.alpha_star == 1.0);
    CHECK(cls.C_star == 1.0);
    CHECK(cls.set_optim == std::vector<std::size_t>{0, 1});
    CHECK(cls.subset_optim == std::vector<std::size_t>{0});
    CHECK(cls.epsilon(2) == doctest::Approx(1.0 / 6.0));
    CHECK(cls.epsilon(10) < cls.epsilon(9));  // strictly decreasing
}

TEST_CASE("two distinct constants give C = gap / 3") {
    const auto cls = classify_solvers({{1.0, 1.0}, {4.0, 1.0}});
    CHECK(cls.C == doctest::Approx(1.0));
}

TEST_CASE("equal constants are flagged degenerate") {
    const auto cls = classify_solvers({{2.0, 1.0}, {2.0, 0.5}});
    CHECK(cls.degenerate);
    CHECK(cls.subset_optim == std::vector<std::size_t>{0});
}

TEST_CASE("subset_optim is nested in set_optim") {
    RandomStream rng(606, 0);
    for (int trial = 0; trial < 40; ++trial) {
        std::vector<SolverProfile> profiles;
        const std::size_t m = 2 + rng.uniform_index(5);
        for (std::size_t i = 0; i < m; ++i)
            profiles.push_back({0.5 + 2.0 * rng.uniform01(),
                                0.25 * (1 + rng.uniform_index(4))});
        const auto cls = classify_solvers(profiles);
        CHECK(!cls.set_optim.empty());
        CHECK(!cls.subset_optim.empty());
        for (std::size_t i : cls.subset_optim) {
            CHECK(std::find(cls.set_optim.begin(), cls.set_optim.end(), i) != cls.set_optim.end());
            CHECK(profiles[i].alpha == cls.alpha_star);
            CHECK(profiles[i].C == cls.C_star);
        }
    }
}
