#include <benchmark/benchmark.h>

#include "np/portfolio.hpp"
#include "np/problems.hpp"
#include "np/solvers.hpp"

namespace {

void BM_sphere_draw(benchmark::State& state) {
    const np::NoisyProblem sphere = np::make_sphere(state.range(0), 2.0);
    np::SearchPoint x(std::vector<double>(state.range(0), 0.3));
    np::RandomStream rng(1, 1);
    for (auto _ : state) benchmark::DoNotOptimize(np::evaluate(sphere, x, rng));
}
BENCHMARK(BM_sphere_draw)->Arg(2)->Arg(15);

void BM_gaussian(benchmark::State& state) {
    np::RandomStream rng(1, 1);
    for (auto _ : state) benchmark::DoNotOptimize(rng.gaussian());
}
BENCHMARK(BM_gaussian);

void BM_rsaes_generation(benchmark::State& state) {
    const np::NoisyProblem sphere = np::make_sphere(2, 0.0);
    for (auto _ : state) {
        state.PauseTiming();
        np::RsaesSolver solver(np::RsaesConfig{}, 2, np::SearchPoint{0.5, 0.5});
        np::RandomStream rng(7, 1);
        state.ResumeTiming();
        benchmark::DoNotOptimize(solver.step(sphere, rng, 1u << 20));
    }
}
BENCHMARK(BM_rsaes_generation);

void BM_fabian_iteration(benchmark::State& state) {
    const np::NoisyProblem sphere = np::make_sphere(2, 0.0);
    np::FabianSolver solver(np::FabianConfig{0.1, 1.0, 100.0}, 2, np::SearchPoint{0.5, 0.5});
    np::RandomStream rng(7, 1);
    for (auto _ : state) benchmark::DoNotOptimize(solver.step(sphere, rng, 1u << 20));
}
BENCHMARK(BM_fabian_iteration);

void BM_newton_iteration(benchmark::State& state) {
    const np::NoisyProblem sphere = np::make_sphere(2, 0.0);
    for (auto _ : state) {
        state.PauseTiming();
        np::NewtonSolver solver(np::NewtonConfig{}, 2, np::SearchPoint{0.5, 0.5});
        np::RandomStream rng(7, 1);
        state.ResumeTiming();
        benchmark::DoNotOptimize(solver.step(sphere, rng, 1u << 20));
    }
}
BENCHMARK(BM_newton_iteration);

void BM_inopa_run(benchmark::State& state) {
    const np::NoisyProblem sphere = np::make_sphere(2, 0.0);
    np::PortfolioConfig cfg;
    cfg.solvers = {np::make_solver_factory("rsaes"), np::make_solver_factory("fabian1"),
                   np::make_solver_factory("fabian2"), np::make_solver_factory("newton")};
    np::PowerLawSchedule sched;
    sched.a = 4.2;
    sched.b = 2.2;
    sched.lag = np::LagSpec::power(1.0 / 4.2);
    cfg.schedule = sched.to_schedule();
    cfg.mode = np::PortfolioMode::inopa;
    cfg.total_budget = state.range(0);
    std::uint64_t seed = 1;
    for (auto _ : state) benchmark::DoNotOptimize(np::run_portfolio(cfg, sphere, seed++));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_inopa_run)->Arg(100000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
