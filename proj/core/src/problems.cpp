#include "np/problems.hpp"

#include <algorithm>
#include <stdexcept>

#include "np/util.hpp"

namespace np {

NoisyProblem make_sphere(std::size_t dimension, double z) {
    if (dimension == 0) throw std::invalid_argument("sphere dimension must be >= 1");
    if (z < 0.0) throw std::invalid_argument("sphere noise exponent must be >= 0");
    NoisyProblem p;
    p.dimension = dimension;
    p.name = "sphere-d" + std::to_string(dimension) + "-z" + format_double(z);
    p.sampler = [z](const SearchPoint& x, RandomStream& rng) {
        const double sq = x.squared_norm();
        const double amplitude = (z == 0.0) ? 1.0 : std::pow(std::sqrt(sq), z);
        return sq + amplitude * rng.gaussian();
    };
    p.expected_value = [](const SearchPoint& x) { return x.squared_norm(); };
    p.optimum = SearchPoint(std::vector<double>(dimension, 0.0));
    return p;
}

NoisyProblem make_deterministic(std::size_t dimension, std::function<double(const SearchPoint&)> fn,
                                std::optional<SearchPoint> optimum, std::string name) {
    NoisyProblem p;
    p.dimension = dimension;
    p.name = std::move(name);
    p.sampler = [fn](const SearchPoint& x, RandomStream&) { return fn(x); };
    p.expected_value = std::move(fn);
    p.optimum = std::move(optimum);
    return p;
}

NoisyProblem make_additive_noise(std::size_t dimension, std::function<double(const SearchPoint&)> base,
                                 double noise_std, std::optional<SearchPoint> optimum,
                                 std::string name) {
    if (noise_std < 0.0) throw std::invalid_argument("noise_std must be >= 0");
    NoisyProblem p;
    p.dimension = dimension;
    p.name = std::move(name);
    p.sampler = [base, noise_std](const SearchPoint& x, RandomStream& rng) {
        return base(x) + noise_std * rng.gaussian();
    };
    p.expected_value = std::move(base);
    p.optimum = std::move(optimum);
    return p;
}

NoisyProblem make_actuator_noise(std::size_t dimension, std::function<double(const SearchPoint&)> base,
                                 double noise_scale, std::optional<SearchPoint> optimum,
                                 std::string name) {
    if (noise_scale < 0.0) throw std::invalid_argument("noise_scale must be >= 0");
    NoisyProblem p;
    p.dimension = dimension;
    p.name = std::move(name);
    p.sampler = [base, noise_scale, dimension](const SearchPoint& x, RandomStream& rng) {
        SearchPoint shifted = x;
        for (std::size_t i = 0; i < dimension; ++i) shifted[i] += noise_scale * rng.gaussian();
        return base(shifted);
    };
    // no exact expected value: metrics must fall back to Monte Carlo
    p.optimum = std::move(optimum);
    return p;
}

NoisyProblem make_synthetic_line() {
    NoisyProblem p;
    p.dimension = 1;
    p.name = "synthetic";
    p.sampler = [](const SearchPoint& x, RandomStream& rng) { return x[0] + rng.gaussian(); };
    p.expected_value = [](const SearchPoint& x) { return x[0]; };
    p.optimum = SearchPoint{0.0};
    return p;
}

double synthetic_regret_value(double C, double alpha, std::uint64_t m) {
    if (m == 0) throw std::invalid_argument("synthetic_regret_value requires m >= 1");
    return C / std::pow(static_cast<double>(m), alpha);
}

SyntheticRegretSolver::SyntheticRegretSolver(double C, double alpha)
    : SolverDriver(SearchPoint{C}), C_(C), alpha_(alpha) {
    if (C <= 0.0 || alpha <= 0.0)
        throw std::invalid_argument("synthetic solver requires C > 0 and alpha > 0");
}

void SyntheticRegretSolver::advance(std::uint64_t k) {
    if (k == 0) return;
    consume(k);
    record(SearchPoint{synthetic_regret_value(C_, alpha_, evals_used())});
}

std::uint64_t SyntheticRegretSolver::step(const NoisyProblem&, RandomStream&,
                                          std::uint64_t allowance) {
    const std::uint64_t k = allowance == 0 ? 0 : 1;
    advance(k);
    return k;
}

std::uint64_t SyntheticRegretSolver::advance_to(const NoisyProblem&, RandomStream&,
                                                std::uint64_t target, std::uint64_t allowance) {
    if (evals_used() >= target) return 0;
    const std::uint64_t k = std::min<std::uint64_t>(target - evals_used(), allowance);
    advance(k);
    return k;
}

NoisyProblem make_problem(const std::string& key) {
    if (key.rfind("sphere-d", 0) == 0) {
        const std::size_t zpos = key.find("-z", 8);
        if (zpos == std::string::npos)
            throw std::invalid_argument("expected sphere-d{d}-z{z}: " + key);
        const unsigned long d = std::stoul(key.substr(8, zpos - 8));
        const double z = std::stod(key.substr(zpos + 2));
        return make_sphere(d, z);
    }
    if (key == "synthetic" || key.rfind("synthetic-C", 0) == 0) {
        // synthetic solver keys double as problem keys; they all share the
        // one-dimensional line problem
        return make_synthetic_line();
    }
    throw std::invalid_argument("unknown problem key: " + key);
}

}  // namespace np
