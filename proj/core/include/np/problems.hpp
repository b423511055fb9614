#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <string>

#include "np/problem.hpp"
#include "np/solver.hpp"

namespace np {

// Sphere family f(x) = ||x||^2 + ||x||^z N with N standard Gaussian.
// z = 0 is additive noise, z = 2 multiplicative, z = 1 intermediate.
// Expected value and optimum are exact, so regret reporting is noise-free.
NoisyProblem make_sphere(std::size_t dimension, double z);

/// Noise-free problem built from a deterministic function.
NoisyProblem make_deterministic(std::size_t dimension, std::function<double(const SearchPoint&)> fn,
                                std::optional<SearchPoint> optimum = std::nullopt,
                                std::string name = "deterministic");

/// Additive unbiased noise around a deterministic base: f(x, w) = base(x) + noise_std * w.
NoisyProblem make_additive_noise(std::size_t dimension, std::function<double(const SearchPoint&)> base,
                                 double noise_std, std::optional<SearchPoint> optimum = std::nullopt,
                                 std::string name = "additive");

// Actuator noise: the base function is evaluated at a perturbed point,
// f(x, w) = base(x + noise_scale * w). No exact expected value is available;
// metrics fall back to Monte Carlo estimation for such problems.
NoisyProblem make_actuator_noise(std::size_t dimension, std::function<double(const SearchPoint&)> base,
                                 double noise_scale,
                                 std::optional<SearchPoint> optimum = std::nullopt,
                                 std::string name = "actuator");

// One-dimensional problem whose point encodes its own expected fitness:
// f((v), w) = v + w with w standard Gaussian, optimum at v = 0. This is the
// evaluation model for synthetic regret-curve solvers: a recommendation with
// expected regret q is the point (q).
NoisyProblem make_synthetic_line();

/// Exact expected regret C / m^alpha of a synthetic solver after m evaluations.
double synthetic_regret_value(double C, double alpha, std::uint64_t m);

// A virtual solver whose recommendation after m of its own evaluations has
// expected fitness exactly C / m^alpha above the optimum of the synthetic
// line problem. Its trajectory consumes budget without touching the sampler;
// only evaluations of its recommendations are real draws.
class SyntheticRegretSolver final : public SolverDriver {
public:
    SyntheticRegretSolver(double C, double alpha);

    std::uint64_t step(const NoisyProblem&, RandomStream&, std::uint64_t allowance) override;
    std::uint64_t advance_to(const NoisyProblem&, RandomStream&, std::uint64_t target,
                             std::uint64_t allowance) override;
    void inject(const SearchPoint&) override {}  // virtual trajectory, nothing to share

    double C() const { return C_; }
    double alpha() const { return alpha_; }

private:
    void advance(std::uint64_t k);

    double C_;
    double alpha_;
};

// Problem keys as used in config files: "sphere-d{d}-z{z}" and
// "synthetic-C{C}-a{alpha}" (the latter maps to the shared line problem).
NoisyProblem make_problem(const std::string& key);

}  // namespace np
