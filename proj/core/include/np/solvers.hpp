#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "np/solver.hpp"

namespace np {

// ---------------------------------------------------------------------------
// RSAES: self-adaptive (mu, lambda) evolution strategy with resamplings.
// Generation n evaluates each of lambda offspring ceil(K * n^zeta) times.

struct RsaesConfig {
    std::size_t lambda = 0;  // 0 means "use 10 d"
    std::size_t mu = 0;      // 0 means "use 5 d"
    double K = 10.0;
    double zeta = 2.0;

    RsaesConfig resolved(std::size_t dimension) const;
};

/// Parent index feeding offspring j (0-based): mod indexing over mu parents.
inline std::size_t rsaes_parent_index(std::size_t j, std::size_t mu) { return j % mu; }

class RsaesSolver final : public SolverDriver {
public:
    RsaesSolver(RsaesConfig config, std::size_t dimension, SearchPoint initial);

    std::uint64_t step(const NoisyProblem& problem, RandomStream& rng,
                       std::uint64_t allowance) override;
    void inject(const SearchPoint& x) override;

    std::uint64_t generation() const { return generation_; }
    const std::vector<SearchPoint>& parents() const { return parents_; }
    std::uint64_t resamples_per_offspring() const;  // for the upcoming generation

private:
    RsaesConfig cfg_;
    std::size_t dim_;
    std::vector<SearchPoint> parents_;
    std::vector<double> parent_sigma_;
    std::vector<double> parent_mean_;  // resampled means from the ranking that kept them
    std::uint64_t generation_ = 1;
};

// ---------------------------------------------------------------------------
// Fabian's stochastic gradient method. Gradients are estimated per axis by
// weighted central differences at offsets u_j * sigma_n with sigma_n = c/n^gamma,
// and the iterate moves by -(a/n) * g.

struct FabianConfig {
    double gamma = 0.1;  // in (0, 1/2)
    double a = 1.0;
    double c = 100.0;
};

// Samples per axis: the minimal even integer >= 1/(2 gamma) - 1 (at least 2).
std::size_t fabian_samples_per_axis(double gamma);

// Weights for the s/2 central-difference scales u_j = 1/j, chosen so that
// sum_j w_j u_j = 1 (the estimator is exact on quadratics) and the higher odd
// moments sum_j w_j u_j^(2k+1), k = 1..s/2-1, cancel.
std::vector<double> fabian_weights(const std::vector<double>& scales);

class FabianSolver final : public SolverDriver {
public:
    FabianSolver(FabianConfig config, std::size_t dimension, SearchPoint initial);

    std::uint64_t step(const NoisyProblem& problem, RandomStream& rng,
                       std::uint64_t allowance) override;
    void inject(const SearchPoint& x) override;

    std::uint64_t iteration() const { return iteration_; }
    const SearchPoint& iterate() const { return x_; }
    std::uint64_t evals_per_iteration() const { return dim_ * scales_.size() * 2; }

    // Exposed for tests: the weighted finite-difference gradient estimate at
    // the current iterate, consuming d * s_axis draws.
    std::vector<double> estimate_gradient(const NoisyProblem& problem, RandomStream& rng,
                                          double sigma);

private:
    FabianConfig cfg_;
    std::size_t dim_;
    std::vector<double> scales_;   // u_1 > ... > u_{s/2}
    std::vector<double> weights_;  // w_1 .. w_{s/2}
    SearchPoint x_;
    std::uint64_t iteration_ = 1;
};

// ---------------------------------------------------------------------------
// Newton's method adapted to noisy objectives: gradient and Hessian by finite
// differences with resamplings, trust-region style step clipping at sigma_n/2.

struct NewtonConfig {
    double A = 100.0;   // offset scale, sigma_n = A / n^alpha
    double alpha = 4.0;
    double B = 1.0;     // resamplings per point, ceil(B * n^beta)
    double beta = 2.0;
    // Offsets and trust radius are clamped to this scale; A/n^alpha passes
    // through unit scale within a few iterations either way, but unclamped
    // early probes are fatal under multiplicative noise.
    double sigma_cap = 1.0;
};

class NewtonSolver final : public SolverDriver {
public:
    NewtonSolver(NewtonConfig config, std::size_t dimension, SearchPoint initial);

    std::uint64_t step(const NoisyProblem& problem, RandomStream& rng,
                       std::uint64_t allowance) override;
    void inject(const SearchPoint& x) override;

    std::uint64_t iteration() const { return iteration_; }
    const SearchPoint& iterate() const { return x_; }
    double sigma(std::uint64_t n) const;
    std::uint64_t evals_for_iteration(std::uint64_t n) const;
    std::uint64_t gradient_fallbacks() const { return fallbacks_; }
    std::uint64_t completed_iterations() const { return completed_; }

private:
    NewtonConfig cfg_;
    std::size_t dim_;
    SearchPoint x_;
    std::uint64_t iteration_ = 1;
    std::uint64_t fallbacks_ = 0;
    std::uint64_t completed_ = 0;
};

// ---------------------------------------------------------------------------
// Named solver configurations, as written in experiment files:
//   "rsaes", "fabian1", "fabian2", "newton",
//   "fabian{gamma,a,c}", "newton{A,alpha,B,beta}", "synthetic-C{C}-a{alpha}".
struct SolverFactory {
    std::string name;
    std::function<std::unique_ptr<SolverDriver>(std::size_t dimension, SearchPoint initial)> make;
};

SolverFactory make_solver_factory(const std::string& key);

}  // namespace np
