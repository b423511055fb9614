#include "np/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "np/problems.hpp"
#include "np/util.hpp"

namespace np {
namespace {

// Burns `allowance` draws at a fixed point for a truncated iteration: the
// partial evaluations are counted against the budget, the results discarded.
std::uint64_t burn_draws(const NoisyProblem& problem, const SearchPoint& x, RandomStream& rng,
                         std::uint64_t allowance) {
    for (std::uint64_t k = 0; k < allowance; ++k) evaluate(problem, x, rng);
    return allowance;
}

SearchPoint axis_offset(const SearchPoint& x, std::size_t axis, double delta) {
    SearchPoint y = x;
    y[axis] += delta;
    return y;
}

}  // namespace

// ---------------------------------------------------------------------------
// RSAES

RsaesConfig RsaesConfig::resolved(std::size_t dimension) const {
    RsaesConfig r = *this;
    if (r.lambda == 0) r.lambda = 10 * dimension;
    if (r.mu == 0) r.mu = 5 * dimension;
    if (r.mu == 0 || r.lambda < r.mu)
        throw std::invalid_argument("rsaes requires lambda >= mu >= 1");
    if (r.K <= 0.0 || r.zeta < 0.0)
        throw std::invalid_argument("rsaes requires K > 0 and zeta >= 0");
    return r;
}

RsaesSolver::RsaesSolver(RsaesConfig config, std::size_t dimension, SearchPoint initial)
    : SolverDriver(initial), cfg_(config.resolved(dimension)), dim_(dimension) {
    check_point(initial, dimension);
    parents_.assign(cfg_.mu, initial);
    parent_sigma_.assign(cfg_.mu, 1.0);
    parent_mean_.assign(cfg_.mu, 0.0);
}

std::uint64_t RsaesSolver::resamples_per_offspring() const {
    return ceil_snapped(cfg_.K * std::pow(static_cast<double>(generation_), cfg_.zeta));
}

std::uint64_t RsaesSolver::step(const NoisyProblem& problem, RandomStream& rng,
                                std::uint64_t allowance) {
    if (allowance == 0) return 0;
    const std::uint64_t resamples = resamples_per_offspring();
    const std::uint64_t cost = cfg_.lambda * resamples;
    if (allowance < cost) {
        // truncated generation: parents and recommendation unchanged
        consume(burn_draws(problem, parents_[0], rng, allowance));
        return allowance;
    }

    std::vector<SearchPoint> offspring(cfg_.lambda);
    std::vector<double> sigma(cfg_.lambda);
    std::vector<double> mean(cfg_.lambda);
    for (std::size_t j = 0; j < cfg_.lambda; ++j) {
        const std::size_t p = rsaes_parent_index(j, cfg_.mu);
        sigma[j] = parent_sigma_[p] * std::exp(rng.gaussian() / (2.0 * static_cast<double>(dim_)));
        offspring[j] = parents_[p];
        for (std::size_t i = 0; i < dim_; ++i) offspring[j][i] += sigma[j] * rng.gaussian();
    }
    for (std::size_t j = 0; j < cfg_.lambda; ++j)
        mean[j] = resampled_mean(problem, offspring[j], resamples, rng);

    std::vector<std::size_t> order(cfg_.lambda);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return mean[a] < mean[b]; });

    for (std::size_t k = 0; k < cfg_.mu; ++k) {
        parents_[k] = offspring[order[k]];
        parent_sigma_[k] = sigma[order[k]];
        parent_mean_[k] = mean[order[k]];
    }
    consume(cost);
    record(offspring[order[0]]);
    ++generation_;
    return cost;
}

void RsaesSolver::inject(const SearchPoint& x) {
    check_point(x, dim_);
    // replace the worst-ranked parent (last among equals), step-size set to
    // the mean parent step-size
    std::size_t worst = 0;
    for (std::size_t k = 1; k < cfg_.mu; ++k)
        if (parent_mean_[k] >= parent_mean_[worst]) worst = k;
    const double sigma_bar =
        std::accumulate(parent_sigma_.begin(), parent_sigma_.end(), 0.0) /
        static_cast<double>(cfg_.mu);
    parents_[worst] = x;
    parent_sigma_[worst] = sigma_bar;
    parent_mean_[worst] = *std::min_element(parent_mean_.begin(), parent_mean_.end());
}

// ---------------------------------------------------------------------------
// Fabian

std::size_t fabian_samples_per_axis(double gamma) {
    if (!(gamma > 0.0 && gamma < 0.5))
        throw std::invalid_argument("fabian requires gamma in (0, 1/2)");
    const double bound = 1.0 / (2.0 * gamma) - 1.0;
    std::uint64_t s = bound <= 0.0 ? 0 : ceil_snapped(bound);
    if (s < 2) s = 2;
    if (s % 2 == 1) ++s;
    return static_cast<std::size_t>(s);
}

std::vector<double> fabian_weights(const std::vector<double>& scales) {
    const std::size_t p = scales.size();
    if (p == 0) throw std::invalid_argument("fabian_weights: empty scale list");
    // rows: sum_j w_j u_j^(2k+1) = 1 for k = 0, = 0 for k = 1..p-1
    std::vector<double> a(p * p);
    std::vector<double> b(p, 0.0);
    b[0] = 1.0;
    for (std::size_t k = 0; k < p; ++k)
        for (std::size_t j = 0; j < p; ++j)
            a[k * p + j] = std::pow(scales[j], static_cast<double>(2 * k + 1));
    auto w = solve_linear(std::move(a), std::move(b));
    if (!w) throw std::runtime_error("fabian_weights: singular moment system");
    return *w;
}

FabianSolver::FabianSolver(FabianConfig config, std::size_t dimension, SearchPoint initial)
    : SolverDriver(initial), cfg_(config), dim_(dimension), x_(std::move(initial)) {
    check_point(x_, dimension);
    if (cfg_.a <= 0.0 || cfg_.c <= 0.0)
        throw std::invalid_argument("fabian requires a > 0 and c > 0");
    const std::size_t s = fabian_samples_per_axis(cfg_.gamma);
    scales_.resize(s / 2);
    for (std::size_t j = 0; j < scales_.size(); ++j)
        scales_[j] = 1.0 / static_cast<double>(j + 1);
    weights_ = fabian_weights(scales_);
}

std::vector<double> FabianSolver::estimate_gradient(const NoisyProblem& problem,
                                                    RandomStream& rng, double sigma) {
    std::vector<double> g(dim_, 0.0);
    for (std::size_t i = 0; i < dim_; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < scales_.size(); ++j) {
            const double offset = scales_[j] * sigma;
            const double fp = evaluate(problem, axis_offset(x_, i, offset), rng);
            const double fm = evaluate(problem, axis_offset(x_, i, -offset), rng);
            acc += weights_[j] * (fp - fm);
        }
        g[i] = acc / (2.0 * sigma);
    }
    return g;
}

std::uint64_t FabianSolver::step(const NoisyProblem& problem, RandomStream& rng,
                                 std::uint64_t allowance) {
    if (allowance == 0) return 0;
    const std::uint64_t cost = evals_per_iteration();
    if (allowance < cost) {
        consume(burn_draws(problem, x_, rng, allowance));
        return allowance;
    }
    const double n = static_cast<double>(iteration_);
    const double sigma = cfg_.c / std::pow(n, cfg_.gamma);
    const std::vector<double> g = estimate_gradient(problem, rng, sigma);
    SearchPoint next = x_;
    for (std::size_t i = 0; i < dim_; ++i) next[i] -= (cfg_.a / n) * g[i];
    // Divergent runs (heavy multiplicative noise) are clamped to a huge but
    // finite envelope so their fitness values stay representable; the solver
    // keeps running and keeps looking exactly as bad as it is.
    constexpr double kEnvelope = 1e75;
    const double norm = next.norm();
    if (!next.finite()) {
        next = x_;
    } else if (norm > kEnvelope) {
        for (std::size_t i = 0; i < dim_; ++i) next[i] *= kEnvelope / norm;
    }
    x_ = std::move(next);
    consume(cost);
    record(x_);
    ++iteration_;
    return cost;
}

void FabianSolver::inject(const SearchPoint& x) {
    check_point(x, dim_);
    x_ = x;  // iteration counter unchanged
}

// ---------------------------------------------------------------------------
// Newton

NewtonSolver::NewtonSolver(NewtonConfig config, std::size_t dimension, SearchPoint initial)
    : SolverDriver(initial), cfg_(config), dim_(dimension), x_(std::move(initial)) {
    check_point(x_, dimension);
    if (cfg_.A <= 0.0 || cfg_.B <= 0.0 || cfg_.alpha <= 0.0 || cfg_.beta <= 0.0)
        throw std::invalid_argument("newton requires positive A, B, alpha, beta");
}

double NewtonSolver::sigma(std::uint64_t n) const {
    return std::min(cfg_.A / std::pow(static_cast<double>(n), cfg_.alpha), cfg_.sigma_cap);
}

std::uint64_t NewtonSolver::evals_for_iteration(std::uint64_t n) const {
    const double base = cfg_.B * std::pow(static_cast<double>(n), cfg_.beta);
    const std::uint64_t s1 = ceil_snapped(base);
    const std::uint64_t s2 = ceil_snapped(base / 10.0);
    return (4 * dim_ + 1) * s1 + 2 * dim_ * (dim_ - 1) * s2;
}

std::uint64_t NewtonSolver::step(const NoisyProblem& problem, RandomStream& rng,
                                 std::uint64_t allowance) {
    if (allowance == 0) return 0;
    const std::uint64_t cost = evals_for_iteration(iteration_);
    if (allowance < cost) {
        consume(burn_draws(problem, x_, rng, allowance));
        return allowance;
    }

    const double n = static_cast<double>(iteration_);
    const double sig = sigma(iteration_);
    const double base = cfg_.B * std::pow(n, cfg_.beta);
    const std::uint64_t s1 = ceil_snapped(base);
    const std::uint64_t s2 = ceil_snapped(base / 10.0);

    // gradient: central differences at x +- sig e_i
    std::vector<double> g(dim_);
    for (std::size_t i = 0; i < dim_; ++i) {
        const double fp = resampled_mean(problem, axis_offset(x_, i, sig), s1, rng);
        const double fm = resampled_mean(problem, axis_offset(x_, i, -sig), s1, rng);
        g[i] = (fp - fm) / (2.0 * sig);
    }

    // diagonal Hessian: second differences, center evaluated once and shared
    std::vector<double> h(dim_ * dim_, 0.0);
    std::vector<double> dp(dim_), dm(dim_);
    for (std::size_t i = 0; i < dim_; ++i) {
        dp[i] = resampled_mean(problem, axis_offset(x_, i, sig), s1, rng);
        dm[i] = resampled_mean(problem, axis_offset(x_, i, -sig), s1, rng);
    }
    const double f0 = resampled_mean(problem, x_, s1, rng);
    for (std::size_t i = 0; i < dim_; ++i)
        h[i * dim_ + i] = (dp[i] - 2.0 * f0 + dm[i]) / (sig * sig);

    // off-diagonal entries from the four-point stencil x +- sig e_i +- sig e_j
    for (std::size_t i = 0; i < dim_; ++i) {
        for (std::size_t j = i + 1; j < dim_; ++j) {
            double corner[2][2];
            for (int si = 0; si < 2; ++si) {
                for (int sj = 0; sj < 2; ++sj) {
                    SearchPoint y = x_;
                    y[i] += (si == 0 ? sig : -sig);
                    y[j] += (sj == 0 ? sig : -sig);
                    corner[si][sj] = resampled_mean(problem, y, s2, rng);
                }
            }
            const double hij =
                (corner[0][0] - corner[0][1] - corner[1][0] + corner[1][1]) / (4.0 * sig * sig);
            h[i * dim_ + j] = hij;
            h[j * dim_ + i] = hij;
        }
    }

    std::vector<double> rhs(dim_);
    for (std::size_t i = 0; i < dim_; ++i) rhs[i] = -g[i];
    auto delta = solve_linear(h, rhs);
    if (!delta) {
        // singular or non-finite Hessian estimate: plain gradient step
        ++fallbacks_;
        delta = rhs;
    }

    double norm = 0.0;
    for (double v : *delta) norm += v * v;
    norm = std::sqrt(norm);
    const double radius = sig / 2.0;
    if (norm > radius) {
        const double f = radius / norm;
        for (double& v : *delta) v *= f;
    }
    for (std::size_t i = 0; i < dim_; ++i) x_[i] += (*delta)[i];
    check_point(x_, dim_);

    consume(cost);
    record(x_);
    ++iteration_;
    ++completed_;
    return cost;
}

void NewtonSolver::inject(const SearchPoint& x) {
    check_point(x, dim_);
    x_ = x;  // iteration counter unchanged
}

// ---------------------------------------------------------------------------
// Named configurations

namespace {

std::vector<double> parse_brace_args(const std::string& key, const std::string& prefix) {
    const std::string inner = key.substr(prefix.size() + 1, key.size() - prefix.size() - 2);
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos <= inner.size()) {
        const std::size_t comma = inner.find(',', pos);
        const std::string tok = inner.substr(pos, comma == std::string::npos ? std::string::npos
                                                                             : comma - pos);
        std::size_t used = 0;
        out.push_back(std::stod(tok, &used));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

bool has_brace_form(const std::string& key, const std::string& prefix) {
    return key.size() > prefix.size() + 1 && key.compare(0, prefix.size(), prefix) == 0 &&
           key[prefix.size()] == '{' && key.back() == '}';
}

}  // namespace

SolverFactory make_solver_factory(const std::string& key) {
    SolverFactory f;
    f.name = key;
    if (key == "rsaes") {
        f.make = [](std::size_t d, SearchPoint init) {
            return std::make_unique<RsaesSolver>(RsaesConfig{}, d, std::move(init));
        };
    } else if (key == "fabian1") {
        f.make = [](std::size_t d, SearchPoint init) {
            return std::make_unique<FabianSolver>(FabianConfig{0.1, 1.0, 100.0}, d, std::move(init));
        };
    } else if (key == "fabian2") {
        f.make = [](std::size_t d, SearchPoint init) {
            return std::make_unique<FabianSolver>(FabianConfig{0.49, 1.0, 2.0}, d, std::move(init));
        };
    } else if (has_brace_form(key, "fabian")) {
        const auto args = parse_brace_args(key, "fabian");
        if (args.size() != 3) throw std::invalid_argument("expected fabian{gamma,a,c}: " + key);
        const FabianConfig cfg{args[0], args[1], args[2]};
        f.make = [cfg](std::size_t d, SearchPoint init) {
            return std::make_unique<FabianSolver>(cfg, d, std::move(init));
        };
    } else if (key == "newton") {
        f.make = [](std::size_t d, SearchPoint init) {
            return std::make_unique<NewtonSolver>(NewtonConfig{}, d, std::move(init));
        };
    } else if (has_brace_form(key, "newton")) {
        const auto args = parse_brace_args(key, "newton");
        if (args.size() != 4 && args.size() != 5)
            throw std::invalid_argument("expected newton{A,alpha,B,beta[,sigma_cap]}: " + key);
        NewtonConfig cfg{args[0], args[1], args[2], args[3]};
        if (args.size() == 5) cfg.sigma_cap = args[4];
        f.make = [cfg](std::size_t d, SearchPoint init) {
            return std::make_unique<NewtonSolver>(cfg, d, std::move(init));
        };
    } else if (key.rfind("synthetic-C", 0) == 0) {
        const std::size_t apos = key.find("-a", 11);
        if (apos == std::string::npos)
            throw std::invalid_argument("expected synthetic-C{C}-a{alpha}: " + key);
        const double C = std::stod(key.substr(11, apos - 11));
        const double alpha = std::stod(key.substr(apos + 2));
        f.make = [C, alpha](std::size_t d, SearchPoint) {
            if (d != 1)
                throw std::invalid_argument("synthetic solvers pair with the 1-d line problem");
            return std::make_unique<SyntheticRegretSolver>(C, alpha);
        };
    } else {
        throw std::invalid_argument("unknown solver key: " + key);
    }
    return f;
}

}  // namespace np
