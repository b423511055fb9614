#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

namespace np {

/// Compact decimal formatting ("2", "0.5", "4.2") used in keys and CSV cells.
inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

/// Upper tail of the standard Gaussian, P(N > x).
inline double gaussian_upper_tail(double x) {
    return 0.5 * std::erfc(x / std::sqrt(2.0));
}

// Ceiling of n^e for integer n >= 1. pow() results within a relative 1e-9 of
// an integer are snapped to it first, so exact powers (e.g. (n^4)^(1/4))
// do not get bumped by the ceiling.
inline std::uint64_t ceil_pow(std::uint64_t n, double exponent) {
    const double y = std::pow(static_cast<double>(n), exponent);
    const double r = std::nearbyint(y);
    if (std::abs(y - r) <= 1e-9 * std::max(1.0, std::abs(r)))
        return static_cast<std::uint64_t>(r);
    return static_cast<std::uint64_t>(std::ceil(y));
}

/// Ceiling with the same integer-snapping rule, for real-valued arguments.
inline std::uint64_t ceil_snapped(double y) {
    const double r = std::nearbyint(y);
    if (std::abs(y - r) <= 1e-9 * std::max(1.0, std::abs(r)))
        return static_cast<std::uint64_t>(r);
    return static_cast<std::uint64_t>(std::ceil(y));
}

// Solves A x = b by Gaussian elimination with partial pivoting. Returns
// nullopt when the matrix is numerically singular or non-finite. Row-major
// A of size n*n; fine for the small systems used here (d <= ~20).
inline std::optional<std::vector<double>> solve_linear(std::vector<double> a,
                                                       std::vector<double> b) {
    const std::size_t n = b.size();
    for (double v : a)
        if (!std::isfinite(v)) return std::nullopt;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t row = col + 1; row < n; ++row)
            if (std::abs(a[row * n + col]) > std::abs(a[pivot * n + col])) pivot = row;
        if (std::abs(a[pivot * n + col]) < 1e-12) return std::nullopt;
        if (pivot != col) {
            for (std::size_t k = col; k < n; ++k) std::swap(a[pivot * n + k], a[col * n + k]);
            std::swap(b[pivot], b[col]);
        }
        for (std::size_t row = col + 1; row < n; ++row) {
            const double f = a[row * n + col] / a[col * n + col];
            if (f == 0.0) continue;
            for (std::size_t k = col; k < n; ++k) a[row * n + k] -= f * a[col * n + k];
            b[row] -= f * b[col];
        }
    }
    std::vector<double> x(n, 0.0);
    for (std::size_t i = n; i-- > 0;) {
        double acc = b[i];
        for (std::size_t k = i + 1; k < n; ++k) acc -= a[i * n + k] * x[k];
        x[i] = acc / a[i * n + i];
        if (!std::isfinite(x[i])) return std::nullopt;
    }
    return x;
}

}  // namespace np
