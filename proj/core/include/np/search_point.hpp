#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace np {

/// A point of the search domain R^d. All entries must stay finite.
struct SearchPoint {
    std::vector<double> coords;

    SearchPoint() = default;
    explicit SearchPoint(std::vector<double> c) : coords(std::move(c)) {}
    SearchPoint(std::initializer_list<double> c) : coords(c) {}

    std::size_t dimension() const { return coords.size(); }
    double& operator[](std::size_t i) { return coords[i]; }
    double operator[](std::size_t i) const { return coords[i]; }

    bool finite() const {
        for (double v : coords)
            if (!std::isfinite(v)) return false;
        return true;
    }

    double squared_norm() const {
        double s = 0.0;
        for (double v : coords) s += v * v;
        return s;
    }

    double norm() const { return std::sqrt(squared_norm()); }

    bool operator==(const SearchPoint& other) const { return coords == other.coords; }
};

inline void check_point(const SearchPoint& x, std::size_t dimension) {
    if (x.dimension() != dimension)
        throw std::invalid_argument("search point dimension mismatch");
    if (!x.finite())
        throw std::invalid_argument("search point has non-finite entries");
}

}  // namespace np
