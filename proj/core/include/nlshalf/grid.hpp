#pragma once

#include "nlshalf/errors.hpp"

#include <complex>
#include <vector>

namespace nlshalf {

using Complex = std::complex<double>;

/// Uniform truncation of the half-line to [0, L] with N nodes, x_j = j*h.
struct SpatialGrid {
    double length = 0.0;
    int nodes = 0;

    double spacing() const { return length / static_cast<double>(nodes - 1); }
    double x(int j) const { return static_cast<double>(j) * spacing(); }

    void validate() const {
        if (!(length > 0.0))
            throw ConfigError("grid: L must be positive, got " + std::to_string(length));
        if (nodes < 16)
            throw ConfigError("grid: N must be at least 16, got " + std::to_string(nodes));
    }
};

/// Complex solution samples q_j ~ q(x_j, t). values[0] carries the Dirichlet
/// value of the active scenario, values[N-1] is pinned to zero.
struct StateVector {
    SpatialGrid grid;
    double t = 0.0;
    std::vector<Complex> values;

    int size() const { return static_cast<int>(values.size()); }
};

} // namespace nlshalf
