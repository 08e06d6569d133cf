#pragma once

#include "nlshalf/errors.hpp"

#include <cmath>
#include <complex>
#include <span>
#include <vector>

namespace nlshalf {

/// LU factorization of a complex tridiagonal matrix (Thomas algorithm,
/// no pivoting). The time-stepping matrix is constant per step size, so the
/// elimination coefficients are computed once and each sweep is a cheap
/// forward/back substitution.
///
/// Requires a matrix for which elimination without pivoting is stable; the
/// scheme matrix i*I + (dt/2)*D2 is strictly diagonally dominant.
class TridiagonalFactorization {
public:
    TridiagonalFactorization() = default;

    TridiagonalFactorization(std::span<const std::complex<double>> sub,
                             std::span<const std::complex<double>> diag,
                             std::span<const std::complex<double>> super) {
        factor(sub, diag, super);
    }

    /// sub[0] and super[n-1] are unused.
    void factor(std::span<const std::complex<double>> sub,
                std::span<const std::complex<double>> diag,
                std::span<const std::complex<double>> super) {
        const std::size_t n = diag.size();
        if (n < 2 || sub.size() != n || super.size() != n)
            throw ConfigError("tridiagonal: inconsistent band sizes");
        lower_.assign(n, {});
        inv_pivot_.assign(n, {});
        super_.assign(super.begin(), super.end());

        std::complex<double> pivot = diag[0];
        if (pivot == std::complex<double>{})
            throw NumericError("tridiagonal: zero pivot at row 0");
        inv_pivot_[0] = 1.0 / pivot;
        for (std::size_t i = 1; i < n; ++i) {
            lower_[i] = sub[i] * inv_pivot_[i - 1];
            pivot = diag[i] - lower_[i] * super_[i - 1];
            if (pivot == std::complex<double>{})
                throw NumericError("tridiagonal: zero pivot at row " + std::to_string(i));
            inv_pivot_[i] = 1.0 / pivot;
        }
    }

    std::size_t size() const { return inv_pivot_.size(); }

    /// Solves A x = rhs in place.
    void solve(std::span<std::complex<double>> rhs) const {
        const std::size_t n = inv_pivot_.size();
        for (std::size_t i = 1; i < n; ++i)
            rhs[i] -= lower_[i] * rhs[i - 1];
        rhs[n - 1] *= inv_pivot_[n - 1];
        for (std::size_t i = n - 1; i-- > 0;)
            rhs[i] = (rhs[i] - super_[i] * rhs[i + 1]) * inv_pivot_[i];
    }

private:
    std::vector<std::complex<double>> lower_;
    std::vector<std::complex<double>> inv_pivot_;
    std::vector<std::complex<double>> super_;
};

} // namespace nlshalf
