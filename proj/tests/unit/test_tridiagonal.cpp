#include "nlshalf/tridiagonal.hpp"

#include <doctest.h>

#include <complex>
#include <random>
#include <vector>

using nlshalf::TridiagonalFactorization;
using C = std::complex<double>;

namespace {

// dense Gaussian elimination with partial pivoting; the oracle
std::vector<C> dense_solve(std::vector<std::vector<C>> a, std::vector<C> b) {
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        std::swap(a[col], a[piv]);
        std::swap(b[col], b[piv]);
        for (std::size_t r = col + 1; r < n; ++r) {
            const C m = a[r][col] / a[col][col];
            for (std::size_t c = col; c < n; ++c) a[r][c] -= m * a[col][c];
            b[r] -= m * b[col];
        }
    }
    std::vector<C> x(n);
    for (std::size_t r = n; r-- > 0;) {
        C s = b[r];
        for (std::size_t c = r + 1; c < n; ++c) s -= a[r][c] * x[c];
        x[r] = s / a[r][r];
    }
    return x;
}

} // namespace

TEST_CASE("tridiagonal solve matches a dense oracle on random dominant systems") {
    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 3 + static_cast<std::size_t>(trial);
        std::vector<C> sub(n), diag(n), super(n), rhs(n);
        for (std::size_t i = 0; i < n; ++i) {
            sub[i] = C{dist(rng), dist(rng)};
            super[i] = C{dist(rng), dist(rng)};
            diag[i] = C{dist(rng), dist(rng)} + C{4.0, 4.0}; // dominance
            rhs[i] = C{dist(rng), dist(rng)};
        }
        sub[0] = super[n - 1] = C{0.0, 0.0};

        std::vector<std::vector<C>> dense(n, std::vector<C>(n, C{0.0, 0.0}));
        for (std::size_t i = 0; i < n; ++i) {
            dense[i][i] = diag[i];
            if (i) dense[i][i - 1] = sub[i];
            if (i + 1 < n) dense[i][i + 1] = super[i];
        }
        const auto expected = dense_solve(dense, rhs);

        TridiagonalFactorization lu(sub, diag, super);
        std::vector<C> x = rhs;
        lu.solve(x);
        for (std::size_t i = 0; i < n; ++i)
            CHECK(std::abs(x[i] - expected[i]) < 1e-12);
    }
}

TEST_CASE("tridiagonal factorization is reusable across right-hand sides") {
    const std::size_t n = 64;
    std::vector<C> sub(n, C{0.25, 0.0}), diag(n, C{0.0, 1.0} + C{-0.5, 0.0}),
        super(n, C{0.25, 0.0});
    sub[0] = super[n - 1] = C{0.0, 0.0};
    diag[0] = diag[n - 1] = C{1.0, 0.0};
    TridiagonalFactorization lu(sub, diag, super);

    std::mt19937 rng(7);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (int rep = 0; rep < 5; ++rep) {
        std::vector<C> rhs(n), x;
        for (auto& v : rhs) v = C{dist(rng), dist(rng)};
        x = rhs;
        lu.solve(x);
        // residual check A x = rhs
        for (std::size_t i = 0; i < n; ++i) {
            C ax = diag[i] * x[i];
            if (i) ax += sub[i] * x[i - 1];
            if (i + 1 < n) ax += super[i] * x[i + 1];
            CHECK(std::abs(ax - rhs[i]) < 1e-13);
        }
    }
}
