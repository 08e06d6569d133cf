#include "nlshalf/functionals.hpp"

#include "nlshalf/errors.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace nlshalf;
using testsup::make_grid;
using testsup::state_from;

TEST_CASE("spatial norms on the zero state vanish") {
    auto s = state_from(make_grid(20.0, 64), 0.0, [](double) { return Complex{0.0, 0.0}; });
    const auto n = spatial_norms(s);
    CHECK(n.mass == 0.0);
    CHECK(n.grad_sq == 0.0);
    CHECK(n.quartic == 0.0);
    CHECK(n.sup == 0.0);
}

TEST_CASE("spatial norms reproduce the e^{-x} closed forms at O(h^2)") {
    // int e^{-2x} = 1/2, int e^{-2x} (derivative squared) = 1/2, int e^{-4x} = 1/4
    double prev_err = 0.0;
    for (int level = 0; level < 2; ++level) {
        const int n = level == 0 ? 2001 : 4001;
        auto s = state_from(make_grid(40.0, n), 0.0,
                            [](double x) { return Complex{std::exp(-x), 0.0}; });
        const auto norms = spatial_norms(s);
        CHECK(norms.mass == doctest::Approx(0.5).epsilon(3e-4));
        CHECK(norms.grad_sq == doctest::Approx(0.5).epsilon(3e-4));
        CHECK(norms.quartic == doctest::Approx(0.25).epsilon(6e-4));
        CHECK(norms.sup == doctest::Approx(1.0).epsilon(1e-14));
        const double err = std::abs(norms.mass - 0.5);
        if (level == 1 && prev_err > 1e-12) CHECK(err / prev_err < 0.3); // ~4x per halving
        prev_err = err;
    }
}

TEST_CASE("spatial norms scale homogeneously") {
    const auto grid = make_grid(25.0, 512);
    auto s = state_from(grid, 0.0, [](double x) {
        return Complex{std::exp(-0.3 * x) * std::cos(x), std::sin(0.5 * x) * std::exp(-x)};
    });
    const Complex c{1.3, -0.7};
    auto sc = s;
    for (auto& v : sc.values) v *= c;
    const auto n0 = spatial_norms(s);
    const auto n1 = spatial_norms(sc);
    const double m = std::abs(c);
    CHECK(n1.mass == doctest::Approx(m * m * n0.mass).epsilon(1e-13));
    CHECK(n1.grad_sq == doctest::Approx(m * m * n0.grad_sq).epsilon(1e-13));
    CHECK(n1.quartic == doctest::Approx(m * m * m * m * n0.quartic).epsilon(1e-13));
    CHECK(n1.sup == doctest::Approx(m * n0.sup).epsilon(1e-13));
}

TEST_CASE("quartic <= sup^2 * mass on random states") {
    for (unsigned seed = 0; seed < 25; ++seed) {
        const auto s = testsup::random_state(make_grid(10.0, 200), 0.3, seed);
        const auto n = spatial_norms(s);
        CHECK(n.quartic <= n.sup * n.sup * n.mass * (1.0 + 1e-13));
    }
}

TEST_CASE("virial moment y reproduces int x e^{-2x} = 1/4 for e^{ix} e^{-x}") {
    auto s = state_from(make_grid(40.0, 4001), 0.0, [](double x) {
        return std::exp(Complex{0.0, 1.0} * x) * std::exp(-x);
    });
    const auto m = moment_diagnostics(s);
    CHECK(m.y == doctest::Approx(0.25).epsilon(1e-5));
}

TEST_CASE("y vanishes identically on real-valued states") {
    auto s = state_from(make_grid(15.0, 300), 1.0,
                        [](double x) { return Complex{std::exp(-x) * (1.0 + x), 0.0}; });
    CHECK(moment_diagnostics(s).y == 0.0);
}

TEST_CASE("shifted combination expands algebraically at rounding level") {
    // |xq + 2itq_x|^2 = x^2|q|^2 + 4t^2|q_x|^2 - 4t x Im(conj(q) q_x), shared
    // quadrature makes the expansion exact up to rounding on any state
    for (unsigned seed = 0; seed < 10; ++seed) {
        auto s = testsup::random_state(make_grid(12.0, 257), 0.8 + 0.1 * seed, seed);
        const auto m = moment_diagnostics(s);
        const auto n = spatial_norms(s);
        const double t = s.t;
        const double lhs = 4.0 * t * m.y;
        const double rhs = m.second_moment + 4.0 * t * t * n.grad_sq - m.shifted_combo;
        const double scale = std::max({std::abs(lhs), m.second_moment,
                                       4.0 * t * t * n.grad_sq, m.shifted_combo});
        CHECK(std::abs(lhs - rhs) <= 1e-12 * scale);
    }
}

TEST_CASE("neumann trace stencil") {
    const auto grid = make_grid(10.0, 101);

    auto linear = state_from(grid, 0.0, [](double x) { return Complex{x, 0.0}; });
    CHECK(neumann_trace(linear).slope.real() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(neumann_trace(linear).slope.imag() == 0.0);

    auto constant = state_from(grid, 0.0, [](double) { return Complex{2.0, -1.0}; });
    CHECK(std::abs(neumann_trace(constant).slope) == 0.0);

    // quadratics are differentiated exactly by the 3-point one-sided stencil
    auto quad = state_from(grid, 0.0, [](double x) { return Complex{3.0 * x * x - x, 0.0}; });
    CHECK(neumann_trace(quad).slope.real() == doctest::Approx(-1.0).epsilon(1e-12));

    // sin(x): slope 1 at order 2; halving h cuts the error ~4x
    double errs[2];
    int idx = 0;
    for (int n : {101, 201}) {
        auto s = state_from(make_grid(10.0, n), 0.0,
                            [](double x) { return Complex{std::sin(x), 0.0}; });
        errs[idx++] = std::abs(neumann_trace(s).slope.real() - 1.0);
    }
    CHECK(errs[0] < 1e-2);
    CHECK(errs[1] / errs[0] < 0.35);
    CHECK(errs[1] / errs[0] > 0.15);
}

TEST_CASE("time_integral basics") {
    std::vector<double> t, one, lin;
    for (int k = 0; k <= 200; ++k) {
        t.push_back(k * 0.01);
        one.push_back(1.0);
        lin.push_back(t.back());
    }
    CHECK(time_integral(t, one, 0.0, 0.0, 2.0) == doctest::Approx(2.0).epsilon(1e-14));
    // f = t with weight t: int_0^1 t^2 = 1/3; trapezoid error then Richardson
    const double i1 = time_integral(t, lin, 1.0, 0.0, 1.0);
    CHECK(i1 == doctest::Approx(1.0 / 3.0).epsilon(1e-3));
    std::vector<double> t2, lin2;
    for (int k = 0; k <= 400; ++k) {
        t2.push_back(k * 0.005);
        lin2.push_back(t2.back());
    }
    const double i2 = time_integral(t2, lin2, 1.0, 0.0, 1.0);
    const double richardson = (4.0 * i2 - i1) / 3.0;
    CHECK(richardson == doctest::Approx(1.0 / 3.0).epsilon(1e-9));

    CHECK_THROWS_AS(time_integral(t, one, 0.0, -1.0, 1.0), ConfigError);
    CHECK_THROWS_AS(time_integral(t, one, 0.0, 0.0, 3.0), ConfigError);
}

TEST_CASE("weighted time integral matches a fine-quadrature oracle") {
    // f(t) = (1+t)^{-4} with weight t^{1.1} over (0,100)
    std::vector<double> t, f;
    for (int k = 0; k <= 100000; ++k) {
        t.push_back(k * 0.001);
        f.push_back(std::pow(1.0 + t.back(), -4.0));
    }
    const double got = time_integral(t, f, 1.1, 0.0, 100.0);
    const double oracle = testsup::simpson(
        [](double s) { return std::pow(s, 1.1) * std::pow(1.0 + s, -4.0); }, 0.0, 100.0,
        400000);
    CHECK(got == doctest::Approx(oracle).epsilon(1e-6));
}

TEST_CASE("quadrature linearity and positivity") {
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    std::vector<double> t, f, g;
    for (int k = 0; k <= 100; ++k) {
        t.push_back(k * 0.1);
        f.push_back(dist(rng));
        g.push_back(dist(rng));
    }
    std::vector<double> combo(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) combo[i] = 2.0 * f[i] - 0.5 * g[i];
    const double lhs = time_integral(t, combo, 0.7, 0.0, 10.0);
    const double rhs = 2.0 * time_integral(t, f, 0.7, 0.0, 10.0) -
                       0.5 * time_integral(t, g, 0.7, 0.0, 10.0);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    CHECK(time_integral(t, f, 0.7, 0.0, 10.0) >= 0.0);

    const auto running = running_weighted_integral(t, f, 0.7);
    CHECK(running.front() == 0.0);
    for (std::size_t i = 1; i < running.size(); ++i) CHECK(running[i] >= running[i - 1]);
    CHECK(running.back() == doctest::Approx(time_integral(t, f, 0.7, 0.0, 10.0)).epsilon(1e-12));
}

TEST_CASE("series derivative hits quadratics exactly and converges at order 2") {
    std::vector<double> t, quad;
    for (int k = 0; k <= 50; ++k) {
        t.push_back(k * 0.1);
        quad.push_back(3.0 * t.back() * t.back() - t.back() + 2.0);
    }
    const auto d = series_derivative(t, std::span<const double>(quad));
    for (std::size_t k = 0; k < t.size(); ++k)
        CHECK(d[k] == doctest::Approx(6.0 * t[k] - 1.0).epsilon(1e-10));

    double errs[2];
    int idx = 0;
    for (double dt : {0.1, 0.05}) {
        std::vector<double> tt, ff;
        for (int k = 0; k <= static_cast<int>(5.0 / dt); ++k) {
            tt.push_back(k * dt);
            ff.push_back(std::sin(tt.back()));
        }
        const auto dd = series_derivative(tt, std::span<const double>(ff));
        double err = 0.0;
        for (std::size_t k = 0; k < tt.size(); ++k)
            err = std::max(err, std::abs(dd[k] - std::cos(tt[k])));
        errs[idx++] = err;
    }
    CHECK(errs[1] / errs[0] < 0.35);
}
