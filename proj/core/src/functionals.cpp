#include "nlshalf/functionals.hpp"

#include "nlshalf/errors.hpp"

#include <algorithm>
#include <cmath>

namespace nlshalf {

namespace {

// trapezoid weight (times h) for node j on an N-node grid
inline double trap_w(int j, int n) { return (j == 0 || j == n - 1) ? 0.5 : 1.0; }

} // namespace

std::vector<Complex> derivative_values(const StateVector& state) {
    const int n = state.size();
    if (n < 4) throw ConfigError("derivative_values: need at least 4 nodes");
    const double h = state.grid.spacing();
    const auto& q = state.values;
    std::vector<Complex> d(n);
    d[0] = (-3.0 * q[0] + 4.0 * q[1] - q[2]) / (2.0 * h);
    for (int j = 1; j < n - 1; ++j) d[j] = (q[j + 1] - q[j - 1]) / (2.0 * h);
    d[n - 1] = (3.0 * q[n - 1] - 4.0 * q[n - 2] + q[n - 3]) / (2.0 * h);
    return d;
}

SpatialNorms spatial_norms(const StateVector& state) {
    const int n = state.size();
    const double h = state.grid.spacing();
    const auto& q = state.values;
    const auto d = derivative_values(state);
    SpatialNorms out;
    for (int j = 0; j < n; ++j) {
        const double w = trap_w(j, n);
        const double a2 = std::norm(q[j]);
        out.mass += w * a2;
        out.quartic += w * a2 * a2;
        out.grad_sq += w * std::norm(d[j]);
        out.sup = std::max(out.sup, std::abs(q[j]));
    }
    out.mass *= h;
    out.quartic *= h;
    out.grad_sq *= h;
    return out;
}

MomentDiagnostics moment_diagnostics(const StateVector& state) {
    const int n = state.size();
    const double h = state.grid.spacing();
    const double t = state.t;
    const auto& q = state.values;
    const auto d = derivative_values(state);
    MomentDiagnostics out;
    Complex cross{0.0, 0.0};
    for (int j = 0; j < n; ++j) {
        const double w = trap_w(j, n);
        const double x = state.grid.x(j);
        out.y += w * x * std::imag(std::conj(q[j]) * d[j]);
        out.second_moment += w * x * x * std::norm(q[j]);
        cross += w * q[j] * std::conj(d[j]);
        out.shifted_combo += w * std::norm(x * q[j] + 2.0 * Complex{0.0, t} * d[j]);
    }
    out.y *= h;
    out.second_moment *= h;
    out.cross = cross * h;
    out.shifted_combo *= h;
    return out;
}

BoundaryTraces neumann_trace(const StateVector& state) {
    const int n = state.size();
    if (n < 4) throw ConfigError("neumann_trace: need at least 4 nodes");
    const double h = state.grid.spacing();
    const auto& q = state.values;
    BoundaryTraces out;
    out.value = q[0];
    out.slope = (-3.0 * q[0] + 4.0 * q[1] - q[2]) / (2.0 * h);
    return out;
}

// ---------------------------------------------------------------------------
// Time quadrature
// ---------------------------------------------------------------------------

namespace {

template <typename T>
T weighted_trapezoid(std::span<const double> times, std::span<const T> values, double p,
                     double a, double b) {
    if (times.size() != values.size())
        throw ConfigError("time_integral: series length mismatch");
    if (times.size() < 2) throw ConfigError("time_integral: need at least 2 samples");
    const double t0 = times.front();
    const double t1 = times.back();
    const double slack = 1e-9 * std::max(1.0, std::abs(t1));
    if (a < t0 - slack || b > t1 + slack)
        throw ConfigError("time_integral: interval outside sampled range");
    if (b <= a) return T{};

    a = std::max(a, t0);
    b = std::min(b, t1);

    auto weight = [p](double t) { return p == 0.0 ? 1.0 : std::pow(t, p); };
    auto interp = [&](double t, std::size_t k) {
        // linear interpolation of f inside [t_k, t_{k+1}]
        const double lam = (t - times[k]) / (times[k + 1] - times[k]);
        return values[k] + lam * (values[k + 1] - values[k]);
    };

    // locate the first sample > a and the last sample < b
    std::size_t lo = 0;
    while (lo < times.size() && times[lo] <= a + 0.0) ++lo;
    std::size_t hi = times.size();
    while (hi > 0 && times[hi - 1] >= b) --hi;

    T acc{};
    double prev_t = a;
    T prev_v = lo > 0 && times[lo - 1] == a ? values[lo - 1] : interp(a, lo == 0 ? 0 : lo - 1);
    double prev_w = weight(a);
    for (std::size_t k = lo; k < hi; ++k) {
        const double wt = weight(times[k]);
        acc += (times[k] - prev_t) * 0.5 * (prev_v * prev_w + values[k] * wt);
        prev_t = times[k];
        prev_v = values[k];
        prev_w = wt;
    }
    const T vb = hi < times.size() && times[hi] == b ? values[hi]
                                                     : interp(b, hi == 0 ? 0 : hi - 1);
    acc += (b - prev_t) * 0.5 * (prev_v * prev_w + vb * weight(b));
    return acc;
}

} // namespace

double time_integral(std::span<const double> times, std::span<const double> values, double p,
                     double a, double b) {
    return weighted_trapezoid<double>(times, values, p, a, b);
}

Complex time_integral(std::span<const double> times, std::span<const Complex> values, double p,
                      double a, double b) {
    return weighted_trapezoid<Complex>(times, values, p, a, b);
}

std::vector<double> running_weighted_integral(std::span<const double> times,
                                              std::span<const double> values, double p) {
    if (times.size() != values.size())
        throw ConfigError("running_weighted_integral: series length mismatch");
    std::vector<double> out(times.size(), 0.0);
    if (times.empty()) return out;
    auto weight = [p](double t) { return p == 0.0 ? 1.0 : std::pow(t, p); };
    double acc = 0.0;
    double prev = values[0] * weight(times[0]);
    for (std::size_t k = 1; k < times.size(); ++k) {
        const double cur = values[k] * weight(times[k]);
        acc += (times[k] - times[k - 1]) * 0.5 * (prev + cur);
        out[k] = acc;
        prev = cur;
    }
    return out;
}

namespace {

template <typename T>
std::vector<T> derivative_impl(std::span<const double> times, std::span<const T> values) {
    const std::size_t n = times.size();
    if (values.size() != n) throw ConfigError("series_derivative: length mismatch");
    if (n < 3) throw ConfigError("series_derivative: need at least 3 samples");
    std::vector<T> out(n);
    const double dt = times[1] - times[0];
    out[0] = (-3.0 * values[0] + 4.0 * values[1] - values[2]) / (2.0 * dt);
    for (std::size_t k = 1; k + 1 < n; ++k)
        out[k] = (values[k + 1] - values[k - 1]) / (times[k + 1] - times[k - 1]);
    out[n - 1] = (3.0 * values[n - 1] - 4.0 * values[n - 2] + values[n - 3]) / (2.0 * dt);
    return out;
}

} // namespace

std::vector<double> series_derivative(std::span<const double> times,
                                      std::span<const double> values) {
    return derivative_impl<double>(times, values);
}

std::vector<Complex> series_derivative(std::span<const double> times,
                                       std::span<const Complex> values) {
    return derivative_impl<Complex>(times, values);
}

// ---------------------------------------------------------------------------
// Column extractors
// ---------------------------------------------------------------------------

std::vector<double> DiagnosticsSeries::mass() const {
    std::vector<double> v(size());
    for (std::size_t k = 0; k < size(); ++k) v[k] = norms[k].mass;
    return v;
}
std::vector<double> DiagnosticsSeries::grad_sq() const {
    std::vector<double> v(size());
    for (std::size_t k = 0; k < size(); ++k) v[k] = norms[k].grad_sq;
    return v;
}
std::vector<double> DiagnosticsSeries::quartic() const {
    std::vector<double> v(size());
    for (std::size_t k = 0; k < size(); ++k) v[k] = norms[k].quartic;
    return v;
}
std::vector<double> DiagnosticsSeries::sup() const {
    std::vector<double> v(size());
    for (std::size_t k = 0; k < size(); ++k) v[k] = norms[k].sup;
    return v;
}
std::vector<double> DiagnosticsSeries::y() const {
    std::vector<double> v(size());
    for (std::size_t k = 0; k < size(); ++k) v[k] = moments[k].y;
    return v;
}
std::vector<double> DiagnosticsSeries::second_moment() const {
    std::vector<double> v(size());
    for (std::size_t k = 0; k < size(); ++k) v[k] = moments[k].second_moment;
    return v;
}
std::vector<double> DiagnosticsSeries::shifted_combo() const {
    std::vector<double> v(size());
    for (std::size_t k = 0; k < size(); ++k) v[k] = moments[k].shifted_combo;
    return v;
}
std::vector<double> DiagnosticsSeries::p_abs() const {
    std::vector<double> v(size());
    for (std::size_t k = 0; k < size(); ++k) v[k] = std::abs(traces[k].slope);
    return v;
}
std::vector<double> DiagnosticsSeries::p_abs_sq() const {
    std::vector<double> v(size());
    for (std::size_t k = 0; k < size(); ++k) v[k] = std::norm(traces[k].slope);
    return v;
}
std::vector<double> DiagnosticsSeries::re_p_qbar() const {
    std::vector<double> v(size());
    for (std::size_t k = 0; k < size(); ++k)
        v[k] = std::real(traces[k].slope * std::conj(traces[k].value));
    return v;
}
std::vector<double> DiagnosticsSeries::re_p_qtbar() const {
    std::vector<double> v(size());
    for (std::size_t k = 0; k < size(); ++k)
        v[k] = std::real(traces[k].slope * std::conj(traces[k].value_dt));
    return v;
}
std::vector<double> DiagnosticsSeries::im_p_qbar() const {
    std::vector<double> v(size());
    for (std::size_t k = 0; k < size(); ++k)
        v[k] = std::imag(traces[k].slope * std::conj(traces[k].value));
    return v;
}
std::vector<Complex> DiagnosticsSeries::cross() const {
    std::vector<Complex> v(size());
    for (std::size_t k = 0; k < size(); ++k) v[k] = moments[k].cross;
    return v;
}

} // namespace nlshalf
