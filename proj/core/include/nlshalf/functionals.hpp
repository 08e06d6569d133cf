#pragma once

#include "nlshalf/grid.hpp"

#include <span>
#include <vector>

namespace nlshalf {

// ---------------------------------------------------------------------------
// Per-sample observables
// ---------------------------------------------------------------------------

struct SpatialNorms {
    double mass = 0.0;    // ||q||^2
    double grad_sq = 0.0; // ||q_x||^2
    double quartic = 0.0; // ||q||_4^4
    double sup = 0.0;     // max_j |q_j|
};

struct MomentDiagnostics {
    double y = 0.0;             // Im int x conj(q) q_x dx
    double second_moment = 0.0; // int x^2 |q|^2 dx
    Complex cross{0.0, 0.0};    // (q, q_x) = int q conj(q_x) dx
    double shifted_combo = 0.0; // int |x q + 2 i t q_x|^2 dx
};

struct BoundaryTraces {
    Complex value{0.0, 0.0};    // Q = q(0,t)
    Complex value_dt{0.0, 0.0}; // Q_t, from the scenario closed form
    Complex slope{0.0, 0.0};    // P ~ q_x(0,t), one-sided stencil
};

/// Source-term moments entering the forced counterparts of the flux and
/// virial identities; identically zero on unforced runs.
struct ForcingMoments {
    double mass = 0.0;      //  2 Im int conj(q) f dx
    double energy = 0.0;    // -2 Re int f conj(q_t) dx
    double neumann = 0.0;   // -2 Re int f conj(q_x) dx
    double virial_y = 0.0;  //  2 Re int x conj(f) q_x dx + Re int conj(q) f dx
    double virial_m2 = 0.0; //  2 Im int x^2 conj(q) f dx
};

/// Uniformly sampled scalar functionals of a run.
struct DiagnosticsSeries {
    std::vector<double> t;
    std::vector<SpatialNorms> norms;
    std::vector<MomentDiagnostics> moments;
    std::vector<BoundaryTraces> traces;
    std::vector<ForcingMoments> forcing; // empty when the run is unforced

    std::size_t size() const { return t.size(); }
    bool forced() const { return !forcing.empty(); }

    // Column extractors (copies; series are small).
    std::vector<double> mass() const;
    std::vector<double> grad_sq() const;
    std::vector<double> quartic() const;
    std::vector<double> sup() const;
    std::vector<double> y() const;
    std::vector<double> second_moment() const;
    std::vector<double> shifted_combo() const;
    std::vector<double> p_abs() const;       // |P|
    std::vector<double> p_abs_sq() const;    // |P|^2
    std::vector<double> re_p_qbar() const;   // Re{P conj(Q)}
    std::vector<double> re_p_qtbar() const;  // Re{P conj(Q_t)}
    std::vector<double> im_p_qbar() const;   // Im{P conj(Q)}
    std::vector<Complex> cross() const;      // (q, q_x)
};

// ---------------------------------------------------------------------------
// Spatial operations
// ---------------------------------------------------------------------------

/// Derivative samples shared by every functional: centered differences at
/// interior nodes, second-order one-sided stencils at both ends. Using one
/// stencil everywhere is what makes the algebraic virial identity exact in
/// floating point.
std::vector<Complex> derivative_values(const StateVector& state);

SpatialNorms spatial_norms(const StateVector& state);
MomentDiagnostics moment_diagnostics(const StateVector& state);

/// P by the one-sided stencil (-3 q_0 + 4 q_1 - q_2)/(2h), Q = values[0].
/// value_dt is left zero; the run loop fills it from the closed form,
/// never from differencing the solution.
BoundaryTraces neumann_trace(const StateVector& state);

// ---------------------------------------------------------------------------
// Time quadrature
// ---------------------------------------------------------------------------

/// Composite trapezoid of t^p * f(t) over [a, b] on a uniformly sampled
/// series; interval endpoints inside a sample step are handled by linear
/// interpolation of f. Throws ConfigError if [a, b] is not covered.
double time_integral(std::span<const double> times, std::span<const double> values,
                     double p, double a, double b);
Complex time_integral(std::span<const double> times, std::span<const Complex> values,
                      double p, double a, double b);

/// Running partial integrals I(t_k) = int_0^{t_k} s^p f(s) ds (trapezoid,
/// cumulative, starting at the first sample).
std::vector<double> running_weighted_integral(std::span<const double> times,
                                              std::span<const double> values, double p);

/// d/dt of a uniformly sampled series: centered differences inside,
/// second-order one-sided at the ends. Needs >= 3 samples.
std::vector<double> series_derivative(std::span<const double> times,
                                      std::span<const double> values);
std::vector<Complex> series_derivative(std::span<const double> times,
                                       std::span<const Complex> values);

} // namespace nlshalf
