#pragma once

#include "nlshalf/functionals.hpp"
#include "nlshalf/identities.hpp"
#include "nlshalf/scenario.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace nlshalf {

// ---------------------------------------------------------------------------
// Decay-exponent fitting
// ---------------------------------------------------------------------------

struct DecayFit {
    double exponent = 0.0;  // positive means decay like t^{-exponent}
    double amplitude = 0.0; // fitted prefactor
    double max_log_residual = 0.0;
    std::size_t first = 0, last = 0; // sample window actually used
};

/// Least-squares fit of log f against log t over [t0, t1]. Requires t0 >= 1,
/// strictly positive samples and at least 10 of them in the window.
DecayFit decay_fit(std::span<const double> times, std::span<const double> values,
                   double t0, double t1);

// ---------------------------------------------------------------------------
// Boundedness checks on the Neumann trace
// ---------------------------------------------------------------------------

/// LHS/RHS series of the L^2 Neumann-trace estimate:
///   LHS(t) = (int_0^t |P|^2)^{1/2}
///   RHS(t) = ||Q||^2_{L^2(0,t)} + ||Q_t||^2_{L^2(0,t)} + ||Q||^4_{L^4(0,t)}
///          + ||q0||^2 + ||q0_x||^2 + ||q0||_4^4
/// with unit coefficients; the sup of the ratio is the observed constant.
struct RatioSeries {
    std::vector<double> t;
    std::vector<double> ratio;
    double sup = 0.0;
    double first_decade_sup = 0.0; // sup over (0, T/10]
    double last_decade_sup = 0.0;  // sup over [9T/10, T]
    bool violation = false;        // RHS == 0 with LHS > 0 (impossible on valid runs)
};

RatioSeries neumann_l2_ratio(const DiagnosticsSeries& diag, const SpatialNorms& init);

/// Running boundary functional
///   F(t) = -int_0^t r Re{P conj(Q)} dr - 2 int_0^t r^2 Re{P conj(Q_r)} dr.
/// "bounded" when the increment of the running sup over the last tenth of
/// the horizon is at most 1% of the final sup.
struct BoundedSeries {
    std::vector<double> t;
    std::vector<double> value;
    double sup = 0.0;
    double last_decade_increment = 0.0;
    bool bounded = false;
};

BoundedSeries check_F(const DiagnosticsSeries& diag);

/// Running integral I(t) = int_0^t s^p |P(s)|^2 ds with the Cauchy-increment
/// verdict: converged when I(T) - I(T/2) <= 5% of I(T).
struct TailReport {
    double p = 0.0;
    std::vector<double> t;
    std::vector<double> integral;
    double total = 0.0;
    double tail_ratio = 0.0;
    bool converged = false;
    std::string verdict; // "bounded"/"divergent" or "integrable"/"not integrable"
};

TailReport weighted_neumann_integral(std::span<const double> times,
                                     std::span<const double> p_abs_sq, double p,
                                     bool enforce_hypothesis = true);
TailReport weighted_neumann_integral(const DiagnosticsSeries& diag, double p,
                                     bool enforce_hypothesis = true);

/// Running integral J(t) = int_0^t |P| ds plus the Cauchy-Schwarz majorant
///   B(t) = (t1 int_0^{t1} |P|^2)^{1/2}
///        + (int_{t1}^t s^{-1-eps})^{1/2} (int_{t1}^t s^{1+eps} |P|^2)^{1/2}
/// with t1 the first sample >= 1. Discrete Cauchy-Schwarz with shared
/// trapezoid weights guarantees J <= B at every sample.
struct L1Report {
    double eps = 0.0;
    std::vector<double> t;
    std::vector<double> direct; // J(t_k)
    std::vector<double> bound;  // B(t_k)
    double total = 0.0;
    double tail_ratio = 0.0;
    bool converged = false;
    bool bound_dominates = false;
    double max_bound_violation = 0.0;
    std::string verdict;
};

L1Report l1_neumann_partial(std::span<const double> times, std::span<const double> p_abs,
                            std::span<const double> p_abs_sq, double eps);
L1Report l1_neumann_partial(const DiagnosticsSeries& diag, double eps);

// ---------------------------------------------------------------------------
// Sup-norm decay and the cubed-modulus bound
// ---------------------------------------------------------------------------

/// Per-sample sup_x |q| together with the bound chain
///   |q|^3 <= |Q|^3 + 3 ||q||_4^2 ||q_x||.
/// "decaying" when the mean over the last tenth of the samples past t=1 is
/// below the mean over the first tenth and the fitted trend slope is
/// negative.
struct SupNormReport {
    std::vector<double> t;
    std::vector<double> sup;
    std::vector<double> bound_cubed; // |Q|^3 + 3 ||q||_4^2 ||q_x||
    bool inequality_holds = false;
    double max_excess = 0.0; // max over samples of sup^3 - bound (<= 0 when it holds)
    bool decaying = false;
    double first_window_mean = 0.0;
    double last_window_mean = 0.0;
};

SupNormReport sup_norm_series(const DiagnosticsSeries& diag);

// ---------------------------------------------------------------------------
// Aggregate report
// ---------------------------------------------------------------------------

struct IdentitySummary {
    double virial_alg_max_rel = 0.0;
    double mass_max = 0.0;
    double energy_max = 0.0;
    double neumann_max = 0.0;
    double neumann_im_max = 0.0;
    double virial_balance_max = 0.0;
};

struct UniformBounds {
    double mass_sup = 0.0;
    double grad_sup = 0.0;
    double quartic_sup = 0.0;
};

/// Scalar verdicts of one run; serialized to report.json.
struct EstimateReport {
    AdmissibilityClass admissibility;
    double alpha = 0.0;
    double beta = 0.0;

    RatioSeries l2_ratio;
    std::optional<DecayFit> quartic_fit;  // window [10, T]
    std::optional<DecayFit> sup_fit;
    BoundedSeries f_functional;
    TailReport weighted;
    L1Report l1;
    SupNormReport sup_norm;

    double tq_early_sup = 0.0; // sup over [1,2] of t ||q||_4^4
    double tq_late_sup = 0.0;  // sup over [T/2,T]
    bool tq_level_ok = false;        // late <= 1.5 * early

    IdentitySummary identities;
    UniformBounds uniform_bounds;
};

/// Assembles every estimate over a finished run. p_override replaces the
/// scenario's p_feasible in the weighted check.
EstimateReport build_estimate_report(const ScenarioConfig& cfg,
                                     const DiagnosticsSeries& diag,
                                     const IdentityResiduals& residuals,
                                     std::optional<double> p_override = std::nullopt);

} // namespace nlshalf
