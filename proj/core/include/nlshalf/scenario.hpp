#pragma once

#include "nlshalf/forcing.hpp"
#include "nlshalf/grid.hpp"

#include <optional>
#include <string>
#include <utility>

namespace nlshalf {

// ---------------------------------------------------------------------------
// Data families
// ---------------------------------------------------------------------------

enum class ProfileFamily { gaussian, exp_decay, compact_bump, zero };

/// Closed-form initial profile q0. Every family is smooth with
/// super-polynomial spatial decay, so q0 in H^1 \cap L^4 and x q0 in L^2
/// hold by construction.
struct InitialProfile {
    ProfileFamily family = ProfileFamily::zero;
    Complex amplitude{0.0, 0.0};
    double width = 1.0;
    double center = 0.0;

    Complex value(double x) const;
    Complex derivative(double x) const;

    /// integral_a^inf |q0|^2 / integral_0^inf |q0|^2, by closed form.
    double tail_mass_ratio(double a) const;
};

enum class SignalFamily { power_decay, exp_decay, zero };

/// Closed-form Dirichlet data Q(t) with exact derivative Q_t(t).
/// power_decay: Q = Q0 (1+t/tau)^{-alpha}, so |Q| = O(t^{-alpha}) and
/// |Q_t| = O(t^{-alpha-1}); the (alpha, beta) pair is tied to beta = alpha+1.
/// exp_decay and zero decay faster than any power; the classifier treats
/// them as alpha = beta = +infinity.
struct DirichletSignal {
    SignalFamily family = SignalFamily::zero;
    Complex q0{0.0, 0.0};
    double alpha = 1.0;
    double timescale = 1.0;

    double beta() const;
    double effective_alpha() const;
    double effective_beta() const;

    /// (Q(t), Q_t(t)).
    std::pair<Complex, Complex> eval(double t) const;
};

// ---------------------------------------------------------------------------
// Scenario
// ---------------------------------------------------------------------------

/// A complete problem instance. Parsed from the INI-style config documented
/// in the README; validate() enforces the corner compatibility
/// |q0(0) - Q(0)| <= compat_tol and the truncation sanity check (initial
/// mass beyond L/2 below 1e-12 of the total).
struct ScenarioConfig {
    InitialProfile initial;
    DirichletSignal dirichlet;
    SpatialGrid grid;

    double dt = 0.0;
    double horizon = 0.0;
    int sample_stride = 10;

    double fp_tol = 1e-12;
    int fp_max_iters = 50;
    double compat_tol = 1e-12;
    double leak_tol = 1e-6;
    ForcingChoice forcing = ForcingChoice::none;

    bool forced() const { return forcing != ForcingChoice::none; }
    void validate() const;
};

static constexpr double kTruncationTol = 1e-12;

/// Parses and fully validates an INI-style config document.
/// Errors carry the offending line number (syntax), key name (missing /
/// unknown key) or measured violation (compatibility, truncation).
ScenarioConfig parse_config(const std::string& text);
ScenarioConfig load_config(const std::string& path);

/// Samples q0 on the grid; the last node is forced to zero. For forced
/// scenarios the manufactured solution at t=0 is sampled instead.
StateVector build_initial_state(const ScenarioConfig& cfg);

// ---------------------------------------------------------------------------
// Admissibility
// ---------------------------------------------------------------------------

/// Which decay-hypothesis regimes the signal satisfies:
///   l2_trace : alpha > 1/2 and beta > 1/2
///   l4_decay        : alpha > 3/2 and beta > 5/2
///   l1_trace        : alpha > 5/2 and beta > 5/2
/// p_feasible is the largest p = 1 + k/100 (k = 1..900) satisfying
///   p > 1,  alpha > 2p + 1/2,  alpha + beta > p + 1,  alpha > (p+1)/4.
struct AdmissibilityClass {
    bool l2_trace = false;
    bool l4_decay = false;
    bool l1_trace = false;
    std::optional<double> p_feasible;
};

AdmissibilityClass classify_admissibility(const DirichletSignal& sig);

const char* profile_family_name(ProfileFamily f);
const char* signal_family_name(SignalFamily f);

} // namespace nlshalf
