#include "nlshalf/estimates.hpp"

#include "nlshalf/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace nlshalf {

namespace {

double sup_over(std::span<const double> t, std::span<const double> v, double lo, double hi) {
    double s = 0.0;
    for (std::size_t k = 0; k < t.size(); ++k)
        if (t[k] >= lo && t[k] <= hi) s = std::max(s, std::abs(v[k]));
    return s;
}

double max_abs(std::span<const double> v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

} // namespace

// ---------------------------------------------------------------------------
// decay_fit
// ---------------------------------------------------------------------------

DecayFit decay_fit(std::span<const double> times, std::span<const double> values, double t0,
                   double t1) {
    if (times.size() != values.size()) throw ConfigError("decay_fit: series length mismatch");
    if (!(t0 >= 1.0)) throw ConfigError("decay_fit: window must start at t0 >= 1");
    if (!(t1 > t0)) throw ConfigError("decay_fit: empty window");

    std::size_t first = times.size(), last = 0;
    std::size_t count = 0;
    for (std::size_t k = 0; k < times.size(); ++k) {
        if (times[k] < t0 || times[k] > t1) continue;
        if (!(values[k] > 0.0))
            throw ConfigError("decay_fit: nonpositive value inside the fit window at t = " +
                              std::to_string(times[k]));
        first = std::min(first, k);
        last = k;
        ++count;
    }
    if (count < 10) throw ConfigError("decay_fit: window too short, need >= 10 samples, got " +
                                      std::to_string(count));

    // least squares on (log t, log f)
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t k = first; k <= last; ++k) {
        if (times[k] < t0 || times[k] > t1) continue;
        const double lx = std::log(times[k]);
        const double ly = std::log(values[k]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double n = static_cast<double>(count);
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) throw ConfigError("decay_fit: degenerate abscissa");
    const double slope = (n * sxy - sx * sy) / denom;
    const double intercept = (sy - slope * sx) / n;

    DecayFit fit;
    fit.exponent = -slope;
    fit.amplitude = std::exp(intercept);
    fit.first = first;
    fit.last = last;
    for (std::size_t k = first; k <= last; ++k) {
        if (times[k] < t0 || times[k] > t1) continue;
        const double pred = intercept + slope * std::log(times[k]);
        fit.max_log_residual = std::max(fit.max_log_residual,
                                        std::abs(std::log(values[k]) - pred));
    }
    return fit;
}

// ---------------------------------------------------------------------------
// neumann_l2_ratio
// ---------------------------------------------------------------------------

RatioSeries neumann_l2_ratio(const DiagnosticsSeries& diag, const SpatialNorms& init) {
    RatioSeries out;
    out.t = diag.t;
    out.ratio.assign(diag.size(), 0.0);
    if (diag.size() < 2) return out;

    std::vector<double> q_sq(diag.size()), qt_sq(diag.size()), q_4(diag.size());
    for (std::size_t k = 0; k < diag.size(); ++k) {
        q_sq[k] = std::norm(diag.traces[k].value);
        qt_sq[k] = std::norm(diag.traces[k].value_dt);
        q_4[k] = q_sq[k] * q_sq[k];
    }
    const auto lhs_sq = running_weighted_integral(diag.t, diag.p_abs_sq(), 0.0);
    const auto i_q = running_weighted_integral(diag.t, q_sq, 0.0);
    const auto i_qt = running_weighted_integral(diag.t, qt_sq, 0.0);
    const auto i_q4 = running_weighted_integral(diag.t, q_4, 0.0);
    const double init_terms = init.mass + init.grad_sq + init.quartic;

    for (std::size_t k = 0; k < diag.size(); ++k) {
        const double lhs = std::sqrt(lhs_sq[k]);
        const double rhs = i_q[k] + i_qt[k] + i_q4[k] + init_terms;
        if (rhs > 0.0) {
            out.ratio[k] = lhs / rhs;
        } else if (lhs > 0.0) {
            out.violation = true;
            out.ratio[k] = std::numeric_limits<double>::infinity();
        }
        out.sup = std::max(out.sup, out.ratio[k]);
    }
    const double T = diag.t.back();
    out.first_decade_sup = sup_over(out.t, out.ratio, 0.0, T / 10.0);
    out.last_decade_sup = sup_over(out.t, out.ratio, 0.9 * T, T);
    return out;
}

// ---------------------------------------------------------------------------
// check_F
// ---------------------------------------------------------------------------

BoundedSeries check_F(const DiagnosticsSeries& diag) {
    BoundedSeries out;
    out.t = diag.t;
    out.value.assign(diag.size(), 0.0);
    if (diag.size() < 2) return out;

    const auto i1 = running_weighted_integral(diag.t, diag.re_p_qbar(), 1.0);
    const auto i2 = running_weighted_integral(diag.t, diag.re_p_qtbar(), 2.0);
    std::vector<double> run_sup(diag.size(), 0.0);
    double sup = 0.0;
    for (std::size_t k = 0; k < diag.size(); ++k) {
        out.value[k] = -i1[k] - 2.0 * i2[k];
        sup = std::max(sup, std::abs(out.value[k]));
        run_sup[k] = sup;
    }
    out.sup = sup;

    const double T = diag.t.back();
    double sup_before = 0.0;
    for (std::size_t k = 0; k < diag.size(); ++k)
        if (diag.t[k] <= 0.9 * T) sup_before = run_sup[k];
    out.last_decade_increment = sup - sup_before;
    out.bounded = sup == 0.0 || out.last_decade_increment <= 0.01 * sup;
    return out;
}

// ---------------------------------------------------------------------------
// weighted_neumann_integral
// ---------------------------------------------------------------------------

TailReport weighted_neumann_integral(std::span<const double> times,
                                     std::span<const double> p_abs_sq, double p,
                                     bool enforce_hypothesis) {
    if (enforce_hypothesis && !(p > 1.0))
        throw ConfigError("weighted_neumann_integral: the hypothesis requires p > 1, got p = " +
                          std::to_string(p));
    TailReport out;
    out.p = p;
    out.t.assign(times.begin(), times.end());
    out.integral = running_weighted_integral(times, p_abs_sq, p);
    out.total = out.integral.empty() ? 0.0 : out.integral.back();

    if (!times.empty()) {
        const double T = times.back();
        double at_half = 0.0;
        for (std::size_t k = 0; k < times.size(); ++k)
            if (times[k] <= 0.5 * T) at_half = out.integral[k];
        out.tail_ratio = out.total > 0.0 ? (out.total - at_half) / out.total : 0.0;
    }
    out.converged = out.tail_ratio <= 0.05;
    out.verdict = out.converged ? "bounded" : "divergent";
    return out;
}

TailReport weighted_neumann_integral(const DiagnosticsSeries& diag, double p,
                                     bool enforce_hypothesis) {
    const auto psq = diag.p_abs_sq();
    return weighted_neumann_integral(diag.t, psq, p, enforce_hypothesis);
}

// ---------------------------------------------------------------------------
// l1_neumann_partial
// ---------------------------------------------------------------------------

L1Report l1_neumann_partial(std::span<const double> times, std::span<const double> p_abs,
                            std::span<const double> p_abs_sq, double eps) {
    if (p_abs.size() != times.size() || p_abs_sq.size() != times.size())
        throw ConfigError("l1_neumann_partial: series length mismatch");
    L1Report out;
    out.eps = eps;
    out.t.assign(times.begin(), times.end());
    out.direct = running_weighted_integral(times, p_abs, 0.0);
    out.total = out.direct.empty() ? 0.0 : out.direct.back();
    out.bound.assign(times.size(), 0.0);
    if (times.empty()) return out;

    // split point: first sample >= 1 (falls back to the last sample for
    // very short horizons)
    std::size_t split = times.size() - 1;
    for (std::size_t k = 0; k < times.size(); ++k)
        if (times[k] >= 1.0) {
            split = k;
            break;
        }

    // head piece: J(t) <= (t ... weights sum)^{1/2} (int |P|^2)^{1/2}, shared
    // trapezoid weights make this a literal discrete Cauchy-Schwarz bound
    const auto head_sq = running_weighted_integral(times, p_abs_sq, 0.0);
    std::vector<double> ones(times.size(), 1.0);
    const auto head_w = running_weighted_integral(times, ones, 0.0);

    // tail pieces from the split sample on
    std::vector<double> tail_wt(times.size(), 0.0), tail_sq(times.size(), 0.0);
    for (std::size_t k = split + 1; k < times.size(); ++k) {
        const double dt = times[k] - times[k - 1];
        const double w0 = std::pow(times[k - 1], -1.0 - eps);
        const double w1 = std::pow(times[k], -1.0 - eps);
        const double s0 = std::pow(times[k - 1], 1.0 + eps) * p_abs_sq[k - 1];
        const double s1 = std::pow(times[k], 1.0 + eps) * p_abs_sq[k];
        tail_wt[k] = tail_wt[k - 1] + dt * 0.5 * (w0 + w1);
        tail_sq[k] = tail_sq[k - 1] + dt * 0.5 * (s0 + s1);
    }

    double max_violation = 0.0;
    bool dominated = true;
    for (std::size_t k = 0; k < times.size(); ++k) {
        double b;
        if (k <= split) {
            b = std::sqrt(head_w[k] * head_sq[k]);
        } else {
            b = std::sqrt(head_w[split] * head_sq[split]) +
                std::sqrt(tail_wt[k] * tail_sq[k]);
        }
        out.bound[k] = b;
        const double excess = out.direct[k] - b;
        max_violation = std::max(max_violation, excess);
        // rounding slack only; the weighted Cauchy-Schwarz is exact
        if (excess > 1e-9 * std::max(1.0, b)) dominated = false;
    }
    out.bound_dominates = dominated;
    out.max_bound_violation = max_violation;

    const double T = times.back();
    double at_half = 0.0;
    for (std::size_t k = 0; k < times.size(); ++k)
        if (times[k] <= 0.5 * T) at_half = out.direct[k];
    out.tail_ratio = out.total > 0.0 ? (out.total - at_half) / out.total : 0.0;
    out.converged = out.tail_ratio <= 0.05;
    out.verdict = out.converged ? "integrable" : "not integrable";
    return out;
}

L1Report l1_neumann_partial(const DiagnosticsSeries& diag, double eps) {
    const auto pa = diag.p_abs();
    const auto psq = diag.p_abs_sq();
    return l1_neumann_partial(diag.t, pa, psq, eps);
}

// ---------------------------------------------------------------------------
// sup_norm_series
// ---------------------------------------------------------------------------

SupNormReport sup_norm_series(const DiagnosticsSeries& diag) {
    SupNormReport out;
    out.t = diag.t;
    out.sup = diag.sup();
    out.bound_cubed.resize(diag.size());
    out.inequality_holds = true;
    for (std::size_t k = 0; k < diag.size(); ++k) {
        const double q0_abs = std::abs(diag.traces[k].value);
        const auto& n = diag.norms[k];
        out.bound_cubed[k] =
            q0_abs * q0_abs * q0_abs + 3.0 * std::sqrt(n.quartic) * std::sqrt(n.grad_sq);
        const double excess = out.sup[k] * out.sup[k] * out.sup[k] - out.bound_cubed[k];
        out.max_excess = std::max(out.max_excess, excess);
        if (excess > 0.0) out.inequality_holds = false;
    }

    // windowed means past t = 1
    std::vector<std::size_t> idx;
    for (std::size_t k = 0; k < diag.size(); ++k)
        if (diag.t[k] >= 1.0) idx.push_back(k);
    if (idx.size() >= 10) {
        const std::size_t w = std::max<std::size_t>(1, idx.size() / 10);
        double first = 0.0, last = 0.0;
        for (std::size_t i = 0; i < w; ++i) {
            first += out.sup[idx[i]];
            last += out.sup[idx[idx.size() - 1 - i]];
        }
        out.first_window_mean = first / static_cast<double>(w);
        out.last_window_mean = last / static_cast<double>(w);
        bool slope_negative = false;
        if (out.first_window_mean > 0.0 && out.last_window_mean > 0.0) {
            try {
                const auto fit = decay_fit(diag.t, out.sup, diag.t[idx.front()],
                                           diag.t[idx.back()]);
                slope_negative = fit.exponent > 0.0;
            } catch (const ConfigError&) {
                slope_negative = false;
            }
        }
        out.decaying = out.last_window_mean < out.first_window_mean && slope_negative;
    }
    return out;
}

// ---------------------------------------------------------------------------
// build_estimate_report
// ---------------------------------------------------------------------------

EstimateReport build_estimate_report(const ScenarioConfig& cfg, const DiagnosticsSeries& diag,
                                     const IdentityResiduals& residuals,
                                     std::optional<double> p_override) {
    EstimateReport rep;
    rep.admissibility = classify_admissibility(cfg.dirichlet);
    rep.alpha = cfg.dirichlet.effective_alpha();
    rep.beta = cfg.dirichlet.effective_beta();

    SpatialNorms init;
    if (!diag.t.empty()) init = diag.norms.front();
    rep.l2_ratio = neumann_l2_ratio(diag, init);
    rep.f_functional = check_F(diag);
    rep.sup_norm = sup_norm_series(diag);

    const double T = diag.t.empty() ? 0.0 : diag.t.back();

    const double p_used = p_override ? *p_override
                                     : rep.admissibility.p_feasible.value_or(1.1);
    rep.weighted = weighted_neumann_integral(diag, p_used, /*enforce_hypothesis=*/false);
    rep.l1 = l1_neumann_partial(diag, std::max(p_used - 1.0, 1e-3));

    // t ||q||_4^4 windows for the L^4 decay claim
    if (T >= 4.0) {
        const auto quart = diag.quartic();
        std::vector<double> tq(diag.size());
        for (std::size_t k = 0; k < diag.size(); ++k) tq[k] = diag.t[k] * quart[k];
        rep.tq_early_sup = sup_over(diag.t, tq, 1.0, 2.0);
        rep.tq_late_sup = sup_over(diag.t, tq, T / 2.0, T);
        rep.tq_level_ok = rep.tq_late_sup <= 1.5 * rep.tq_early_sup ||
                    (rep.tq_early_sup == 0.0 && rep.tq_late_sup == 0.0);
    }

    if (T > 12.0) {
        const auto quart = diag.quartic();
        bool positive = true;
        for (std::size_t k = 0; k < diag.size(); ++k)
            if (diag.t[k] >= 10.0 && !(quart[k] > 0.0)) positive = false;
        if (positive) {
            try {
                rep.quartic_fit = decay_fit(diag.t, quart, 10.0, T);
            } catch (const ConfigError&) {
            }
        }
        const auto sup = diag.sup();
        positive = true;
        for (std::size_t k = 0; k < diag.size(); ++k)
            if (diag.t[k] >= 10.0 && !(sup[k] > 0.0)) positive = false;
        if (positive) {
            try {
                rep.sup_fit = decay_fit(diag.t, sup, 10.0, T);
            } catch (const ConfigError&) {
            }
        }
    }

    if (!residuals.t.empty()) {
        rep.identities.mass_max = max_abs(residuals.r_mass);
        rep.identities.energy_max = max_abs(residuals.r_energy);
        rep.identities.neumann_max = max_abs(residuals.r_neumann_sq);
        rep.identities.neumann_im_max = max_abs(residuals.r_neumann_im);
        rep.identities.virial_balance_max = max_abs(residuals.r_virial_balance);
    }
    rep.identities.virial_alg_max_rel = max_abs(residual_virial_relative(diag));

    for (const auto& n : diag.norms) {
        rep.uniform_bounds.mass_sup = std::max(rep.uniform_bounds.mass_sup, n.mass);
        rep.uniform_bounds.grad_sup = std::max(rep.uniform_bounds.grad_sup, n.grad_sq);
        rep.uniform_bounds.quartic_sup = std::max(rep.uniform_bounds.quartic_sup, n.quartic);
    }
    return rep;
}

} // namespace nlshalf
