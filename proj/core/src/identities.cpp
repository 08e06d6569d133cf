#include "nlshalf/identities.hpp"

#include "nlshalf/errors.hpp"

#include <algorithm>
#include <cmath>

namespace nlshalf {

namespace {

const Complex kI{0.0, 1.0};

void require_samples(const DiagnosticsSeries& diag, std::size_t n, const char* who) {
    if (diag.size() < n)
        throw ConfigError(std::string(who) + ": need at least " + std::to_string(n) + " samples");
}

} // namespace

std::vector<double> residual_mass_flux(const DiagnosticsSeries& diag) {
    require_samples(diag, 3, "residual_mass_flux");
    const auto mass = diag.mass();
    const auto dmass = series_derivative(diag.t, std::span<const double>(mass));
    const auto im_pq = diag.im_p_qbar();
    std::vector<double> r(diag.size());
    for (std::size_t k = 0; k < diag.size(); ++k) {
        r[k] = dmass[k] - 2.0 * im_pq[k];
        if (diag.forced()) r[k] -= diag.forcing[k].mass;
    }
    return r;
}

std::vector<double> residual_energy_flux(const DiagnosticsSeries& diag) {
    require_samples(diag, 3, "residual_energy_flux");
    const auto grad = diag.grad_sq();
    const auto quart = diag.quartic();
    const auto dgrad = series_derivative(diag.t, std::span<const double>(grad));
    const auto dquart = series_derivative(diag.t, std::span<const double>(quart));
    const auto re_pqt = diag.re_p_qtbar();
    std::vector<double> r(diag.size());
    for (std::size_t k = 0; k < diag.size(); ++k) {
        r[k] = dgrad[k] + dquart[k] + 2.0 * re_pqt[k];
        if (diag.forced()) r[k] -= diag.forcing[k].energy;
    }
    return r;
}

NeumannSqResidual residual_neumann_sq(const DiagnosticsSeries& diag) {
    require_samples(diag, 3, "residual_neumann_sq");
    const auto cross = diag.cross();
    const auto dcross = series_derivative(diag.t, std::span<const Complex>(cross));
    NeumannSqResidual out;
    out.real_part.resize(diag.size());
    out.imag_part.resize(diag.size());
    for (std::size_t k = 0; k < diag.size(); ++k) {
        const auto& tr = diag.traces[k];
        const Complex bracket = kI * dcross[k] + kI * tr.value * std::conj(tr.value_dt);
        double r = std::norm(tr.slope) - std::real(bracket) - std::pow(std::abs(tr.value), 4.0);
        if (diag.forced()) r -= diag.forcing[k].neumann;
        out.real_part[k] = r;
        out.imag_part[k] = std::imag(bracket);
    }
    return out;
}

std::vector<double> residual_virial_algebraic(const DiagnosticsSeries& diag) {
    std::vector<double> r(diag.size());
    for (std::size_t k = 0; k < diag.size(); ++k) {
        const double t = diag.t[k];
        const auto& m = diag.moments[k];
        const auto& n = diag.norms[k];
        r[k] = 4.0 * t * m.y - (m.second_moment + 4.0 * t * t * n.grad_sq - m.shifted_combo);
    }
    return r;
}

std::vector<double> residual_virial_relative(const DiagnosticsSeries& diag) {
    const auto r = residual_virial_algebraic(diag);
    std::vector<double> rel(diag.size());
    for (std::size_t k = 0; k < diag.size(); ++k) {
        const double t = diag.t[k];
        const auto& m = diag.moments[k];
        const auto& n = diag.norms[k];
        const double scale =
            std::max({std::abs(4.0 * t * m.y), m.second_moment, 4.0 * t * t * n.grad_sq,
                      m.shifted_combo});
        rel[k] = scale > 0.0 ? std::abs(r[k]) / scale : 0.0;
    }
    return rel;
}

namespace {

// Shared running integrals for the integrated virial balance:
//   t^2 K(t) = 1/4 [4ty - M2(t) + M2(0) - 4t^2 G(t)]
//            - int_0^t r Re{P conj(Q)} dr - 2 int_0^t r^2 Re{P conj(Q_r)} dr
//            + int_0^t r K dr + C(t),
// where C accumulates the source moments on forced runs and vanishes
// otherwise.
struct BalanceIntegrals {
    std::vector<double> r_pq;    // int r Re{P conj(Q)}
    std::vector<double> r2_pqt;  // int r^2 Re{P conj(Q_t)}
    std::vector<double> r_quart; // int r K
    std::vector<double> fc;      // C(t)
};

BalanceIntegrals balance_integrals(const DiagnosticsSeries& diag) {
    BalanceIntegrals out;
    out.r_pq = running_weighted_integral(diag.t, diag.re_p_qbar(), 1.0);
    out.r2_pqt = running_weighted_integral(diag.t, diag.re_p_qtbar(), 2.0);
    out.r_quart = running_weighted_integral(diag.t, diag.quartic(), 1.0);
    if (diag.forced()) {
        std::vector<double> vy(diag.size()), vm2(diag.size()), ve(diag.size());
        for (std::size_t k = 0; k < diag.size(); ++k) {
            vy[k] = diag.forcing[k].virial_y;
            vm2[k] = diag.forcing[k].virial_m2;
            ve[k] = diag.forcing[k].energy;
        }
        const auto i_y = running_weighted_integral(diag.t, vy, 1.0);
        const auto i_m2 = running_weighted_integral(diag.t, vm2, 0.0);
        const auto i_e = running_weighted_integral(diag.t, ve, 2.0);
        out.fc.resize(diag.size());
        for (std::size_t k = 0; k < diag.size(); ++k)
            out.fc[k] = -(i_y[k] - 0.25 * i_m2[k] - i_e[k]);
    } else {
        out.fc.assign(diag.size(), 0.0);
    }
    return out;
}

double balance_at(const DiagnosticsSeries& diag, const BalanceIntegrals& ints, std::size_t k) {
    const double t = diag.t[k];
    const auto& m = diag.moments[k];
    const auto& n = diag.norms[k];
    const double m2_0 = diag.moments.front().second_moment;
    const double lhs = t * t * n.quartic;
    const double rhs = 0.25 * (4.0 * t * m.y - m.second_moment + m2_0 -
                               4.0 * t * t * n.grad_sq) -
                       ints.r_pq[k] - 2.0 * ints.r2_pqt[k] + ints.r_quart[k] + ints.fc[k];
    return lhs - rhs;
}

} // namespace

double virial_balance(const DiagnosticsSeries& diag, std::size_t t_index) {
    require_samples(diag, 2, "virial_balance");
    if (t_index >= diag.size()) throw ConfigError("virial_balance: sample index out of range");
    const auto ints = balance_integrals(diag);
    return balance_at(diag, ints, t_index);
}

std::vector<double> virial_balance_series(const DiagnosticsSeries& diag) {
    require_samples(diag, 2, "virial_balance_series");
    const auto ints = balance_integrals(diag);
    std::vector<double> r(diag.size());
    for (std::size_t k = 0; k < diag.size(); ++k) r[k] = balance_at(diag, ints, k);
    return r;
}

IdentityResiduals identity_residuals(const DiagnosticsSeries& diag) {
    IdentityResiduals out;
    out.t = diag.t;
    out.r_mass = residual_mass_flux(diag);
    out.r_energy = residual_energy_flux(diag);
    auto nm = residual_neumann_sq(diag);
    out.r_neumann_sq = std::move(nm.real_part);
    out.r_neumann_im = std::move(nm.imag_part);
    out.r_virial_alg = residual_virial_algebraic(diag);
    out.r_virial_balance = virial_balance_series(diag);
    return out;
}

} // namespace nlshalf
