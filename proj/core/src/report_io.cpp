#include "nlshalf/report_io.hpp"

#include "nlshalf/errors.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <fstream>
#include <random>
#include <sstream>

namespace nlshalf {

namespace {

using nlohmann::json;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

std::string diagnostics_csv(const DiagnosticsSeries& diag) {
    std::string out = "t,mass,grad_sq,quartic,sup,y,second_moment,shifted_combo,"
                      "cross_re,cross_im,P_re,P_im,Q_re,Q_im,Qt_re,Qt_im,"
                      "fc_mass,fc_energy,fc_neumann,fc_virial_y,fc_virial_m2\n";
    for (std::size_t k = 0; k < diag.size(); ++k) {
        const auto& n = diag.norms[k];
        const auto& m = diag.moments[k];
        const auto& tr = diag.traces[k];
        const ForcingMoments fc = diag.forced() ? diag.forcing[k] : ForcingMoments{};
        const double cols[] = {diag.t[k],     n.mass,          n.grad_sq,
                               n.quartic,     n.sup,           m.y,
                               m.second_moment, m.shifted_combo, m.cross.real(),
                               m.cross.imag(), tr.slope.real(), tr.slope.imag(),
                               tr.value.real(), tr.value.imag(), tr.value_dt.real(),
                               tr.value_dt.imag(), fc.mass,     fc.energy,
                               fc.neumann,    fc.virial_y,     fc.virial_m2};
        bool firstcol = true;
        for (double c : cols) {
            if (!firstcol) out += ',';
            out += fmt(c);
            firstcol = false;
        }
        out += '\n';
    }
    return out;
}

std::string residuals_csv(const IdentityResiduals& res) {
    std::string out = "t,r_mass,r_energy,r_neumann_sq,r_neumann_im,r_virial_alg,r_virial_balance\n";
    for (std::size_t k = 0; k < res.t.size(); ++k) {
        const double cols[] = {res.t[k],          res.r_mass[k],      res.r_energy[k],
                               res.r_neumann_sq[k], res.r_neumann_im[k], res.r_virial_alg[k],
                               res.r_virial_balance[k]};
        bool firstcol = true;
        for (double c : cols) {
            if (!firstcol) out += ',';
            out += fmt(c);
            firstcol = false;
        }
        out += '\n';
    }
    return out;
}

namespace {

json fit_json(const std::optional<DecayFit>& fit) {
    if (!fit) return nullptr;
    return json{{"exponent", fit->exponent},
                {"amplitude", fit->amplitude},
                {"max_log_residual", fit->max_log_residual}};
}

} // namespace

std::string report_json(const ScenarioConfig& cfg, const EstimateReport& rep) {
    json j;
    j["schema_version"] = kReportSchemaVersion;
    j["software"] = kSoftwareVersion;
    {
        const auto now = std::chrono::system_clock::now();
        j["generated_unix_ms"] =
            std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch())
                .count();
    }

    j["config"] = {
        {"initial",
         {{"family", profile_family_name(cfg.initial.family)},
          {"amplitude_re", cfg.initial.amplitude.real()},
          {"amplitude_im", cfg.initial.amplitude.imag()},
          {"width", cfg.initial.width},
          {"center", cfg.initial.center}}},
        {"dirichlet",
         {{"family", signal_family_name(cfg.dirichlet.family)},
          {"Q0_re", cfg.dirichlet.q0.real()},
          {"Q0_im", cfg.dirichlet.q0.imag()},
          {"alpha", cfg.dirichlet.alpha},
          {"timescale", cfg.dirichlet.timescale}}},
        {"grid", {{"L", cfg.grid.length}, {"N", cfg.grid.nodes}}},
        {"solver",
         {{"dt", cfg.dt},
          {"horizon", cfg.horizon},
          {"sample_stride", cfg.sample_stride},
          {"fp_tol", cfg.fp_tol},
          {"fp_max_iters", cfg.fp_max_iters},
          {"compat_tol", cfg.compat_tol},
          {"leak_tol", cfg.leak_tol},
          {"forcing", forcing_name(cfg.forcing)}}},
    };

    // infinite decay exponents (super-polynomial families) are stored as null
    j["admissibility"] = {
        {"alpha", std::isfinite(rep.alpha) ? json(rep.alpha) : json(nullptr)},
        {"beta", std::isfinite(rep.beta) ? json(rep.beta) : json(nullptr)},
        {"l2_trace", rep.admissibility.l2_trace},
        {"l4_decay", rep.admissibility.l4_decay},
        {"l1_trace", rep.admissibility.l1_trace},
        {"p_feasible",
         rep.admissibility.p_feasible ? json(*rep.admissibility.p_feasible) : json(nullptr)},
    };

    const bool l2_ratio_ok =
        !rep.l2_ratio.violation &&
        (rep.l2_ratio.first_decade_sup == 0.0 ||
         rep.l2_ratio.last_decade_sup <= 1.10 * rep.l2_ratio.first_decade_sup);
    j["l2_estimate"] = {
        {"sup", rep.l2_ratio.sup},
        {"first_decade_sup", rep.l2_ratio.first_decade_sup},
        {"last_decade_sup", rep.l2_ratio.last_decade_sup},
        {"violation", rep.l2_ratio.violation},
        {"ok", l2_ratio_ok},
    };

    j["decay"] = {{"quartic", fit_json(rep.quartic_fit)}, {"sup_norm", fit_json(rep.sup_fit)}};

    j["f_functional"] = {{"sup", rep.f_functional.sup},
                         {"last_decade_increment", rep.f_functional.last_decade_increment},
                         {"bounded", rep.f_functional.bounded}};

    j["weighted_neumann"] = {{"p", rep.weighted.p},
                             {"total", rep.weighted.total},
                             {"tail_ratio", rep.weighted.tail_ratio},
                             {"verdict", rep.weighted.verdict}};

    j["l1_neumann"] = {{"eps", rep.l1.eps},
                       {"total", rep.l1.total},
                       {"tail_ratio", rep.l1.tail_ratio},
                       {"verdict", rep.l1.verdict},
                       {"bound_dominates", rep.l1.bound_dominates},
                       {"max_bound_violation", rep.l1.max_bound_violation}};

    j["sup_norm"] = {{"inequality_holds", rep.sup_norm.inequality_holds},
                     {"max_excess", rep.sup_norm.max_excess},
                     {"decaying", rep.sup_norm.decaying},
                     {"first_window_mean", rep.sup_norm.first_window_mean},
                     {"last_window_mean", rep.sup_norm.last_window_mean}};

    j["t_quartic"] = {{"early_sup", rep.tq_early_sup},
               {"late_sup", rep.tq_late_sup},
               {"ok", rep.tq_level_ok}};

    j["identities"] = {{"virial_alg_max_rel", rep.identities.virial_alg_max_rel},
                       {"mass_max", rep.identities.mass_max},
                       {"energy_max", rep.identities.energy_max},
                       {"neumann_max", rep.identities.neumann_max},
                       {"neumann_im_max", rep.identities.neumann_im_max},
                       {"virial_balance_max", rep.identities.virial_balance_max}};

    j["uniform_bounds"] = {{"mass_sup", rep.uniform_bounds.mass_sup},
                           {"grad_sup", rep.uniform_bounds.grad_sup},
                           {"quartic_sup", rep.uniform_bounds.quartic_sup}};

    return j.dump(2) + "\n";
}

StoredReport read_report(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open report file: " + path.string());
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw IoError("cannot parse report file " + path.string() + ": " + e.what());
    }

    StoredReport rep;
    rep.path = path.string();
    rep.schema_version = j.value("schema_version", 0);
    if (rep.schema_version != kReportSchemaVersion)
        throw ConfigError("report schema version mismatch in " + path.string() + ": got " +
                          std::to_string(rep.schema_version) + ", expected " +
                          std::to_string(kReportSchemaVersion));

    const auto& adm = j.at("admissibility");
    const double inf = std::numeric_limits<double>::infinity();
    rep.alpha = adm.contains("alpha") && !adm["alpha"].is_null() ? adm["alpha"].get<double>() : inf;
    rep.beta = adm.contains("beta") && !adm["beta"].is_null() ? adm["beta"].get<double>() : inf;
    rep.l2_trace = adm.value("l2_trace", false);
    rep.l4_decay = adm.value("l4_decay", false);
    rep.l1_trace = adm.value("l1_trace", false);
    if (adm.contains("p_feasible") && !adm["p_feasible"].is_null())
        rep.p_feasible = adm["p_feasible"].get<double>();

    rep.l2_ratio_sup = j.at("l2_estimate").value("sup", 0.0);
    rep.l2_ratio_ok = j.at("l2_estimate").value("ok", false);
    const auto& decay = j.at("decay");
    if (!decay.at("quartic").is_null())
        rep.quartic_exponent = decay.at("quartic").value("exponent", 0.0);
    if (!decay.at("sup_norm").is_null())
        rep.sup_exponent = decay.at("sup_norm").value("exponent", 0.0);
    rep.f_bounded = j.at("f_functional").value("bounded", false);
    rep.weighted_verdict = j.at("weighted_neumann").value("verdict", "");
    rep.l1_verdict = j.at("l1_neumann").value("verdict", "");
    rep.cubed_bound_ok = j.at("sup_norm").value("inequality_holds", false);
    rep.sup_decaying = j.at("sup_norm").value("decaying", false);
    rep.tq_level_ok = j.at("t_quartic").value("ok", false);
    return rep;
}

void atomic_write(const std::filesystem::path& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path dir = path.parent_path().empty() ? fs::path(".") : path.parent_path();
    std::error_code ec;
    fs::create_directories(dir, ec);

    static std::mt19937_64 rng{std::random_device{}()};
    const fs::path tmp = dir / (path.filename().string() + ".tmp" + std::to_string(rng()));
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open temporary file for writing: " + tmp.string());
        out << content;
        out.flush();
        if (!out) throw IoError("write failed: " + tmp.string());
    }
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp);
        throw IoError("cannot move artifact into place: " + path.string() + ": " + ec.message());
    }
}

} // namespace nlshalf
