#pragma once

#include "nlshalf/estimates.hpp"
#include "nlshalf/identities.hpp"
#include "nlshalf/scenario.hpp"

#include <filesystem>
#include <string>

namespace nlshalf {

inline constexpr int kReportSchemaVersion = 1;
inline constexpr const char* kSoftwareVersion = "nlshalf 0.1.0";

/// CSV column order is fixed; see the README for the schema. All floating
/// point values are written with "%.17g" so identical runs produce
/// byte-identical files.
std::string diagnostics_csv(const DiagnosticsSeries& diag);
std::string residuals_csv(const IdentityResiduals& res);

std::string report_json(const ScenarioConfig& cfg, const EstimateReport& report);

/// Minimal view of a stored report, as needed by the comparison table.
struct StoredReport {
    std::string path;
    int schema_version = 0;
    double alpha = 0.0, beta = 0.0;
    bool l2_trace = false, l4_decay = false, l1_trace = false;
    std::optional<double> p_feasible;
    double l2_ratio_sup = 0.0;
    bool l2_ratio_ok = false;
    std::optional<double> quartic_exponent;
    std::optional<double> sup_exponent;
    bool f_bounded = false;
    std::string weighted_verdict;
    std::string l1_verdict;
    bool cubed_bound_ok = false;
    bool tq_level_ok = false;
    bool sup_decaying = false;
};

/// Throws ConfigError on schema-version mismatch, IoError on unreadable files.
StoredReport read_report(const std::filesystem::path& path);

/// Writes via a temp file in the same directory plus rename, so partial
/// artifacts are never observed.
void atomic_write(const std::filesystem::path& path, const std::string& content);

} // namespace nlshalf
