#pragma once

#include "nlshalf/report_io.hpp"
#include "nlshalf/solver.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace nlshalf {

// Command implementations backing the `nlshalf` tool. They throw
// ConfigError/NumericError/IoError; the executable maps those to exit
// codes 2/3/4.

struct RunOptions {
    std::filesystem::path config_path;
    std::filesystem::path out_dir;
    std::optional<double> p_override;
    std::optional<double> horizon_override;
};

/// Executes one scenario end to end and writes diagnostics.csv,
/// residuals.csv and report.json into out_dir. Fails (NumericError) if the
/// algebraic virial residual exceeds 1e-12 relative anywhere or the
/// truncation monitor trips.
EstimateReport run_cmd(const RunOptions& opts);

struct ConvergeOptions {
    std::filesystem::path config_path;
    int levels = 3;
    std::optional<std::filesystem::path> out_dir; // optional CSV of the table
};

struct FittedOrder {
    double order = 0.0;
    bool exact = false; // every level at rounding level; counts as passing
};

struct ConvergenceTable {
    std::vector<double> h, dt;
    std::vector<double> sup_error;
    // residual maxima per level, keyed by residual name
    std::vector<std::string> residual_names;
    std::vector<std::vector<double>> residual_max; // [name][level]
    FittedOrder solution_order;
    std::vector<FittedOrder> residual_orders; // aligned with residual_names
    bool all_orders_ok(double threshold = 1.8) const;
};

/// Joint (h, dt) refinement study on a manufactured config; rejects configs
/// without forcing and levels < 3.
ConvergenceTable converge_cmd(const ConvergeOptions& opts);
void print_convergence_table(const ConvergenceTable& table, std::ostream& os);
std::string convergence_csv(const ConvergenceTable& table);

/// Hypothesis/conclusion matrix across stored reports (text + optional CSV).
void report_cmd(const std::vector<std::filesystem::path>& reports, std::ostream& text_out,
                const std::optional<std::filesystem::path>& csv_out);

} // namespace nlshalf
