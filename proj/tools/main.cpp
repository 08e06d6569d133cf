// nlshalf: simulate the defocusing cubic NLS on the truncated half-line and
// verify the boundary-trace estimates, decay rates and admissibility
// thresholds of its Dirichlet-to-Neumann theory.
//
// Subcommands:
//   run      — execute one scenario, write diagnostics.csv / residuals.csv /
//              report.json
//   converge — joint (h, dt) refinement study on a manufactured solution
//   report   — hypothesis/conclusion matrix across stored report.json files
//
// Exit codes: 0 success, 2 config/usage, 3 numeric failure, 4 I/O failure.

#include "nlshalf/cli.hpp"
#include "nlshalf/errors.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"defocusing cubic NLS on the half-line: simulation and "
                 "estimate verification"};
    app.require_subcommand(1);

    nlshalf::RunOptions run_opts;
    double p_override = 0.0, horizon_override = 0.0;
    auto* run_sub = app.add_subcommand("run", "execute one scenario end to end");
    run_sub->add_option("--config", run_opts.config_path, "scenario config file")
        ->required();
    run_sub->add_option("--out", run_opts.out_dir, "output directory")->required();
    auto* p_opt = run_sub->add_option("--p-override", p_override,
                                      "weight exponent for the weighted Neumann check");
    auto* h_opt = run_sub->add_option("--horizon-override", horizon_override,
                                      "override the config horizon");

    nlshalf::ConvergeOptions conv_opts;
    std::filesystem::path conv_out;
    auto* conv_sub =
        app.add_subcommand("converge", "refinement study on a manufactured solution");
    conv_sub->add_option("--config", conv_opts.config_path, "manufactured config file")
        ->required();
    conv_sub->add_option("--levels", conv_opts.levels, "number of refinement levels (>= 3)")
        ->required();
    auto* conv_out_opt = conv_sub->add_option("--out", conv_out, "directory for convergence.csv");

    std::vector<std::filesystem::path> report_files;
    std::filesystem::path report_csv;
    auto* report_sub = app.add_subcommand("report", "tabulate stored reports");
    report_sub->add_option("files", report_files, "report.json files")->required();
    auto* report_out_opt = report_sub->add_option("--out", report_csv, "also write a CSV table");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (run_sub->parsed()) {
            if (*p_opt) run_opts.p_override = p_override;
            if (*h_opt) run_opts.horizon_override = horizon_override;
            nlshalf::run_cmd(run_opts);
            std::cout << "wrote " << (run_opts.out_dir / "report.json").string() << "\n";
        } else if (conv_sub->parsed()) {
            if (*conv_out_opt) conv_opts.out_dir = conv_out;
            const auto table = nlshalf::converge_cmd(conv_opts);
            nlshalf::print_convergence_table(table, std::cout);
            if (!table.all_orders_ok()) {
                std::cerr << "converge: a fitted order fell below 1.8\n";
                return 3;
            }
        } else if (report_sub->parsed()) {
            std::optional<std::filesystem::path> csv;
            if (*report_out_opt) csv = report_csv;
            nlshalf::report_cmd(report_files, std::cout, csv);
        }
    } catch (const nlshalf::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const nlshalf::NumericError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const nlshalf::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
    return 0;
}
