#include "nlshalf/cli.hpp"

#include "nlshalf/errors.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

using namespace nlshalf;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& tag) {
    const auto dir = fs::temp_directory_path() / ("nlshalf_cli_" + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

void write_file(const fs::path& p, const std::string& content) {
    std::ofstream(p) << content;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

const char* kZeroScenario = R"(# all-quiet scenario
[initial]
family = zero
[dirichlet]
family = zero
[grid]
L = 20
N = 64
[solver]
dt = 0.05
horizon = 1.0
sample_stride = 2
)";

const char* kSmallDriven = R"([initial]
family = gaussian
amplitude_re = 1.0
width = 1.0
center = 0
[dirichlet]
family = power_decay
Q0_re = 1.0
alpha = 3.0
[grid]
L = 50
N = 512
[solver]
dt = 0.04
horizon = 2.0
sample_stride = 5
leak_tol = 0.5
)";

const char* kManufactured = R"([grid]
L = 10
N = 161
[solver]
dt = 0.015625
horizon = 0.5
sample_stride = 4
forcing = gaussian_phase
)";

int run_tool(const std::string& args) {
    const std::string cmd = std::string(NLSHALF_TOOL_PATH) + " " + args + " > /dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

} // namespace

TEST_CASE("run_cmd writes a full artifact for the zero scenario") {
    const auto dir = temp_dir("zero");
    write_file(dir / "cfg.ini", kZeroScenario);
    RunOptions opts;
    opts.config_path = dir / "cfg.ini";
    opts.out_dir = dir / "out";
    const auto rep = run_cmd(opts);
    CHECK(fs::exists(opts.out_dir / "diagnostics.csv"));
    CHECK(fs::exists(opts.out_dir / "residuals.csv"));
    CHECK(fs::exists(opts.out_dir / "report.json"));
    CHECK(rep.l2_ratio.sup == 0.0);
    CHECK(rep.identities.virial_alg_max_rel == 0.0);
    // every numeric cell in the diagnostics is exactly zero except t
    std::istringstream csv(read_file(opts.out_dir / "diagnostics.csv"));
    std::string line;
    std::getline(csv, line); // header
    while (std::getline(csv, line)) {
        const auto first_comma = line.find(',');
        CHECK(line.substr(first_comma) ==
              ",0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0");
    }
    fs::remove_all(dir);
}

TEST_CASE("run_cmd is deterministic: byte-identical CSV on repeat") {
    const auto dir = temp_dir("det");
    write_file(dir / "cfg.ini", kSmallDriven);
    RunOptions opts;
    opts.config_path = dir / "cfg.ini";
    opts.out_dir = dir / "out1";
    run_cmd(opts);
    opts.out_dir = dir / "out2";
    run_cmd(opts);
    CHECK(read_file(dir / "out1" / "diagnostics.csv") ==
          read_file(dir / "out2" / "diagnostics.csv"));
    CHECK(read_file(dir / "out1" / "residuals.csv") ==
          read_file(dir / "out2" / "residuals.csv"));
    fs::remove_all(dir);
}

TEST_CASE("run_cmd honors the p and horizon overrides") {
    const auto dir = temp_dir("override");
    write_file(dir / "cfg.ini", kSmallDriven);
    RunOptions opts;
    opts.config_path = dir / "cfg.ini";
    opts.out_dir = dir / "out";
    opts.p_override = 1.05;
    opts.horizon_override = 1.0;
    const auto rep = run_cmd(opts);
    CHECK(rep.weighted.p == doctest::Approx(1.05));
    // horizon 1.0 at stride 5, dt 0.04: 6 samples including t = 0
    std::istringstream csv(read_file(dir / "out" / "diagnostics.csv"));
    std::string line;
    int rows = -1; // discount header
    while (std::getline(csv, line)) ++rows;
    CHECK(rows == 6);
    fs::remove_all(dir);
}

TEST_CASE("converge_cmd rejects non-manufactured configs and low level counts") {
    const auto dir = temp_dir("convreq");
    write_file(dir / "plain.ini", kSmallDriven);
    write_file(dir / "manu.ini", kManufactured);
    ConvergeOptions opts;
    opts.config_path = dir / "plain.ini";
    opts.levels = 3;
    CHECK_THROWS_WITH_AS(converge_cmd(opts), doctest::Contains("forcing"), ConfigError);
    opts.config_path = dir / "manu.ini";
    opts.levels = 1;
    CHECK_THROWS_WITH_AS(converge_cmd(opts), doctest::Contains("levels"), ConfigError);
    fs::remove_all(dir);
}

TEST_CASE("converge_cmd reports zero error as exact on the zero manufactured solution") {
    const auto dir = temp_dir("convzero");
    write_file(dir / "cfg.ini", "[grid]\nL = 20\nN = 64\n[solver]\ndt = 0.05\nhorizon = 0.5\n"
                                "sample_stride = 2\nforcing = zero\n");
    ConvergeOptions opts;
    opts.config_path = dir / "cfg.ini";
    opts.levels = 3;
    const auto table = converge_cmd(opts);
    CHECK(table.solution_order.exact);
    for (const auto& o : table.residual_orders) CHECK(o.exact);
    CHECK(table.all_orders_ok());
    fs::remove_all(dir);
}

TEST_CASE("report_cmd tabulates an alpha sweep with l1_trace only at alpha = 3") {
    const auto dir = temp_dir("sweep");
    int idx = 0;
    std::vector<fs::path> reports;
    for (double alpha : {1.0, 2.0, 3.0}) {
        auto cfg = testsup::driven_scenario(40.0, 256, 0.05, 1.5, 5, alpha);
        const auto result = run(cfg);
        const auto rep = build_estimate_report(cfg, result.diagnostics, result.residuals);
        const auto subdir = dir / ("alpha" + std::to_string(++idx));
        fs::create_directories(subdir);
        atomic_write(subdir / "report.json", report_json(cfg, rep));
        reports.push_back(subdir / "report.json");
    }
    std::ostringstream table;
    report_cmd(reports, table, dir / "table.csv");
    const std::string text = table.str();
    CHECK(text.find("alpha1") != std::string::npos);
    CHECK(fs::exists(dir / "table.csv"));

    const std::string csv = read_file(dir / "table.csv");
    std::istringstream lines(csv);
    std::string header, row1, row2, row3;
    std::getline(lines, header);
    std::getline(lines, row1);
    std::getline(lines, row2);
    std::getline(lines, row3);
    // columns: scenario,alpha,beta,l2_trace,l4_decay,l1_trace,...
    CHECK(row1.find(",1,2,yes,no,no,") != std::string::npos);
    CHECK(row2.find(",2,3,yes,yes,no,") != std::string::npos);
    CHECK(row3.find(",3,4,yes,yes,yes,") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("report_cmd rejects an empty input list") {
    std::ostringstream sink;
    CHECK_THROWS_AS(report_cmd({}, sink, std::nullopt), ConfigError);
}

TEST_CASE("tool process: exit codes distinguish config, numeric and usage failures") {
    const auto dir = temp_dir("proc");
    write_file(dir / "good.ini", kZeroScenario);
    write_file(dir / "missing_key.ini", "[initial]\nfamily = zero\n[dirichlet]\nfamily = zero\n"
                                        "[grid]\nL = 20\nN = 64\n[solver]\ndt = 0.05\n");
    write_file(dir / "manu.ini", kManufactured);

    CHECK(run_tool("run --config " + (dir / "good.ini").string() + " --out " +
                   (dir / "out").string()) == 0);
    CHECK(fs::exists(dir / "out" / "report.json"));

    // config failure: no partial outputs
    CHECK(run_tool("run --config " + (dir / "missing_key.ini").string() + " --out " +
                   (dir / "out2").string()) == 2);
    CHECK_FALSE(fs::exists(dir / "out2" / "diagnostics.csv"));

    CHECK(run_tool("run --config " + (dir / "nonexistent.ini").string() + " --out " +
                   (dir / "out3").string()) == 4);

    // usage error: levels = 1
    CHECK(run_tool("converge --config " + (dir / "manu.ini").string() + " --levels 1") == 2);

    // empty report list is a CLI usage error
    CHECK(run_tool("report") == 2);
    fs::remove_all(dir);
}
