#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#ifndef ZOFO_CLI_PATH
#define ZOFO_CLI_PATH "zofo"
#endif

namespace {

struct CliResult {
    int exit_code = -1;
    std::string output;
};

CliResult run_cli(const std::string& args) {
    const std::string command = std::string(ZOFO_CLI_PATH) + " " + args + " 2>&1";
    std::array<char, 4096> buffer{};
    CliResult result;
    FILE* pipe = popen(command.c_str(), "r");
    REQUIRE(pipe != nullptr);
    while (std::fgets(buffer.data(), buffer.size(), pipe) != nullptr) {
        result.output += buffer.data();
    }
    const int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

} // namespace

TEST_CASE("cli: gen-plant is deterministic and reports G and L") {
    const std::string a = temp_path("zofo_cli_a.json");
    const std::string b = temp_path("zofo_cli_b.json");
    const CliResult first = run_cli("gen-plant --seed 7 --out " + a);
    CHECK(first.exit_code == 0);
    CHECK(first.output.find("sensitivity norm") != std::string::npos);
    CHECK(first.output.find("smoothness constant") != std::string::npos);
    CHECK(first.output.find("configuration:") != std::string::npos);
    const CliResult second = run_cli("gen-plant --seed 7 --out " + b);
    CHECK(second.exit_code == 0);
    CHECK(slurp(a) == slurp(b));
    std::remove(a.c_str());
    std::remove(b.c_str());
}

TEST_CASE("cli: gen-plant rejects an unstable spectral norm target") {
    const CliResult result = run_cli("gen-plant --a-norm 1.5");
    CHECK(result.exit_code == 2);
    CHECK(result.output.find("a-norm") != std::string::npos);
}

TEST_CASE("cli: select-params prints the closed forms") {
    const CliResult feasible =
        run_cli("select-params --L 1 --Mphi 1 --mu 1e-12 --p 4 --eps 1 --eps-phi 1");
    CHECK(feasible.exit_code == 0);
    CHECK(feasible.output.find("eta    = 0.0078125") != std::string::npos);
    CHECK(feasible.output.find("verdict = feasible") != std::string::npos);

    const CliResult infeasible =
        run_cli("select-params --L 1 --Mphi 1 --mu 1 --p 4 --eps 0.01 --eps-phi 0.01");
    CHECK(infeasible.exit_code == 3);
    CHECK(infeasible.output.find("infeasible") != std::string::npos);

    const CliResult bad = run_cli("select-params --L -1 --Mphi 1 --mu 1 --p 4 --eps 1 "
                                  "--eps-phi 1");
    CHECK(bad.exit_code == 2);
}

TEST_CASE("cli: usage errors are distinct from validation failures") {
    CHECK(run_cli("").exit_code == 2);
    CHECK(run_cli("no-such-command").exit_code == 2);
    CHECK(run_cli("validate --samples 0").exit_code == 2);
    CHECK(run_cli("validate --suite bogus").exit_code == 2);
    CHECK(run_cli("sweep --param nope --values 1").exit_code == 2);
}

TEST_CASE("cli: compare writes csv and plots, single seed has no envelope") {
    const std::string csv = temp_path("zofo_cli_cmp.csv");
    const std::string svg = temp_path("zofo_cli_cmp.svg");
    const std::string svg_gap = temp_path("zofo_cli_cmp-gap.svg");
    const CliResult result = run_cli("compare --seeds 1 --budget 400 --out-csv " + csv +
                                     " --out-plot " + svg);
    CHECK(result.exit_code == 0);
    CHECK(result.output.find("final grad^2") != std::string::npos);

    const std::string csv_text = slurp(csv);
    CHECK(csv_text.rfind("method,seed,update_index,plant_step,grad_norm_sq,optimality_gap",
                         0) == 0);
    const std::string svg_text = slurp(svg);
    CHECK(svg_text.find("<svg") != std::string::npos);
    CHECK(svg_text.find("<polygon") == std::string::npos); // single seed
    CHECK(slurp(svg_gap).find("<svg") != std::string::npos);
    std::remove(csv.c_str());
    std::remove(svg.c_str());
    std::remove(svg_gap.c_str());
}

TEST_CASE("cli: plot renders an exported csv") {
    const std::string csv = temp_path("zofo_cli_plot.csv");
    const std::string svg = temp_path("zofo_cli_plot.svg");
    CHECK(run_cli("run --method exact_gradient --eta 1e-3 --budget 200 --out-csv " + csv)
              .exit_code == 0);
    const CliResult plotted =
        run_cli("plot --in-csv " + csv + " --out " + svg + " --metric gap --axis plant-steps");
    CHECK(plotted.exit_code == 0);
    CHECK(slurp(svg).find("<svg") != std::string::npos);
    std::remove(csv.c_str());
    std::remove(svg.c_str());
}

TEST_CASE("cli: io failures exit with the io code") {
    const CliResult result =
        run_cli("run --method exact_gradient --eta 1e-3 --budget 200 --out-csv "
                "/nonexistent-dir/zofo.csv");
    CHECK(result.exit_code == 5);
    CHECK(run_cli("plot --in-csv /nonexistent-dir/zofo.csv --out /tmp/zofo_x.svg")
              .exit_code == 5);
}

TEST_CASE("cli: runs accept a pinned instance config") {
    const std::string config = temp_path("zofo_cli_inst.json");
    const std::string csv_a = temp_path("zofo_cli_cfg_a.csv");
    const std::string csv_b = temp_path("zofo_cli_cfg_b.csv");
    CHECK(run_cli("gen-plant --seed 5 --out " + config).exit_code == 0);
    CHECK(run_cli("run --config " + config +
                  " --method exact_gradient --eta 1e-3 --budget 300 --out-csv " + csv_a)
              .exit_code == 0);
    // The same instance generated from seeds gives the same series.
    CHECK(run_cli("run --plant-seed 5 --objective-seed 5 --method exact_gradient "
                  "--eta 1e-3 --budget 300 --out-csv " +
                  csv_b)
              .exit_code == 0);
    CHECK(slurp(csv_a) == slurp(csv_b));
    CHECK(run_cli("run --config /nonexistent/inst.json --method exact_gradient --eta 1e-3")
              .exit_code == 5);
    std::remove(config.c_str());
    std::remove(csv_a.c_str());
    std::remove(csv_b.c_str());
}

TEST_CASE("cli: compare honours file-provided experiment settings") {
    const std::string config = temp_path("zofo_cli_exp.json");
    CHECK(run_cli("gen-plant --seed 2 --out " + config).exit_code == 0);
    // splice an experiment section into the instance file
    std::string text = slurp(config);
    text.insert(1, "\"experiment\": {\"seeds\": 2, \"budget\": 600},");
    {
        std::ofstream out(config);
        out << text;
    }
    const CliResult from_file = run_cli("compare --config " + config);
    CHECK(from_file.exit_code == 0);
    CHECK(from_file.output.find("seeds = 2") != std::string::npos);
    CHECK(from_file.output.find("budget = 600") != std::string::npos);
    // an explicit flag overrides the file
    const CliResult overridden = run_cli("compare --config " + config + " --budget 800");
    CHECK(overridden.exit_code == 0);
    CHECK(overridden.output.find("budget = 800") != std::string::npos);
    std::remove(config.c_str());
}

TEST_CASE("cli: validate runs a small lemmas suite") {
    const CliResult result = run_cli("validate --suite lemmas --samples 2000 --seed 0");
    CHECK(result.exit_code == 0);
    CHECK(result.output.find("all passed") != std::string::npos);
}
