#include "gauge_lab/kernels.hpp"
#include "gauge_lab/runner.hpp"
#include "gauge_lab/scenario.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

namespace {

using namespace gauge_lab;

constexpr int kExitChecksFailed = 1;
constexpr int kExitInvalidConfig = 2;
constexpr int kExitRunError = 3;

std::string measured_text(const MetricValue& m) {
    if (const auto* s = std::get_if<std::string>(&m)) return *s;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", std::get<double>(m));
    return buf;
}

int report_parse_error(const ParseError& e) {
    std::cerr << "invalid scenario: " << e.what() << '\n';
    return kExitInvalidConfig;
}

int cmd_run(const std::string& config, const std::string& out, std::optional<std::uint64_t> seed, bool verbose) {
    Scenario s;
    try {
        s = load_scenario(config);
    } catch (const ParseError& e) {
        return report_parse_error(e);
    }
    RunOptions opt;
    opt.seed = seed;
    RunReport r;
    try {
        r = run(s, out, opt);
    } catch (const std::exception& e) {
        std::cerr << "run failed: " << e.what() << '\n';
        return kExitRunError;
    }
    for (const auto& w : r.warnings) std::cerr << "warning: " << w << '\n';
    if (verbose) {
        for (const auto& c : r.checks)
            std::cout << (c.pass ? "PASS " : "FAIL ") << c.id << "  " << c.metric << " = " << measured_text(c.measured)
                      << '\n';
    }
    std::size_t failed = 0;
    for (const auto& c : r.checks) failed += c.pass ? 0 : 1;
    std::printf("%s: %zu/%zu checks passed, wall clock %.12g s\n", r.scenario.c_str(), r.checks.size() - failed,
                r.checks.size(), r.wall_clock_seconds);
    return failed == 0 ? 0 : kExitChecksFailed;
}

int cmd_list() {
    for (const auto& p : bundled_scenarios()) {
        try {
            const Scenario s = load_scenario(p);
            std::cout << p.stem().string() << "  [" << s.kind() << "]  " << s.text_or("scenario", "description", "")
                      << '\n';
        } catch (const ParseError& e) {
            std::cout << p.stem().string() << "  (invalid: " << e.what() << ")\n";
        }
    }
    return 0;
}

int cmd_validate(const std::string& config) {
    try {
        const Scenario s = load_scenario(config);
        std::cout << "ok: " << s.name() << " [" << s.kind() << "], " << s.ids("check").size() << " checks\n";
        return 0;
    } catch (const ParseError& e) {
        return report_parse_error(e);
    } catch (const Error& e) {
        std::cerr << e.what() << '\n';
        return kExitInvalidConfig;
    }
}

}  // namespace

int main(int argc, char** argv) {
    apply_thread_env();
    CLI::App app{"gauge-lab: gauge classes, Aharonov-Bohm phases and wavefront diagnostics"};
    app.require_subcommand(1);

    auto* run_cmd = app.add_subcommand("run", "Run a scenario and write its artifacts and report.json");
    std::string config, out;
    std::optional<std::uint64_t> seed;
    bool check = false;
    run_cmd->add_option("--config", config, "Scenario file")->required()->check(CLI::ExistingFile);
    run_cmd->add_option("--out", out, "Output directory")->required();
    run_cmd->add_option("--seed", seed, "Seed for randomized loop families");
    run_cmd->add_flag("--check", check, "Print one PASS/FAIL line per check");

    app.add_subcommand("list-scenarios", "List the bundled scenarios");

    auto* validate_cmd = app.add_subcommand("validate", "Parse and validate a scenario file");
    validate_cmd->add_option("--config", config, "Scenario file")->required()->check(CLI::ExistingFile);

    auto* plot_cmd = app.add_subcommand("plot", "Turn a run artifact into plot-ready CSV");
    std::string artifact, kind, plot_out;
    int stride = 4;
    plot_cmd->add_option("--artifact", artifact, "pattern.csv, arrivals.json or a field CSV")
        ->required()
        ->check(CLI::ExistingFile);
    plot_cmd->add_option("--kind", kind, "pattern | arrivals | heatmap")->required();
    plot_cmd->add_option("--out", plot_out, "Output CSV")->required();
    plot_cmd->add_option("--stride", stride, "Heatmap node stride")->check(CLI::PositiveNumber);

    CLI11_PARSE(app, argc, argv);

    if (*run_cmd) return cmd_run(config, out, seed, check);
    if (app.got_subcommand("list-scenarios")) return cmd_list();
    if (*validate_cmd) return cmd_validate(config);
    if (*plot_cmd) {
        try {
            emit_plot_data(artifact, parse_plot_kind(kind), plot_out, stride);
            return 0;
        } catch (const std::exception& e) {
            std::cerr << "plot failed: " << e.what() << '\n';
            return kExitRunError;
        }
    }
    return 0;
}
