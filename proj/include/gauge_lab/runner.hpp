#pragma once

// Executes a scenario: runs its experiment kind, evaluates the declared checks
// and writes the artifacts plus report.json into the output directory.

#include "gauge_lab/scenario.hpp"

#include <cstdint>
#include <filesystem>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace gauge_lab {

/// Raised when an experiment fails; the message names the scenario.
class RunError : public Error {
public:
    using Error::Error;
};

/// A metric is a number or a label (equivalence verdicts).
using MetricValue = std::variant<double, std::string>;

struct CheckResult {
    std::string id;
    std::string metric;
    std::string comparison;  // "max", "min", "range", "expect" or "equals"
    MetricValue measured{std::numeric_limits<double>::quiet_NaN()};
    std::optional<double> min;
    std::optional<double> max;
    std::optional<double> expect;
    std::optional<double> tol;
    std::string equals;
    bool pass{false};
};

struct RunReport {
    std::string scenario;
    std::string kind;
    double wall_clock_seconds{0.0};
    std::vector<CheckResult> checks;
    std::map<std::string, MetricValue> metrics;
    std::vector<std::string> artifacts;  // relative to the output directory
    std::vector<std::string> warnings;

    [[nodiscard]] bool passed() const;
};

struct RunOptions {
    /// Overrides experiment.seed.
    std::optional<std::uint64_t> seed;
    /// Skip writing artifacts (report.json is still produced when out_dir is set).
    bool write_artifacts{true};
};

/// Runs the scenario. With an empty out_dir nothing is written.
[[nodiscard]] RunReport run(const Scenario& scenario, const std::filesystem::path& out_dir,
                            const RunOptions& options = {});

/// JSON text of the report, numbers rounded to 12 significant digits, non-finite
/// values as null. The wall clock is left out so identical runs give identical files.
[[nodiscard]] std::string report_json(const RunReport& report);

/// Evaluates one check against a metric table (missing metrics fail).
[[nodiscard]] CheckResult evaluate_check(const Scenario& scenario, const std::string& check_id,
                                         const std::map<std::string, MetricValue>& metrics);

enum class PlotKind { pattern, arrivals, heatmap };

[[nodiscard]] PlotKind parse_plot_kind(const std::string& name);

/// Plot-ready CSV from a run artifact:
///   pattern  (pattern.csv)   -> x,intensity_flux_on,intensity_flux_off
///   arrivals (arrivals.json) -> radius,t_arrival_lorenz,t_arrival_coulomb
///   heatmap  (field CSV)     -> x,y,value, every `stride`-th node (vector fields give |v|)
void emit_plot_data(const std::filesystem::path& artifact, PlotKind kind, const std::filesystem::path& out,
                    int stride = 4);

}  // namespace gauge_lab
