#include "gauge_lab/runner.hpp"
#include "gauge_lab/scenario.hpp"

#include <catch_amalgamated.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

using namespace gauge_lab;
namespace fs = std::filesystem;

namespace {

const char* minimal_ab = R"(# minimal
[scenario]
name = tiny
kind = ab-phase

[solenoid]
flux = 0.5

[path.a]
type = arc
radius = 1
theta0 = 3.141592653589793
theta1 = 6.283185307179586

[path.b]
type = arc
radius = 1
theta0 = 3.141592653589793
theta1 = 0

[experiment]
paths = a b

[check.phase]
metric = delta_s
expect = -0.5
tol = 1e-6
)";

const char* small_propagate = R"([scenario]
name = small_front
kind = propagate

[grid]
nx = 64
ny = 64
h = 1

[solenoid]
radius = 4
flux = 1

[fdtd]
dt = 0.35
t_end = 14
damping_cells = 8
front_margin = 4

[probes]
radii = 8 12
)";

std::string replace(std::string text, const std::string& from, const std::string& to) {
    const auto pos = text.find(from);
    REQUIRE(pos != std::string::npos);
    return text.replace(pos, from.size(), to);
}

ParseError parse_failure(const std::string& text) {
    try {
        (void)parse_scenario(text);
    } catch (const ParseError& e) {
        return e;
    }
    FAIL("scenario was accepted: " << text);
    throw;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch_dir(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("gauge_lab_test_" + name);
    fs::remove_all(dir);
    return dir;
}

}  // namespace

TEST_CASE("minimal scenario parses", "[scenario]") {
    const auto s = parse_scenario(minimal_ab);
    CHECK(s.name() == "tiny");
    CHECK(s.kind() == "ab-phase");
    CHECK(s.ids("path") == std::vector<std::string>{"a", "b"});
    CHECK(s.real("solenoid", "flux") == 0.5);
    CHECK(s.words("experiment", "paths") == std::vector<std::string>{"a", "b"});
    CHECK(s.real_or("physics", "kappa", 1.0) == 1.0);
    CHECK_THROWS_AS(s.real("solenoid", "radius"), ParseError);
}

TEST_CASE("parse errors carry a code and a line", "[scenario]") {
    const std::string base = minimal_ab;

    auto e = parse_failure(replace(base, "flux = 0.5", "flux 0.5"));
    CHECK(e.code() == ParseErrorCode::syntax);
    CHECK(e.line() == 7);

    e = parse_failure(replace(base, "flux = 0.5", "flux = 0.5\ncolour = red"));
    CHECK(e.code() == ParseErrorCode::unknown_key);
    CHECK(e.line() == 8);
    CHECK(e.key() == "colour");

    e = parse_failure(replace(base, "[solenoid]\nflux = 0.5", ""));
    CHECK(e.code() == ParseErrorCode::missing_section);
    CHECK(e.key() == "solenoid");

    e = parse_failure(replace(base, "radius = 1\ntheta0", "radius = -1\ntheta0"));
    CHECK(e.code() == ParseErrorCode::invariant_violation);

    e = parse_failure(replace(base, "paths = a b", "paths = a c"));
    CHECK(e.code() == ParseErrorCode::resolution_error);
    CHECK(e.key() == "paths");
    CHECK(e.line() == 22);

    e = parse_failure(replace(base, "metric = delta_s", "metric = nothing_like_this"));
    CHECK(e.code() == ParseErrorCode::resolution_error);

    e = parse_failure(replace(base, "flux = 0.5", "flux = half"));
    CHECK(e.code() == ParseErrorCode::syntax);

    e = parse_failure(base + "\n[solenoid]\nflux = 1\n");
    CHECK(e.code() == ParseErrorCode::syntax);

    e = parse_failure(replace(small_propagate, "dt = 0.35", "dt = 0.5"));
    CHECK(e.code() == ParseErrorCode::cfl_violation);
    CHECK(e.key() == "dt");
    CHECK(e.line() == 15);

    CHECK(to_string(ParseErrorCode::cfl_violation) == "cfl_violation");
}

TEST_CASE("bundled scenarios parse and round trip", "[scenario]") {
    const auto files = bundled_scenarios();
    REQUIRE(files.size() >= 10);
    std::set<std::string> kinds;
    for (const auto& f : files) {
        INFO(f.string());
        const auto s = load_scenario(f);
        kinds.insert(s.kind());
        const auto again = parse_scenario(serialize(s));
        CHECK(again == s);
        CHECK(serialize(again) == serialize(s));
        // every check names a metric the kind reports
        const auto metrics = available_metrics(s);
        for (const auto& id : s.ids("check")) {
            const auto m = s.text("check." + id, "metric");
            CHECK(std::find(metrics.begin(), metrics.end(), m) != metrics.end());
        }
    }
    for (const auto& k : scenario_kinds()) CHECK(kinds.count(k) == 1);
}

TEST_CASE("check evaluation", "[runner]") {
    const auto s = parse_scenario(std::string(minimal_ab) + R"(
[check.bounded]
metric = delta_s_error
max = 1e-6

[check.lower]
metric = delta_s
min = -1
max = 0

[check.label]
metric = delta_s
equals = WIDE_ONLY
)");
    std::map<std::string, MetricValue> metrics{{"delta_s", -0.5000001}, {"delta_s_error", 1e-7}};
    auto r = evaluate_check(s, "phase", metrics);
    CHECK(r.pass);
    CHECK(r.comparison == "expect");
    CHECK(evaluate_check(s, "bounded", metrics).pass);
    r = evaluate_check(s, "lower", metrics);
    CHECK(r.comparison == "range");
    CHECK(r.pass);
    CHECK_FALSE(evaluate_check(s, "label", metrics).pass);

    metrics["delta_s"] = -0.6;
    CHECK_FALSE(evaluate_check(s, "phase", metrics).pass);
    metrics["delta_s"] = std::numeric_limits<double>::quiet_NaN();
    CHECK_FALSE(evaluate_check(s, "phase", metrics).pass);
    metrics.erase("delta_s");
    CHECK_FALSE(evaluate_check(s, "phase", metrics).pass);
}

TEST_CASE("run writes a report with every check once", "[runner]") {
    const auto dir = scratch_dir("ab");
    const auto s = load_scenario(bundled_scenario_dir() / "ab_phase_basic.cfg");
    const auto report = run(s, dir);
    CHECK(report.passed());
    CHECK(report.scenario == "ab_phase_basic");
    REQUIRE(report.checks.size() == s.ids("check").size());
    std::set<std::string> seen;
    for (const auto& c : report.checks) seen.insert(c.id);
    CHECK(seen.size() == report.checks.size());
    CHECK(std::get<double>(report.metrics.at("delta_s")) == Catch::Approx(-1.0).margin(1e-6));

    const auto json = nlohmann::json::parse(slurp(dir / "report.json"));
    CHECK(json["scenario"] == "ab_phase_basic");
    CHECK(json["checks"].size() == report.checks.size());
    CHECK_FALSE(json.contains("wall_clock_seconds"));
    for (const auto& a : report.artifacts) CHECK(fs::exists(dir / a));

    const auto tiny = run(parse_scenario(minimal_ab), {});
    CHECK(tiny.passed());
    CHECK(tiny.artifacts.empty());
}

TEST_CASE("runs are deterministic", "[runner]") {
    const auto s = load_scenario(bundled_scenario_dir() / "flux_loop.cfg");
    const auto d1 = scratch_dir("det1");
    const auto d2 = scratch_dir("det2");
    const auto r1 = run(s, d1);
    const auto r2 = run(s, d2);
    REQUIRE(r1.artifacts == r2.artifacts);
    CHECK(slurp(d1 / "report.json") == slurp(d2 / "report.json"));
    for (const auto& a : r1.artifacts) CHECK(slurp(d1 / a) == slurp(d2 / a));

    RunOptions other;
    other.seed = 99;
    const auto r3 = run(s, {}, other);
    CHECK(r3.passed());
}

TEST_CASE("failing checks are reported, not thrown", "[runner]") {
    const auto s = parse_scenario(replace(minimal_ab, "expect = -0.5", "expect = 0.5"));
    const auto r = run(s, {});
    CHECK_FALSE(r.passed());
    REQUIRE(r.checks.size() == 1);
    CHECK_FALSE(r.checks[0].pass);
}

TEST_CASE("truncated runs carry a warning", "[runner]") {
    const auto s = parse_scenario(replace(small_propagate, "t_end = 14", "t_end = 60"));
    const auto r = run(s, {});
    CHECK_FALSE(r.warnings.empty());
    CHECK(std::get<double>(r.metrics.at("truncated")) == 1.0);
}

TEST_CASE("plot data", "[runner]") {
    CHECK(parse_plot_kind("heatmap") == PlotKind::heatmap);
    CHECK_THROWS_AS(parse_plot_kind("radar"), Error);

    const auto dir = scratch_dir("plot");
    const auto fringe = load_scenario(bundled_scenario_dir() / "fringe_shift.cfg");
    (void)run(fringe, dir);
    emit_plot_data(dir / "pattern.csv", PlotKind::pattern, dir / "plot_pattern.csv");
    std::ifstream in(dir / "plot_pattern.csv");
    std::string header;
    std::getline(in, header);
    CHECK(header == "x,intensity_flux_on,intensity_flux_off");
    std::string row;
    int rows = 0;
    while (std::getline(in, row)) ++rows;
    CHECK(rows == fringe.integer_or("pattern", "screen_points", 2001));

    const auto front = scratch_dir("plot_front");
    const auto r = run(parse_scenario(small_propagate), front);
    const auto field = std::find_if(r.artifacts.begin(), r.artifacts.end(), [](const std::string& a) { return a == "a_final.csv"; });
    REQUIRE(field != r.artifacts.end());
    emit_plot_data(front / *field, PlotKind::heatmap, front / "heat.csv", 8);
    std::ifstream heat(front / "heat.csv");
    std::getline(heat, header);
    CHECK(header == "x,y,value");
    emit_plot_data(front / "arrivals.json", PlotKind::arrivals, front / "arrivals.csv");
    std::ifstream arr(front / "arrivals.csv");
    std::getline(arr, header);
    CHECK(header == "radius,t_arrival_lorenz,t_arrival_coulomb");

    CHECK_THROWS_AS(emit_plot_data(front / "missing.csv", PlotKind::heatmap, front / "x.csv"), Error);
}
