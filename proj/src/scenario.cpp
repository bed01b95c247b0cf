#include "gauge_lab/scenario.hpp"

#include "gauge_lab/propagation.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace gauge_lab {

std::string to_string(ParseErrorCode code) {
    switch (code) {
        case ParseErrorCode::syntax: return "syntax";
        case ParseErrorCode::unknown_key: return "unknown_key";
        case ParseErrorCode::missing_section: return "missing_section";
        case ParseErrorCode::invariant_violation: return "invariant_violation";
        case ParseErrorCode::resolution_error: return "resolution_error";
        case ParseErrorCode::cfl_violation: return "cfl_violation";
    }
    return "syntax";
}

namespace {

std::string located(ParseErrorCode code, int line, const std::string& key, const std::string& message) {
    std::string s = "[" + to_string(code) + "]";
    if (line > 0) s += " line " + std::to_string(line);
    if (!key.empty()) s += " key '" + key + "'";
    return s + ": " + message;
}

}  // namespace

ParseError::ParseError(ParseErrorCode code, int line, std::string key, const std::string& message)
    : Error(located(code, line, key, message)), code_(code), line_(line), key_(std::move(key)) {}

const ScenarioEntry* ScenarioSection::find(std::string_view key) const {
    for (const auto& e : entries)
        if (e.key == key) return &e;
    return nullptr;
}

namespace {

enum class ValueType { text, real, integer, vec2, reals, integers, words, tuples };

using Schema = std::map<std::string, ValueType, std::less<>>;

const std::map<std::string, Schema, std::less<>>& schemas() {
    using V = ValueType;
    static const std::map<std::string, Schema, std::less<>> s = {
        {"scenario", {{"name", V::text}, {"kind", V::text}, {"description", V::text}}},
        {"grid",
         {{"nx", V::integer}, {"ny", V::integer}, {"h", V::real}, {"dx", V::real}, {"dy", V::real},
          {"center", V::vec2}, {"x0", V::real}, {"y0", V::real}, {"exclude_radius", V::real}}},
        {"physics", {{"c", V::real}, {"kappa", V::real}, {"lambda_b", V::real}, {"l", V::real}, {"d", V::real}}},
        {"solenoid",
         {{"center", V::vec2}, {"radius", V::real}, {"flux", V::real}, {"t_on", V::real}, {"ramp", V::real},
          {"model", V::text}}},
        {"fdtd",
         {{"dt", V::real}, {"t_end", V::real}, {"damping_cells", V::integer}, {"damping_strength", V::real},
          {"cfl_max", V::real}, {"frame_every", V::integer}, {"front_margin", V::integer}}},
        {"probes",
         {{"radii", V::reals}, {"threshold", V::real}, {"late_loop_radius", V::real}, {"noise_floor", V::real}}},
        {"pattern", {{"screen_half_width", V::real}, {"screen_points", V::integer}, {"fluxes", V::reals}}},
        {"experiment",
         {{"paths", V::words}, {"loops", V::words}, {"random_loops", V::integer}, {"seed", V::integer},
          {"source", V::text}, {"stokes_loop", V::text}, {"pairs", V::words}, {"levels", V::integers},
          {"family", V::words}, {"width", V::real}, {"radii", V::reals}, {"k", V::vec2}, {"amplitude", V::real},
          {"phase", V::real}, {"dt_ratio", V::real}, {"loop_radius", V::real}, {"time", V::real}}},
        {"path",
         {{"type", V::text}, {"vertices", V::tuples}, {"closed", V::text}, {"center", V::vec2}, {"radius", V::real},
          {"segments", V::integer}, {"turns", V::integer}, {"theta0", V::real}, {"theta1", V::real}}},
        {"gauge",
         {{"type", V::text}, {"terms", V::tuples}, {"k", V::vec2}, {"amplitude", V::real}, {"phase", V::real},
          {"flux", V::real}, {"center", V::vec2}, {"field", V::text}, {"c0", V::real}}},
        {"state", {{"base", V::text}, {"gauges", V::words}, {"perturb", V::text}, {"perturb_amplitude", V::real}}},
        {"check",
         {{"metric", V::text}, {"max", V::real}, {"min", V::real}, {"expect", V::real}, {"tol", V::real},
          {"equals", V::text}}},
    };
    return s;
}

std::string_view section_kind(std::string_view name) {
    const auto dot = name.find('.');
    return dot == std::string_view::npos ? name : name.substr(0, dot);
}

bool is_named_kind(std::string_view kind) {
    return kind == "path" || kind == "gauge" || kind == "state" || kind == "check";
}

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_ws(std::string_view s) {
    std::vector<std::string> out;
    std::istringstream is{std::string(s)};
    std::string w;
    while (is >> w) out.push_back(w);
    return out;
}

bool parse_double(const std::string& s, double& out) {
    const char* b = s.data();
    const char* e = b + s.size();
    auto [p, ec] = std::from_chars(b, e, out);
    return ec == std::errc() && p == e && std::isfinite(out);
}

bool parse_long(const std::string& s, long& out) {
    const char* b = s.data();
    const char* e = b + s.size();
    auto [p, ec] = std::from_chars(b, e, out);
    return ec == std::errc() && p == e;
}

[[noreturn]] void fail(ParseErrorCode code, int line, const std::string& key, const std::string& msg) {
    throw ParseError(code, line, key, msg);
}

std::vector<double> numbers(const ScenarioEntry& e) {
    std::vector<double> out;
    for (const auto& w : split_ws(e.value)) {
        double v = 0.0;
        if (!parse_double(w, v)) fail(ParseErrorCode::syntax, e.line, e.key, "'" + w + "' is not a number");
        out.push_back(v);
    }
    return out;
}

std::vector<std::vector<double>> groups(const ScenarioEntry& e) {
    std::vector<std::vector<double>> out;
    std::string part;
    std::istringstream is(e.value);
    while (std::getline(is, part, ';')) {
        if (trim(part).empty()) continue;
        ScenarioEntry sub{e.key, part, e.line};
        out.push_back(numbers(sub));
    }
    return out;
}

void check_type(const ScenarioEntry& e, ValueType t) {
    switch (t) {
        case ValueType::text:
            if (e.value.empty()) fail(ParseErrorCode::syntax, e.line, e.key, "empty value");
            break;
        case ValueType::real: {
            double v = 0.0;
            if (!parse_double(trim(e.value), v)) fail(ParseErrorCode::syntax, e.line, e.key, "expected a number");
            break;
        }
        case ValueType::integer: {
            long v = 0;
            if (!parse_long(trim(e.value), v)) fail(ParseErrorCode::syntax, e.line, e.key, "expected an integer");
            break;
        }
        case ValueType::vec2:
            if (numbers(e).size() != 2) fail(ParseErrorCode::syntax, e.line, e.key, "expected two numbers");
            break;
        case ValueType::reals:
            if (numbers(e).empty()) fail(ParseErrorCode::syntax, e.line, e.key, "expected a list of numbers");
            break;
        case ValueType::integers:
            for (const auto& w : split_ws(e.value)) {
                long v = 0;
                if (!parse_long(w, v)) fail(ParseErrorCode::syntax, e.line, e.key, "'" + w + "' is not an integer");
            }
            if (split_ws(e.value).empty()) fail(ParseErrorCode::syntax, e.line, e.key, "expected integers");
            break;
        case ValueType::words:
            if (split_ws(e.value).empty()) fail(ParseErrorCode::syntax, e.line, e.key, "expected a list of names");
            break;
        case ValueType::tuples:
            if (groups(e).empty()) fail(ParseErrorCode::syntax, e.line, e.key, "expected ';'-separated groups");
            break;
    }
}

std::vector<ScenarioSection> tokenize(std::string_view text) {
    std::vector<ScenarioSection> sections;
    std::set<std::string, std::less<>> seen;
    std::istringstream is{std::string(text)};
    std::string raw;
    int line = 0;
    while (std::getline(is, raw)) {
        ++line;
        const std::string s = trim(raw);
        if (s.empty() || s[0] == '#') continue;
        if (s.front() == '[') {
            if (s.back() != ']') fail(ParseErrorCode::syntax, line, "", "unterminated section header");
            std::string name = trim(std::string_view(s).substr(1, s.size() - 2));
            if (name.empty()) fail(ParseErrorCode::syntax, line, "", "empty section name");
            const auto kind = section_kind(name);
            if (!schemas().contains(kind)) fail(ParseErrorCode::unknown_key, line, name, "unknown section");
            if (is_named_kind(kind) && (name.size() <= kind.size() + 1))
                fail(ParseErrorCode::syntax, line, name, "declaration needs an id, e.g. [" + std::string(kind) + ".x]");
            if (!is_named_kind(kind) && name != kind)
                fail(ParseErrorCode::syntax, line, name, "section '" + std::string(kind) + "' takes no id");
            if (!seen.insert(name).second) fail(ParseErrorCode::syntax, line, name, "duplicate section");
            sections.push_back({name, line, {}});
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos) fail(ParseErrorCode::syntax, line, "", "expected 'key = value'");
        if (sections.empty()) fail(ParseErrorCode::syntax, line, "", "key outside of any section");
        ScenarioEntry e{trim(std::string_view(s).substr(0, eq)), trim(std::string_view(s).substr(eq + 1)), line};
        if (e.key.empty()) fail(ParseErrorCode::syntax, line, "", "empty key");
        auto& sec = sections.back();
        const auto& schema = schemas().at(std::string(section_kind(sec.name)));
        const auto it = schema.find(e.key);
        if (it == schema.end()) fail(ParseErrorCode::unknown_key, line, e.key, "not valid in [" + sec.name + "]");
        if (sec.find(e.key)) fail(ParseErrorCode::syntax, line, e.key, "duplicate key");
        check_type(e, it->second);
        sec.entries.push_back(std::move(e));
    }
    return sections;
}

}  // namespace

Scenario::Scenario(std::vector<ScenarioSection> sections) : sections_(std::move(sections)) {
    if (has("scenario", "name")) name_ = text("scenario", "name");
    if (has("scenario", "kind")) kind_ = text("scenario", "kind");
}

bool Scenario::has(std::string_view sec) const {
    return std::any_of(sections_.begin(), sections_.end(), [&](const auto& s) { return s.name == sec; });
}

bool Scenario::has(std::string_view sec, std::string_view key) const {
    for (const auto& s : sections_)
        if (s.name == sec) return s.find(key) != nullptr;
    return false;
}

const ScenarioSection& Scenario::section(std::string_view name) const {
    for (const auto& s : sections_)
        if (s.name == name) return s;
    fail(ParseErrorCode::missing_section, 0, std::string(name), "section [" + std::string(name) + "] is missing");
}

std::vector<std::string> Scenario::ids(std::string_view prefix) const {
    std::vector<std::string> out;
    for (const auto& s : sections_)
        if (section_kind(s.name) == prefix && s.name.size() > prefix.size()) out.push_back(s.name.substr(prefix.size() + 1));
    return out;
}

const ScenarioEntry& Scenario::entry(std::string_view sec, std::string_view key) const {
    const auto& s = section(sec);
    const auto* e = s.find(key);
    if (!e) fail(ParseErrorCode::resolution_error, s.line, std::string(key), "required in [" + s.name + "]");
    return *e;
}

std::string Scenario::text(std::string_view sec, std::string_view key) const { return entry(sec, key).value; }

std::string Scenario::text_or(std::string_view sec, std::string_view key, std::string fallback) const {
    return has(sec, key) ? text(sec, key) : fallback;
}

double Scenario::real(std::string_view sec, std::string_view key) const {
    const auto& e = entry(sec, key);
    double v = 0.0;
    if (!parse_double(trim(e.value), v)) fail(ParseErrorCode::syntax, e.line, e.key, "expected a number");
    return v;
}

double Scenario::real_or(std::string_view sec, std::string_view key, double fallback) const {
    return has(sec, key) ? real(sec, key) : fallback;
}

long Scenario::integer(std::string_view sec, std::string_view key) const {
    const auto& e = entry(sec, key);
    long v = 0;
    if (!parse_long(trim(e.value), v)) fail(ParseErrorCode::syntax, e.line, e.key, "expected an integer");
    return v;
}

long Scenario::integer_or(std::string_view sec, std::string_view key, long fallback) const {
    return has(sec, key) ? integer(sec, key) : fallback;
}

Vec2 Scenario::vec2(std::string_view sec, std::string_view key) const {
    const auto& e = entry(sec, key);
    const auto v = numbers(e);
    if (v.size() != 2) fail(ParseErrorCode::syntax, e.line, e.key, "expected two numbers");
    return {v[0], v[1]};
}

Vec2 Scenario::vec2_or(std::string_view sec, std::string_view key, Vec2 fallback) const {
    return has(sec, key) ? vec2(sec, key) : fallback;
}

std::vector<double> Scenario::reals(std::string_view sec, std::string_view key) const {
    return numbers(entry(sec, key));
}

std::vector<long> Scenario::integers(std::string_view sec, std::string_view key) const {
    std::vector<long> out;
    for (double v : numbers(entry(sec, key))) out.push_back(std::lround(v));
    return out;
}

std::vector<std::string> Scenario::words(std::string_view sec, std::string_view key) const {
    return split_ws(entry(sec, key).value);
}

std::vector<std::vector<double>> Scenario::tuples(std::string_view sec, std::string_view key) const {
    return groups(entry(sec, key));
}

Grid2 Scenario::grid() const {
    Grid2 g;
    g.nx = static_cast<int>(integer("grid", "nx"));
    g.ny = static_cast<int>(integer("grid", "ny"));
    const double h = real_or("grid", "h", 0.0);
    g.dx = has("grid", "dx") ? real("grid", "dx") : h;
    g.dy = has("grid", "dy") ? real("grid", "dy") : h;
    if (has("grid", "x0") || has("grid", "y0")) {
        g.x0 = real_or("grid", "x0", 0.0);
        g.y0 = real_or("grid", "y0", 0.0);
    } else {
        const Vec2 c = vec2_or("grid", "center", {});
        g.x0 = c.x - g.dx * (g.nx / 2);
        g.y0 = c.y - g.dy * (g.ny / 2);
    }
    double r = real_or("grid", "exclude_radius", 0.0);
    if (has("solenoid")) {
        r = std::max(r, real_or("solenoid", "radius", 0.0));
        if (r > 0.0) g.excluded = Disk{vec2_or("solenoid", "center", {}), r};
    }
    return g;
}

const std::vector<std::string>& scenario_kinds() {
    static const std::vector<std::string> k = {"ab-phase",        "gauge-classify",  "propagate",
                                               "locality-report", "pattern",         "gauge-invariance",
                                               "residual-freedom", "convergence",    "kernel-causality"};
    return k;
}

std::vector<std::string> available_metrics(const Scenario& s) {
    const std::string& k = s.kind();
    std::vector<std::string> m;
    if (k == "ab-phase") {
        if (s.has("experiment", "paths")) m.insert(m.end(), {"delta_s", "expected_delta_s", "delta_s_error"});
        if (s.has("experiment", "loops")) {
            m.push_back("loop_max_error");
            for (const auto& id : s.words("experiment", "loops")) m.push_back("loop." + id);
        }
        if (s.has("experiment", "random_loops")) m.push_back("random_max_rel_error");
        if (s.has("experiment", "stokes_loop")) m.insert(m.end(), {"stokes_flux", "stokes_line", "stokes_rel_diff"});
    } else if (k == "gauge-classify") {
        const auto loops = s.has("experiment", "loops") ? s.words("experiment", "loops") : std::vector<std::string>{};
        for (const auto& p : s.words("experiment", "pairs")) {
            for (const char* f : {"label", "curl_residual", "potential_residual", "scalar_residual", "tolerance"})
                m.push_back(p + "." + f);
            for (const auto& l : loops) m.push_back(p + ".loop." + l);
        }
    } else if (k == "propagate") {
        m = {"speed_a",     "speed_e",        "speed_a_error", "speed_e_error",  "speed_a_stderr",
             "speed_e_stderr", "lorenz_growth", "lorenz_growth_raw", "lorenz_max", "confinement_max",
             "truncated",   "frames"};
        if (s.has("probes", "late_loop_radius")) m.push_back("late_loop_error");
    } else if (k == "locality-report") {
        m = {"speed_lorenz",     "speed_lorenz_error", "speed_coulomb",          "coulomb_instantaneous",
             "coulomb_pre_front", "lorenz_pre_front",  "field_agreement",        "coulomb_divergence_max",
             "lorenz_precursor_max", "coulomb_precursor_max", "frames"};
    } else if (k == "pattern") {
        m = {"max_shift_error_cells", "periodicity_error", "max_expected_shift"};
    } else if (k == "gauge-invariance") {
        m = {"e_change_max", "b_change_max", "e_ratio_min",         "e_ratio_max",
             "b_ratio_min",  "b_ratio_max",  "holonomy_change_max"};
    } else if (k == "residual-freedom") {
        m = {"lorenz_change", "lorenz_bound", "lorenz_change_ratio", "e_change_ratio", "b_change_ratio",
             "holonomy_change_ratio"};
    } else if (k == "convergence") {
        for (const char* op : {"grad", "div", "curl", "fdtd"}) {
            m.push_back(std::string(op) + "_ratio_min");
            m.push_back(std::string(op) + "_ratio_max");
        }
    } else if (k == "kernel-causality") {
        m = {"early_max_ratio", "peak_time_error", "amplitude_spread"};
    }
    return m;
}

namespace {

void require_section(const Scenario& s, const std::string& name) {
    if (!s.has(name))
        fail(ParseErrorCode::missing_section, 0, name, "kind '" + s.kind() + "' needs a [" + name + "] section");
}

void require_key(const Scenario& s, const std::string& sec, const std::string& key) {
    if (!s.has(sec, key))
        fail(ParseErrorCode::missing_section, s.section(sec).line, key, "required in [" + sec + "]");
}

int line_of(const Scenario& s, const std::string& sec, const std::string& key) {
    if (!s.has(sec)) return 0;
    const auto* e = s.section(sec).find(key);
    return e ? e->line : s.section(sec).line;
}

void invariant(bool ok, const Scenario& s, const std::string& sec, const std::string& key, const std::string& msg) {
    if (!ok) fail(ParseErrorCode::invariant_violation, line_of(s, sec, key), key, msg);
}

void resolve(const Scenario& s, const std::string& prefix, const std::string& id, const std::string& sec,
             const std::string& key) {
    if (!s.has(prefix + "." + id))
        fail(ParseErrorCode::resolution_error, line_of(s, sec, key), key,
             "'" + id + "' does not name a [" + prefix + ".<id>] declaration");
}

void validate_grid(const Scenario& s) {
    const auto& g = s.section("grid");
    for (const char* k : {"nx", "ny"}) require_key(s, "grid", k);
    if (!g.find("h") && !(g.find("dx") && g.find("dy"))) require_key(s, "grid", "h");
    invariant(s.integer("grid", "nx") >= 8, s, "grid", "nx", "needs at least 8 nodes");
    invariant(s.integer("grid", "ny") >= 8, s, "grid", "ny", "needs at least 8 nodes");
    const Grid2 grid = s.grid();
    invariant(grid.dx > 0.0 && grid.dy > 0.0, s, "grid", "h", "spacing must be positive");
    try {
        grid.validate();
    } catch (const Error& e) {
        fail(ParseErrorCode::invariant_violation, g.line, "grid", e.what());
    }
}

void validate_declarations(const Scenario& s) {
    for (const auto& id : s.ids("path")) {
        const std::string sec = "path." + id;
        const std::string type = s.text_or(sec, "type", s.has(sec, "vertices") ? "polyline" : "circle");
        if (type == "polyline") {
            require_key(s, sec, "vertices");
            for (const auto& v : s.tuples(sec, "vertices"))
                if (v.size() != 2) fail(ParseErrorCode::syntax, line_of(s, sec, "vertices"), "vertices", "vertices are 'x y' pairs");
            invariant(s.tuples(sec, "vertices").size() >= 2, s, sec, "vertices", "a path needs at least 2 vertices");
            const auto closed = s.text_or(sec, "closed", "false");
            invariant(closed == "true" || closed == "false", s, sec, "closed", "closed is true or false");
        } else if (type == "circle" || type == "arc") {
            require_key(s, sec, "radius");
            invariant(s.real(sec, "radius") > 0.0, s, sec, "radius", "radius must be positive");
            invariant(s.integer_or(sec, "segments", 256) >= 3, s, sec, "segments", "needs at least 3 segments");
            if (type == "arc") {
                require_key(s, sec, "theta0");
                require_key(s, sec, "theta1");
            } else {
                invariant(s.integer_or(sec, "turns", 1) != 0, s, sec, "turns", "turns must be nonzero");
            }
        } else {
            fail(ParseErrorCode::invariant_violation, line_of(s, sec, "type"), "type", "path type is polyline, circle or arc");
        }
    }
    for (const auto& id : s.ids("gauge")) {
        const std::string sec = "gauge." + id;
        require_key(s, sec, "type");
        const auto type = s.text(sec, "type");
        if (type == "polynomial") {
            require_key(s, sec, "terms");
            for (const auto& t : s.tuples(sec, "terms"))
                invariant(t.size() == 4 && t[1] >= 0 && t[2] >= 0 && t[3] >= 0 && t[1] == std::floor(t[1]) &&
                              t[2] == std::floor(t[2]) && t[3] == std::floor(t[3]),
                          s, sec, "terms", "terms are 'coeff px py pt' with non-negative integer powers");
        } else if (type == "plane_wave") {
            require_key(s, sec, "k");
            const Vec2 k = s.vec2(sec, "k");
            invariant(k.x != 0.0 || k.y != 0.0, s, sec, "k", "wave vector must be nonzero");
        } else if (type == "polar") {
            // flux and center default to the solenoid's
        } else if (type == "wide") {
            const auto f = s.text_or(sec, "field", "solenoid");
            invariant(f == "solenoid" || f == "gradient_xy" || f == "rotation", s, sec, "field",
                      "wide field is solenoid, gradient_xy or rotation");
        } else {
            fail(ParseErrorCode::invariant_violation, line_of(s, sec, "type"), "type",
                 "gauge type is polynomial, plane_wave, polar or wide");
        }
    }
    for (const auto& id : s.ids("state")) {
        const std::string sec = "state." + id;
        const auto base = s.text_or(sec, "base", "zero");
        invariant(base == "zero" || base == "solenoid", s, sec, "base", "base is zero or solenoid");
        const auto p = s.text_or(sec, "perturb", "none");
        invariant(p == "none" || p == "bump", s, sec, "perturb", "perturb is none or bump");
        if (s.has(sec, "gauges"))
            for (const auto& g : s.words(sec, "gauges")) resolve(s, "gauge", g, sec, "gauges");
    }
}

void validate_checks(const Scenario& s) {
    const auto metrics = available_metrics(s);
    for (const auto& id : s.ids("check")) {
        const std::string sec = "check." + id;
        require_key(s, sec, "metric");
        const auto m = s.text(sec, "metric");
        if (std::find(metrics.begin(), metrics.end(), m) == metrics.end())
            fail(ParseErrorCode::resolution_error, line_of(s, sec, "metric"), "metric",
                 "kind '" + s.kind() + "' does not report metric '" + m + "'");
        const bool bound = s.has(sec, "max") || s.has(sec, "min");
        const bool target = s.has(sec, "expect");
        const bool label = s.has(sec, "equals");
        invariant(static_cast<int>(bound) + static_cast<int>(target) + static_cast<int>(label) == 1, s, sec, "metric",
                  "a check uses exactly one of max/min, expect (+tol) or equals");
        if (target) {
            require_key(s, sec, "tol");
            invariant(s.real(sec, "tol") >= 0.0, s, sec, "tol", "tolerance must be non-negative");
        }
    }
}

void validate_fdtd(const Scenario& s) {
    require_key(s, "fdtd", "dt");
    require_key(s, "fdtd", "t_end");
    invariant(s.real("fdtd", "dt") > 0.0, s, "fdtd", "dt", "dt must be positive");
    invariant(s.real("fdtd", "t_end") > 0.0, s, "fdtd", "t_end", "t_end must be positive");
    invariant(s.integer_or("fdtd", "frame_every", 1) >= 1, s, "fdtd", "frame_every", "frame cadence must be >= 1");
    invariant(s.integer_or("fdtd", "damping_cells", 0) >= 0, s, "fdtd", "damping_cells", "must be non-negative");
    invariant(s.integer_or("fdtd", "front_margin", 16) >= 0, s, "fdtd", "front_margin", "must be non-negative");
    FdtdConfig cfg;
    cfg.grid = s.grid();
    cfg.grid.excluded.reset();
    cfg.c = s.real_or("physics", "c", 1.0);
    cfg.dt = s.real("fdtd", "dt");
    cfg.cfl_max = s.real_or("fdtd", "cfl_max", 0.5);
    if (cfg.courant() > cfg.cfl_max)
        fail(ParseErrorCode::cfl_violation, line_of(s, "fdtd", "dt"), "dt",
             "Courant number " + std::to_string(cfg.courant()) + " exceeds " + std::to_string(cfg.cfl_max));
}

void validate(const Scenario& s) {
    require_section(s, "scenario");
    require_key(s, "scenario", "name");
    require_key(s, "scenario", "kind");
    const auto& kinds = scenario_kinds();
    if (std::find(kinds.begin(), kinds.end(), s.kind()) == kinds.end())
        fail(ParseErrorCode::invariant_violation, line_of(s, "scenario", "kind"), "kind", "unknown experiment kind '" + s.kind() + "'");

    const std::string& k = s.kind();
    std::vector<std::string> needed;
    if (k == "ab-phase") needed = {"solenoid", "experiment"};
    if (k == "gauge-classify") needed = {"grid", "solenoid", "experiment"};
    if (k == "propagate" || k == "locality-report") needed = {"grid", "solenoid", "fdtd", "probes"};
    if (k == "pattern") needed = {"solenoid", "pattern"};
    if (k == "gauge-invariance") needed = {"solenoid", "experiment"};
    if (k == "residual-freedom") needed = {"grid", "solenoid", "fdtd", "experiment"};
    if (k == "convergence" || k == "kernel-causality") needed = {"experiment"};
    for (const auto& n : needed) require_section(s, n);

    if (s.has("solenoid")) {
        require_key(s, "solenoid", "flux");
        invariant(s.real_or("solenoid", "radius", 0.0) >= 0.0, s, "solenoid", "radius", "radius must be non-negative");
        invariant(s.real_or("solenoid", "ramp", 0.0) >= 0.0, s, "solenoid", "ramp", "ramp must be non-negative");
        const auto model = s.text_or("solenoid", "model", "thin");
        invariant(model == "thin" || model == "finite", s, "solenoid", "model", "model is thin or finite");
        if (model == "finite")
            invariant(s.real_or("solenoid", "radius", 0.0) > 0.0, s, "solenoid", "radius", "a finite solenoid needs a radius");
    }
    if (s.has("physics")) {
        for (const char* key : {"c", "lambda_b", "l", "d"})
            invariant(s.real_or("physics", key, 1.0) > 0.0, s, "physics", key, "must be positive");
    }
    if (s.has("grid")) validate_grid(s);
    validate_declarations(s);
    if (s.has("fdtd")) {
        if (!s.has("grid")) fail(ParseErrorCode::missing_section, s.section("fdtd").line, "grid", "[fdtd] needs a [grid] section");
        validate_fdtd(s);
    }
    if (s.has("probes")) {
        require_key(s, "probes", "radii");
        invariant(s.reals("probes", "radii").size() >= 2, s, "probes", "radii", "needs at least 2 probe radii");
        const double thr = s.real_or("probes", "threshold", 0.01);
        invariant(thr > 0.0 && thr < 1.0, s, "probes", "threshold", "threshold must lie in (0, 1)");
    }
    if (s.has("pattern")) {
        invariant(s.integer_or("pattern", "screen_points", 2001) >= 3, s, "pattern", "screen_points", "needs >= 3 points");
        invariant(s.real_or("pattern", "screen_half_width", 1.0) > 0.0, s, "pattern", "screen_half_width", "must be positive");
    }

    const std::string ex = "experiment";
    if (k == "ab-phase") {
        invariant(s.has(ex, "paths") || s.has(ex, "loops") || s.has(ex, "random_loops"), s, ex, "paths",
                  "ab-phase needs paths, loops or random_loops");
        if (s.has(ex, "paths")) {
            const auto p = s.words(ex, "paths");
            invariant(p.size() == 2, s, ex, "paths", "paths names exactly two paths");
            for (const auto& id : p) resolve(s, "path", id, ex, "paths");
        }
        if (s.has(ex, "loops"))
            for (const auto& id : s.words(ex, "loops")) resolve(s, "path", id, ex, "loops");
        if (s.has(ex, "random_loops"))
            invariant(s.integer(ex, "random_loops") >= 1, s, ex, "random_loops", "must be positive");
        if (s.has(ex, "stokes_loop")) {
            resolve(s, "path", s.text(ex, "stokes_loop"), ex, "stokes_loop");
            require_section(s, "grid");
            invariant(s.text_or("solenoid", "model", "thin") == "finite", s, "solenoid", "model",
                      "the Stokes comparison needs the finite solenoid");
        }
        const auto src = s.text_or(ex, "source", "analytic");
        invariant(src == "analytic" || src == "grid", s, ex, "source", "source is analytic or grid");
        if (src == "grid") require_section(s, "grid");
    } else if (k == "gauge-classify") {
        require_key(s, ex, "pairs");
        require_key(s, ex, "loops");
        for (const auto& id : s.words(ex, "loops")) resolve(s, "path", id, ex, "loops");
        for (const auto& p : s.words(ex, "pairs")) {
            const auto slash = p.find('/');
            if (slash == std::string::npos)
                fail(ParseErrorCode::syntax, line_of(s, ex, "pairs"), "pairs", "pairs are written 'a/b'");
            resolve(s, "state", p.substr(0, slash), ex, "pairs");
            resolve(s, "state", p.substr(slash + 1), ex, "pairs");
        }
        invariant(s.grid().excluded.has_value(), s, "grid", "exclude_radius",
                  "classification needs an excluded disk (solenoid radius or exclude_radius)");
    } else if (k == "gauge-invariance") {
        require_key(s, ex, "levels");
        require_key(s, ex, "family");
        invariant(s.integers(ex, "levels").size() >= 2, s, ex, "levels", "needs at least 2 levels");
        for (long n : s.integers(ex, "levels")) invariant(n >= 16, s, ex, "levels", "levels need >= 16 nodes");
        for (const auto& g : s.words(ex, "family")) {
            resolve(s, "gauge", g, ex, "family");
            invariant(s.text("gauge." + g, "type") == "polynomial" || s.text("gauge." + g, "type") == "plane_wave", s,
                      "gauge." + g, "type", "the invariance family holds single-valued polynomial or plane-wave gauges");
        }
        require_key(s, ex, "loop_radius");
        invariant(s.real(ex, "loop_radius") > s.real_or("solenoid", "radius", 0.0), s, ex, "loop_radius",
                  "loop must enclose the solenoid");
    } else if (k == "residual-freedom") {
        require_key(s, ex, "k");
        require_key(s, ex, "amplitude");
        const Vec2 kv = s.vec2(ex, "k");
        invariant(kv.x != 0.0 || kv.y != 0.0, s, ex, "k", "wave vector must be nonzero");
        require_key(s, ex, "loop_radius");
    } else if (k == "convergence") {
        require_key(s, ex, "levels");
        const auto lv = s.integers(ex, "levels");
        invariant(lv.size() >= 2, s, ex, "levels", "needs at least 2 levels");
        for (std::size_t i = 0; i < lv.size(); ++i) {
            invariant(lv[i] >= 16, s, ex, "levels", "levels need >= 16 nodes");
            if (i > 0) invariant(lv[i] == 2 * lv[i - 1], s, ex, "levels", "each level doubles the previous one");
        }
    } else if (k == "kernel-causality") {
        require_key(s, ex, "radii");
        require_key(s, ex, "width");
        invariant(s.real(ex, "width") > 0.0, s, ex, "width", "width must be positive");
        for (double r : s.reals(ex, "radii")) invariant(r > 0.0, s, ex, "radii", "radii must be positive");
    }
    validate_checks(s);
}

}  // namespace

Scenario parse_scenario(std::string_view text) {
    Scenario s(tokenize(text));
    validate(s);
    return s;
}

Scenario load_scenario(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw Error("cannot open scenario file " + file.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

std::string serialize(const Scenario& s) {
    std::ostringstream os;
    bool first = true;
    for (const auto& sec : s.sections()) {
        if (!first) os << '\n';
        first = false;
        os << '[' << sec.name << "]\n";
        for (const auto& e : sec.entries) os << e.key << " = " << e.value << '\n';
    }
    return os.str();
}

std::filesystem::path bundled_scenario_dir() { return GAUGE_LAB_SCENARIO_DIR; }

std::vector<std::filesystem::path> bundled_scenarios() {
    std::vector<std::filesystem::path> out;
    const auto dir = bundled_scenario_dir();
    if (!std::filesystem::is_directory(dir)) return out;
    for (const auto& e : std::filesystem::directory_iterator(dir))
        if (e.is_regular_file() && e.path().extension() == ".cfg") out.push_back(e.path());
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace gauge_lab
