#pragma once

// Scenario files: flat `[section]` blocks of `key = value` lines. Named
// declarations use dotted section names (`[path.upper]`, `[gauge.g1]`,
// `[state.s1]`, `[check.c1]`). Lines starting with '#' are comments.

#include "gauge_lab/grid.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace gauge_lab {

enum class ParseErrorCode {
    syntax,
    unknown_key,
    missing_section,
    invariant_violation,
    resolution_error,
    cfl_violation,
};

[[nodiscard]] std::string to_string(ParseErrorCode code);

class ParseError : public Error {
public:
    ParseError(ParseErrorCode code, int line, std::string key, const std::string& message);

    [[nodiscard]] ParseErrorCode code() const { return code_; }
    /// 1-based line, 0 when the error is not tied to a line.
    [[nodiscard]] int line() const { return line_; }
    [[nodiscard]] const std::string& key() const { return key_; }

private:
    ParseErrorCode code_;
    int line_;
    std::string key_;
};

struct ScenarioEntry {
    std::string key;
    std::string value;
    int line{0};

    friend bool operator==(const ScenarioEntry& a, const ScenarioEntry& b) {
        return a.key == b.key && a.value == b.value;
    }
};

struct ScenarioSection {
    std::string name;
    int line{0};
    std::vector<ScenarioEntry> entries;

    [[nodiscard]] const ScenarioEntry* find(std::string_view key) const;
    friend bool operator==(const ScenarioSection& a, const ScenarioSection& b) {
        return a.name == b.name && a.entries == b.entries;
    }
};

/// A parsed and validated scenario. Typed getters throw ParseError
/// (resolution_error) for missing keys; values were type-checked at parse time.
class Scenario {
public:
    Scenario() = default;
    explicit Scenario(std::vector<ScenarioSection> sections);

    [[nodiscard]] const std::string& name() const { return name_; }
    [[nodiscard]] const std::string& kind() const { return kind_; }
    [[nodiscard]] const std::vector<ScenarioSection>& sections() const { return sections_; }

    [[nodiscard]] bool has(std::string_view section) const;
    [[nodiscard]] bool has(std::string_view section, std::string_view key) const;
    [[nodiscard]] const ScenarioSection& section(std::string_view name) const;
    /// Ids of all sections named `prefix.<id>`, in file order.
    [[nodiscard]] std::vector<std::string> ids(std::string_view prefix) const;

    [[nodiscard]] std::string text(std::string_view sec, std::string_view key) const;
    [[nodiscard]] std::string text_or(std::string_view sec, std::string_view key, std::string fallback) const;
    [[nodiscard]] double real(std::string_view sec, std::string_view key) const;
    [[nodiscard]] double real_or(std::string_view sec, std::string_view key, double fallback) const;
    [[nodiscard]] long integer(std::string_view sec, std::string_view key) const;
    [[nodiscard]] long integer_or(std::string_view sec, std::string_view key, long fallback) const;
    [[nodiscard]] Vec2 vec2(std::string_view sec, std::string_view key) const;
    [[nodiscard]] Vec2 vec2_or(std::string_view sec, std::string_view key, Vec2 fallback) const;
    [[nodiscard]] std::vector<double> reals(std::string_view sec, std::string_view key) const;
    [[nodiscard]] std::vector<long> integers(std::string_view sec, std::string_view key) const;
    [[nodiscard]] std::vector<std::string> words(std::string_view sec, std::string_view key) const;
    /// `a b; c d; ...` groups of numbers.
    [[nodiscard]] std::vector<std::vector<double>> tuples(std::string_view sec, std::string_view key) const;

    /// Grid from the [grid] section; the solenoid disk (or exclude_radius) becomes the excluded disk.
    [[nodiscard]] Grid2 grid() const;

    friend bool operator==(const Scenario& a, const Scenario& b) { return a.sections_ == b.sections_; }

private:
    [[nodiscard]] const ScenarioEntry& entry(std::string_view sec, std::string_view key) const;

    std::vector<ScenarioSection> sections_;
    std::string name_;
    std::string kind_;
};

/// Parses and validates. Errors carry a code, the line and the offending key.
[[nodiscard]] Scenario parse_scenario(std::string_view text);
[[nodiscard]] Scenario load_scenario(const std::filesystem::path& file);
/// Canonical text; parse_scenario(serialize(s)) == s.
[[nodiscard]] std::string serialize(const Scenario& s);

/// Experiment kinds understood by the runner.
[[nodiscard]] const std::vector<std::string>& scenario_kinds();
/// Metric names the scenario's kind will report, given its declarations.
[[nodiscard]] std::vector<std::string> available_metrics(const Scenario& s);

/// Directory of the scenarios shipped with the library.
[[nodiscard]] std::filesystem::path bundled_scenario_dir();
/// Bundled scenario files, sorted by name.
[[nodiscard]] std::vector<std::filesystem::path> bundled_scenarios();

}  // namespace gauge_lab
