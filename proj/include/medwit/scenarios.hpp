// scenarios.hpp — Scenario catalog, run configuration and report emission.

#pragma once

#include "medwit/correlations.hpp"

#include <json.hpp>

#include <array>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace medwit {

inline constexpr const char* kVersion = "0.1.0";

// Configuration problem; `key` names the offending entry when there is one.
class ConfigError : public std::invalid_argument {
public:
    ConfigError(std::string key, const std::string& message)
        : std::invalid_argument(key.empty() ? message : "config key '" + key + "': " + message), key_(std::move(key)) {}
    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

struct GConfig {
    std::string kind = "default";  // default | linear | table | entropic
    double c = 1.0;                // linear coefficient
    int dim = 0;                   // entropic dimension, 0 = smaller side of the cut
    std::vector<double> s, g;      // table points

    bool operator==(const GConfig&) const = default;
};

struct Tolerances {
    double state = 1e-8;
    double ree_gap = 1e-6;
    double decomposition = 1e-6;
    double swap = 1e-6;
    double trotter = 1e-9;

    bool operator==(const Tolerances&) const = default;
};

struct ScenarioConfig {
    std::string scenario;
    std::optional<std::uint64_t> seed;
    std::array<int, 3> dims{2, 2, 2};
    std::string measure = "rel_ent_entanglement";
    std::string distance = "default";
    GConfig g;
    std::vector<double> t_grid;
    std::vector<long> r_grid;
    std::vector<double> eps_grid;
    int samples = 0;
    int restarts = 1;
    int m = 2;
    double entanglement_bits = 5.0;
    std::string output = "results";
    Tolerances tolerances;
    long cap_total_dim = 4096;

    bool operator==(const ScenarioConfig&) const = default;
};

const std::vector<std::string>& scenario_names();
std::string scenario_summary(const std::string& name);
bool scenario_needs_seed(const std::string& name);

// Parses JSON text, rejects unknown keys, fills defaults and validates. A seed
// override replaces the file's seed before validation.
ScenarioConfig parse_config(const std::string& text, std::optional<std::uint64_t> seed_override = std::nullopt);
ScenarioConfig load_config(const std::string& path, std::optional<std::uint64_t> seed_override = std::nullopt);
void validate(const ScenarioConfig& cfg);
nlohmann::ordered_json to_json(const ScenarioConfig& cfg);

// The measure a config selects for a cut whose smaller side has dimension local_dim.
MeasureSpec make_measure(const ScenarioConfig& cfg, int local_dim);

inline constexpr double kNA = std::numeric_limits<double>::quiet_NaN();

struct ResultRow {
    std::string paper_eq;
    double lhs = kNA;
    double capacity = kNA;
    double total_corr = kNA;
    double bound = kNA;
    double violation = kNA;
    double nd_lower_bound = kNA;
    std::string status;
    nlohmann::ordered_json details = nlohmann::ordered_json::object();
};

struct Check {
    std::string name;
    bool passed = true;
    std::string detail;
};

struct RunReport {
    ScenarioConfig config;
    std::vector<ResultRow> rows;
    std::vector<Check> checks;
    nlohmann::ordered_json summary = nlohmann::ordered_json::object();
    double wall_time_s = 0.0;

    bool invariants_hold() const;
};

RunReport run(const ScenarioConfig& cfg);

std::string csv_header();
// RFC-4180 rows with CRLF line endings; numbers at 12 significant digits, N/A empty.
std::string to_csv(const RunReport& report);
nlohmann::ordered_json manifest(const RunReport& report);
// Writes results.csv and manifest.json into `dir` (created if missing).
void write_outputs(const RunReport& report, const std::string& dir);

}  // namespace medwit
