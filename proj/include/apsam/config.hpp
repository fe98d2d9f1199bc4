#pragma once

// Versioned JSON configuration for the command-line front end.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "apsam/analysis.hpp"
#include "apsam/verify.hpp"

namespace apsam {

inline constexpr int kConfigSchemaVersion = 1;

/// Where a scenario's device comes from; exactly one source is set.
struct DeviceSource {
    std::string demo;                      ///< named demonstration system
    std::optional<RationalMatrix2> model;  ///< closed-form admittance
    std::filesystem::path table;           ///< measured response table (.csv or .json)
};

struct Scenario {
    std::string name;
    DeviceSource device;
    std::optional<GridParams> grid;  ///< overrides the configuration grid
};

struct ToleranceOverrides {
    double crossing = 1e-9;  ///< origin-pass tolerance relative to max |D|
    ConsistencyTolerances consistency;
    double interval_slack = 0.0;  ///< allowed error increase between successive finer intervals, 1/s
};

struct AnalysisConfig {
    int schema_version = kConfigSchemaVersion;
    std::optional<GridParams> grid;
    FrequencyPlan plan = FrequencyPlan::default_plan();
    double noise = 0.0;
    std::uint64_t seed = 0;
    TrajectoryForm form = TrajectoryForm::Admittance;
    SlopeOptions slope;
    ToleranceOverrides tolerances;
    std::vector<double> intervals_hz{2.0, 1.0, 0.5};
    std::optional<Scenario> device;
    std::vector<Scenario> scenarios;

    [[nodiscard]] AnalysisOptions analysis_options() const;
    [[nodiscard]] SweepOptions sweep_options(const std::string& device_id) const;
};

/// Relative table paths are resolved against base_dir. Throws InvalidArgument or ParseError.
AnalysisConfig config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
AnalysisConfig load_config(const std::filesystem::path& path);
nlohmann::json config_to_json(const AnalysisConfig& c);

/// A scenario with its grid and either a closed-form model or a loaded table.
struct ResolvedDevice {
    std::string id;
    GridParams grid;
    std::optional<RationalMatrix2> model;
    std::optional<FrequencyResponseTable> table;
};

ResolvedDevice resolve(const Scenario& s, const AnalysisConfig& c);

/// The model's table when closed-form (swept with the configured noise), else the loaded table.
FrequencyResponseTable response_table(const ResolvedDevice& d, const AnalysisConfig& c);

/// Reads a response table, choosing the format by extension (.json, otherwise CSV).
FrequencyResponseTable load_table(const std::filesystem::path& path);
void save_table(const std::filesystem::path& path, const FrequencyResponseTable& table);

}  // namespace apsam
