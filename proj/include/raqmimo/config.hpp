// SPDX-License-Identifier: Apache-2.0
// Experiment configuration: JSON parsing with unit strings, validation,
// canonical serialization, dotted-path overrides and a content hash.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "raqmimo/scenario_mc.hpp"

namespace raqmimo {

struct AxisSpec {
    double min{3e-3};  // [V/m]
    double max{100e-3};
    int num{30};
    bool log_spacing{false};

    std::vector<double> points() const;
};

struct MapSpec {
    AxisSpec e_lo_1;
    AxisSpec e_lo_2;
};

struct SolveSpec {
    double power{1e-3};  // [W]
    int trial{0};
    SchemeId scheme{SchemeId::QSdmaOpt};
};

struct OutputSpec {
    std::string dir{"out"};
    bool plot_scripts{false};
};

struct ExperimentConfig {
    std::uint64_t seed{1};
    ScenarioTemplate scenario;
    CampaignConfig campaign;
    SolveSpec solve;
    MapSpec map;
    OutputSpec output;

    /// Propagates the master seed into the channel model and the solver.
    void apply_seed(std::uint64_t new_seed);
    void validate() const;
};

/// Reference dual-band setup, 0 dBm per user, every scheme.
ExperimentConfig default_config();

/// Parse a quantity such as "2pi*8.08 MHz", "6.938 GHz", "0 dBm", "10 mV/m"
/// or "1400 ea0". `kind` selects the accepted units: "angular", "frequency",
/// "power", "field", "dipole", "length". Plain numbers are taken as SI.
double parse_quantity(const std::string& text, const std::string& kind);

/// Parse JSON text. Missing keys keep their defaults; unknown keys throw ConfigError.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);

/// Canonical JSON with every field spelled out in SI units and sorted keys.
std::string serialize_config(const ExperimentConfig& config);

/// Apply "a.b.0.c=value" overrides to the canonical form and re-parse. The
/// value is read as JSON when possible, otherwise as a string.
ExperimentConfig apply_overrides(const ExperimentConfig& config, const std::vector<std::string>& overrides);

/// 64-bit FNV-1a of the canonical serialization, as 16 hex digits.
std::string config_hash(const ExperimentConfig& config);

}  // namespace raqmimo
