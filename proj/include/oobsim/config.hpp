// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 oobsim authors

#pragma once

#include "oobsim/channel.hpp"
#include "oobsim/precode.hpp"
#include "oobsim/waveform.hpp"

#include <json.hpp>

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace oobsim::experiments {

enum class ExperimentId
{
    los_pattern,
    fading_ccdf,
    scatter_map,
    psd_compare,
};

enum class Profile
{
    ci,
    paper,
};

std::string to_string(ExperimentId id);
ExperimentId parse_experiment_id(const std::string &name);
Profile parse_profile(const std::string &name);

class ConfigError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

struct WaveformConfig
{
    double baud_rate = 20e6;
    double rolloff = 0.22;
    std::size_t oversampling = 7;
    std::size_t span_symbols = 32;
    std::size_t num_symbols = 4096;
    waveform::SymbolAlphabet alphabet = waveform::SymbolAlphabet::gaussian;
};

struct ArrayConfig
{
    std::size_t num_antennas = 64;
    double spacing_wavelengths = 0.5;
    double carrier_frequency = 3.5e9;
};

struct FrontendConfig
{
    Complex a3_over_a1{-0.05, 0.0};
    double target_aclr_db = 23.0;
    std::optional<double> siso_target_aclr_db; // defaults to target_aclr_db
};

struct UsersConfig
{
    std::size_t count = 1;
    precode::AllocationMode allocation = precode::AllocationMode::equal;
    std::vector<double> angles_deg; // empty: drawn uniformly from angle_range_deg and snapped to the grid
    std::vector<double> path_gains; // empty: all 1
    double angle_min_deg = -60.0;
    double angle_max_deg = 60.0;
};

struct AngleGridConfig
{
    double start_deg = -90.0;
    double stop_deg = 90.0;
    double step_deg = 0.25;
};

struct FadingScenario
{
    std::size_t num_antennas = 1;
    std::size_t num_users = 1;
};

struct FadingConfig
{
    std::size_t num_taps = 15;
    channel::PowerDelayProfile profile = channel::PowerDelayProfile::uniform;
    double decay_db_per_tap = 0.0;
    std::vector<FadingScenario> scenarios{{1, 1}, {100, 1}, {100, 10}};
    double threshold_start_db = -40.0;
    double threshold_stop_db = 10.0;
    double threshold_step_db = 0.05;
};

struct ScatterConfig
{
    std::size_t num_scatterers = 20;
    channel::Rectangle region{250.0, 350.0, -50.0, 50.0};
    std::size_t grid_points = 100;
};

// Resolved configuration of one experiment run. Precedence: built-in defaults, then the profile,
// then the config file, then command-line overrides.
struct ExperimentConfig
{
    int schema_version = 1;
    ExperimentId experiment = ExperimentId::los_pattern;
    std::string tag = "default";
    std::uint64_t seed = 1;
    std::string output_dir = ".";
    std::size_t threads = 1;
    std::size_t num_realizations = 10000;
    WaveformConfig waveform;
    ArrayConfig array;
    FrontendConfig frontend;
    UsersConfig users;
    AngleGridConfig angle_grid;
    FadingConfig fading;
    ScatterConfig scatter;

    // Throws ConfigError naming the offending field.
    void validate() const;
};

ExperimentConfig default_config(ExperimentId experiment, Profile profile);

// Overlays a JSON document (schema_version 1) onto the defaults of the experiment and profile.
// Unknown keys, wrong types, and a mismatching "experiment" field raise ConfigError.
ExperimentConfig parse_config(const nlohmann::json &doc, ExperimentId experiment, Profile profile);
ExperimentConfig load_config(const std::filesystem::path &path, ExperimentId experiment, Profile profile);

nlohmann::json to_json(const ExperimentConfig &config);

} // namespace oobsim::experiments
