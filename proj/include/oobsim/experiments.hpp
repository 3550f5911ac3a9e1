// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 oobsim authors

#pragma once

#include "oobsim/analysis.hpp"
#include "oobsim/channel.hpp"
#include "oobsim/config.hpp"
#include "oobsim/frontend.hpp"
#include "oobsim/waveform.hpp"

#include <filesystem>
#include <vector>

namespace oobsim::experiments {

// Power amplifier models of the array and the single-antenna reference, each calibrated to its
// conducted ACLR target.
struct ChainModels
{
    frontend::NonlinearityModel array;
    frontend::NonlinearityModel siso;
};

waveform::PulseShape pulse_of(const ExperimentConfig &config);
analysis::BandSpec bands_of(const ExperimentConfig &config);
geometry::UlaGeometry geometry_of(const ExperimentConfig &config);
ChainModels calibrate_chains(const ExperimentConfig &config);

// Adds a and b field by field.
analysis::BandPowers operator+(const analysis::BandPowers &a, const analysis::BandPowers &b);
// Band powers summed over the antennas of a frame.
analysis::BandPowers conducted_band_powers(const analysis::FrameSpectrum &spectrum, const analysis::BandSpec &bands);

struct LosPatternResult
{
    std::vector<double> angles_deg;
    std::vector<double> user_angles_deg;
    std::vector<double> user_gains;
    std::vector<double> user_powers; // allocation fractions
    analysis::Beampattern array;
    double siso_inband = 0.0; // radiated in every direction
    double siso_oob = 0.0;
    double array_power = 0.0; // P_array, with P_SISO = 1
    double siso_power = 1.0;
    analysis::BandPowers array_conducted;
    analysis::BandPowers siso_conducted;
    ChainModels models;
};

// Radiated patterns are powers relative to the SISO transmit power.
LosPatternResult run_los_pattern(const ExperimentConfig &config);
LosPatternResult run_los_pattern(const ExperimentConfig &config, const ChainModels &models);

// User angles for a LOS run: the configured list, or uniform draws snapped to the angle grid
// without repeats.
std::vector<double> los_user_angles(const ExperimentConfig &config);

// One Monte Carlo draw of a fading link. Powers are relative to the SISO transmit power.
struct FadingSample
{
    double victim_inband = 0.0;
    double victim_oob = 0.0;
    double served_inband = 0.0;     // user 0
    double served_inband_max = 0.0; // strongest served user
    double conducted_inband = 0.0;  // summed over antennas
    double conducted_oob = 0.0;
};

struct FadingScenarioResult
{
    FadingScenario scenario;
    double tx_power = 0.0;
    std::vector<FadingSample> samples;
    std::vector<double> victim_oob_db;
    double mean_oob_db = 0.0; // dB of the linear mean
    analysis::CcdfCurve ccdf;
    double p_above_mean_plus_3db = 0.0;
    double p01_db = 0.0;
    double p99_db = 0.0;
    double std_db = 0.0;

    bool is_siso() const { return scenario.num_antennas == 1; }
};

struct FadingCcdfResult
{
    std::vector<FadingScenarioResult> scenarios;
    ChainModels models;
};

// A scenario with one antenna is the unprecoded SISO reference at power 1; arrays transmit K/M.
FadingCcdfResult run_fading_ccdf(const ExperimentConfig &config);
FadingScenarioResult run_fading_scenario(const ExperimentConfig &config, const FadingScenario &scenario,
                                         const ChainModels &models);

struct ScatterMapResult
{
    std::size_t grid_points = 0;
    std::vector<channel::Point2> positions; // index iy * grid_points + ix
    std::vector<double> inband_db;
    std::vector<double> oob_db;
    std::vector<channel::Point2> scatterers;
    std::vector<channel::Point2> users;
    std::vector<std::size_t> user_cells; // index into positions
    double conducted_aclr_db = 0.0;
    ChainModels models;

    std::size_t cell_index(std::size_t ix, std::size_t iy) const { return iy * grid_points + ix; }
};

ScatterMapResult run_scatter_map(const ExperimentConfig &config);
ScatterMapResult run_scatter_map(const ExperimentConfig &config, const ChainModels &models);

struct PsdCompareResult
{
    std::vector<double> frequencies;
    // Density times baud rate relative to the SISO served user's mean in-band power, dB.
    std::vector<double> siso_tx, siso_rx_user, siso_rx_victim;
    std::vector<double> array_tx, array_rx_user, array_rx_victim;
    double reference_power = 0.0;
    double siso_tx_aclr_db = 0.0;
    double array_tx_aclr_db = 0.0;
    double siso_rx_user_inband_db = 0.0; // relative to the reference
    double array_rx_user_inband_db = 0.0;
    double siso_rx_victim_oob_db = 0.0;
    double array_rx_victim_oob_db = 0.0;
    double siso_array_aclr_db = 0.0;
    double array_array_aclr_db = 0.0;
    ChainModels models;
};

PsdCompareResult run_psd_compare(const ExperimentConfig &config);
PsdCompareResult run_psd_compare(const ExperimentConfig &config, const ChainModels &models);

// CSV writers; return the files written under config.output_dir.
std::vector<std::filesystem::path> write_los_pattern(const ExperimentConfig &config, const LosPatternResult &result);
std::vector<std::filesystem::path> write_fading_ccdf(const ExperimentConfig &config, const FadingCcdfResult &result);
std::vector<std::filesystem::path> write_scatter_map(const ExperimentConfig &config, const ScatterMapResult &result);
std::vector<std::filesystem::path> write_psd_compare(const ExperimentConfig &config, const PsdCompareResult &result);

// Runs the configured experiment and writes its CSVs.
std::vector<std::filesystem::path> run_and_write(const ExperimentConfig &config);

} // namespace oobsim::experiments
