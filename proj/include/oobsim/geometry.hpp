// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 oobsim authors

#pragma once

#include "oobsim/signal.hpp"

#include <cstddef>
#include <vector>

namespace oobsim::geometry {

inline constexpr double kSpeedOfLight = 299792458.0; // m/s

// Uniform linear array of isotropic, unit-gain elements. Element m sits at m * spacing along the
// array axis, m = 0..M-1.
struct UlaGeometry
{
    std::size_t num_antennas = 1;
    double spacing_wavelengths = 0.5;
    double carrier_frequency = 3.5e9; // Hz

    // Throws std::invalid_argument if M == 0, spacing <= 0 or carrier <= 0.
    void validate() const;

    double wavelength() const { return kSpeedOfLight / carrier_frequency; }
    double spacing_meters() const { return spacing_wavelengths * wavelength(); }
    double element_position(std::size_t m) const { return static_cast<double>(m) * spacing_meters(); }
};

// Azimuth angle in radians measured from broadside, positive toward increasing element index.
// Stored wrapped to (-pi, pi]; broadside is 0 and endfire is +-pi/2.
class Direction
{
  public:
    Direction() = default;
    explicit Direction(double angle_rad);

    static Direction from_degrees(double deg);

    double angle() const { return angle_; }
    double degrees() const;

  private:
    double angle_ = 0.0;
};

// Far-field delays tau_m = m * d * sin(angle) / c in seconds; tau_0 = 0.
std::vector<double> element_delays(const UlaGeometry &geometry, Direction direction);

// Per-element phasors exp(-j 2 pi f tau_m) at absolute frequency f (carrier plus baseband offset).
ComplexVector steering_phases(const UlaGeometry &geometry, Direction direction, double absolute_frequency);

// Uniform grid start, start+step, ..., up to and including stop (within half a step).
std::vector<Direction> angle_grid_degrees(double start_deg, double stop_deg, double step_deg);

} // namespace oobsim::geometry
