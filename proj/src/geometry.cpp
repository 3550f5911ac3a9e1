// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 oobsim authors

#include "oobsim/geometry.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace oobsim::geometry {

void UlaGeometry::validate() const
{
    if (num_antennas == 0)
        throw std::invalid_argument("UlaGeometry: num_antennas must be at least 1");
    if (!(spacing_wavelengths > 0.0))
        throw std::invalid_argument("UlaGeometry: spacing_wavelengths must be positive");
    if (!(carrier_frequency > 0.0))
        throw std::invalid_argument("UlaGeometry: carrier_frequency must be positive");
}

Direction::Direction(double angle_rad)
{
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double a = std::remainder(angle_rad, two_pi); // [-pi, pi]
    if (a <= -std::numbers::pi)
        a += two_pi;
    angle_ = a;
}

Direction Direction::from_degrees(double deg) { return Direction(deg * std::numbers::pi / 180.0); }

double Direction::degrees() const { return angle_ * 180.0 / std::numbers::pi; }

std::vector<double> element_delays(const UlaGeometry &geometry, Direction direction)
{
    geometry.validate();
    const double step = geometry.spacing_meters() * std::sin(direction.angle()) / kSpeedOfLight;
    std::vector<double> delays(geometry.num_antennas);
    for (std::size_t m = 0; m < delays.size(); ++m)
        delays[m] = static_cast<double>(m) * step;
    return delays;
}

ComplexVector steering_phases(const UlaGeometry &geometry, Direction direction, double absolute_frequency)
{
    if (!(absolute_frequency > 0.0))
        throw std::invalid_argument("steering_phases: absolute_frequency must be positive");
    const auto delays = element_delays(geometry, direction);
    ComplexVector phases(delays.size());
    for (std::size_t m = 0; m < delays.size(); ++m)
        phases[m] = std::polar(1.0, -2.0 * std::numbers::pi * absolute_frequency * delays[m]);
    return phases;
}

std::vector<Direction> angle_grid_degrees(double start_deg, double stop_deg, double step_deg)
{
    if (!(step_deg > 0.0) || stop_deg < start_deg)
        throw std::invalid_argument("angle_grid_degrees: need step > 0 and stop >= start");
    const auto count = static_cast<std::size_t>(std::floor((stop_deg - start_deg) / step_deg + 0.5)) + 1;
    std::vector<Direction> grid;
    grid.reserve(count);
    for (std::size_t i = 0; i < count; ++i)
        grid.push_back(Direction::from_degrees(start_deg + static_cast<double>(i) * step_deg));
    return grid;
}

} // namespace oobsim::geometry
