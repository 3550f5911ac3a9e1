// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 oobsim authors

#pragma once

#include "oobsim/geometry.hpp"
#include "oobsim/rng.hpp"
#include "oobsim/signal.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace oobsim::channel {

using geometry::Direction;
using geometry::UlaGeometry;

// Static line-of-sight channel: user k sees a plane wave leaving toward user_angles[k] with amplitude
// gain path_gains[k]. The response is a pure (fractional) delay per element.
struct LosChannel
{
    UlaGeometry geometry;
    std::vector<Direction> user_angles;
    std::vector<double> path_gains;

    std::size_t num_antennas() const { return geometry.num_antennas; }
    std::size_t num_users() const { return user_angles.size(); }

    // Per-antenna response beta_k * exp(-j 2 pi f tau_m(theta_k)) at absolute frequency f.
    ComplexVector response(std::size_t user, double absolute_frequency) const;
};

// Throws std::invalid_argument on length mismatch, K == 0, or negative/non-finite gains.
LosChannel make_los(const UlaGeometry &geometry, std::span<const Direction> angles, std::span<const double> gains);

enum class PowerDelayProfile
{
    uniform,
    exponential,
};

// Frequency-selective tap channel h[m][k][l], taps spaced tap_period seconds apart.
struct TapChannel
{
    std::size_t num_antennas = 0;
    std::size_t num_users = 0;
    std::size_t num_taps = 0;
    double tap_period = 0.0; // seconds
    ComplexVector taps;      // [(m * K + k) * L + l]

    Complex &at(std::size_t m, std::size_t k, std::size_t l) { return taps[(m * num_users + k) * num_taps + l]; }
    Complex at(std::size_t m, std::size_t k, std::size_t l) const { return taps[(m * num_users + k) * num_taps + l]; }
    std::span<const Complex> taps_for(std::size_t m, std::size_t k) const
    {
        return {taps.data() + (m * num_users + k) * num_taps, num_taps};
    }

    // Sum over antennas and taps of |h[m][k][l]|^2.
    double user_energy(std::size_t k) const;
};

// i.i.d. CN(0, q_l) taps with sum_l q_l = 1. Uniform: q_l = 1/L. Exponential: q_l proportional to
// 10^(-decay_db_per_tap * l / 10). Deterministic in the seed.
TapChannel sample_rayleigh(std::size_t num_antennas, std::size_t num_users, std::size_t num_taps, RngSeed seed,
                           double tap_period, PowerDelayProfile profile = PowerDelayProfile::uniform,
                           double decay_db_per_tap = 0.0);

// Frequency response of h[m][k][.] on the n DFT bins of a cyclic block at the given sample rate
// (natural FFT order, baseband bin frequencies).
ComplexVector frequency_response(const TapChannel &channel, std::size_t m, std::size_t k, std::size_t n,
                                 double sample_rate);

// When the tap spacing is a whole number s of samples and s divides n, the n-bin response is periodic
// with period n / s bins; returns that period, else 0.
std::size_t response_period(const TapChannel &channel, std::size_t n, double sample_rate);

// One period of that response: the period-point DFT of the taps folded modulo period.
ComplexVector tap_spectrum(const TapChannel &channel, std::size_t m, std::size_t k, std::size_t period);

struct Point2
{
    double x = 0.0;
    double y = 0.0;
};

double distance(Point2 a, Point2 b);

struct Rectangle
{
    double x_min = 0.0;
    double x_max = 0.0;
    double y_min = 0.0;
    double y_max = 0.0;

    void validate() const;
    double width() const { return x_max - x_min; }
    double height() const { return y_max - y_min; }
};

// Single-bounce rays from every antenna via every scatterer to one terminal.
struct RayChannel
{
    Point2 terminal;
    std::size_t num_antennas = 0;
    std::size_t num_scatterers = 0;
    std::vector<double> gains;  // g_s / (d_ms * d_st), [m * S + s]
    std::vector<double> delays; // (d_ms + d_st) / c, [m * S + s]

    // Per-antenna sum_s gain * exp(-j 2 pi f delay) at absolute frequency f.
    ComplexVector response(double absolute_frequency) const;
    Complex response(std::size_t m, double absolute_frequency) const;
};

// Array on the y axis centered at the origin (broadside toward +x), point scatterers with fixed
// reflection coefficients, and the served users' positions.
class ScatterMap
{
  public:
    ScatterMap(UlaGeometry geometry, std::vector<Point2> scatterers, std::vector<Point2> users,
               std::vector<double> reflection);

    const UlaGeometry &geometry() const { return geometry_; }
    const std::vector<Point2> &scatterers() const { return scatterers_; }
    const std::vector<Point2> &users() const { return users_; }
    const std::vector<double> &reflection() const { return reflection_; }
    Point2 element_position(std::size_t m) const;

    // Distance from antenna m to scatterer s.
    double leg_distance(std::size_t m, std::size_t s) const { return bs_legs_[m * scatterers_.size() + s]; }

    // Throws std::domain_error when the terminal coincides with a scatterer (1/d singularity).
    RayChannel channel_to(Point2 terminal) const;

  private:
    UlaGeometry geometry_;
    std::vector<Point2> scatterers_;
    std::vector<Point2> users_;
    std::vector<double> reflection_;
    std::vector<double> bs_legs_;
};

// Scatterers uniform in the region (reflection coefficient 1); users uniform in the region, or on the
// centers of a user_grid_points x user_grid_points cell grid when that is nonzero.
ScatterMap sample_scatter_map(const UlaGeometry &geometry, std::size_t num_scatterers, const Rectangle &region,
                              std::size_t user_count, RngSeed seed, std::size_t user_grid_points = 0);

// Center of cell (ix, iy) of an n x n grid over the region.
Point2 grid_cell_center(const Rectangle &region, std::size_t n, std::size_t ix, std::size_t iy);

} // namespace oobsim::channel
