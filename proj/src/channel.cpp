// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 oobsim authors

#include "oobsim/channel.hpp"

#include "oobsim/fft.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>

namespace oobsim::channel {

using std::numbers::pi;

ComplexVector LosChannel::response(std::size_t user, double absolute_frequency) const
{
    auto phases = geometry::steering_phases(geometry, user_angles.at(user), absolute_frequency);
    for (auto &p : phases)
        p *= path_gains.at(user);
    return phases;
}

LosChannel make_los(const UlaGeometry &geometry, std::span<const Direction> angles, std::span<const double> gains)
{
    geometry.validate();
    if (angles.size() != gains.size())
        throw std::invalid_argument("make_los: angles and gains differ in length");
    if (angles.empty())
        throw std::invalid_argument("make_los: need at least one user");
    for (double g : gains)
        if (!std::isfinite(g) || g < 0.0)
            throw std::invalid_argument("make_los: path gains must be finite and nonnegative");
    return LosChannel{geometry, {angles.begin(), angles.end()}, {gains.begin(), gains.end()}};
}

double TapChannel::user_energy(std::size_t k) const
{
    double e = 0.0;
    for (std::size_t m = 0; m < num_antennas; ++m)
        for (const auto &h : taps_for(m, k))
            e += std::norm(h);
    return e;
}

TapChannel sample_rayleigh(std::size_t num_antennas, std::size_t num_users, std::size_t num_taps, RngSeed seed,
                           double tap_period, PowerDelayProfile profile, double decay_db_per_tap)
{
    if (num_antennas == 0 || num_users == 0 || num_taps == 0)
        throw std::invalid_argument("sample_rayleigh: M, K and L must be at least 1");
    if (!(tap_period > 0.0))
        throw std::invalid_argument("sample_rayleigh: tap_period must be positive");

    std::vector<double> variance(num_taps, 1.0 / static_cast<double>(num_taps));
    if (profile == PowerDelayProfile::exponential) {
        double total = 0.0;
        for (std::size_t l = 0; l < num_taps; ++l) {
            variance[l] = std::pow(10.0, -decay_db_per_tap * static_cast<double>(l) / 10.0);
            total += variance[l];
        }
        for (auto &v : variance)
            v /= total;
    }
    std::vector<double> sigma(num_taps);
    for (std::size_t l = 0; l < num_taps; ++l)
        sigma[l] = std::sqrt(variance[l] / 2.0);

    TapChannel ch;
    ch.num_antennas = num_antennas;
    ch.num_users = num_users;
    ch.num_taps = num_taps;
    ch.tap_period = tap_period;
    ch.taps.resize(num_antennas * num_users * num_taps);

    auto engine = make_engine(seed.child("rayleigh"));
    std::normal_distribution<double> normal(0.0, 1.0);
    for (std::size_t i = 0; i < ch.taps.size(); ++i) {
        const double s = sigma[i % num_taps];
        const double re = normal(engine);
        const double im = normal(engine);
        ch.taps[i] = {s * re, s * im};
    }
    return ch;
}

std::size_t response_period(const TapChannel &channel, std::size_t n, double sample_rate)
{
    const double spacing = channel.tap_period * sample_rate;
    const double rounded = std::round(spacing);
    if (n == 0 || rounded < 1.0 || std::abs(spacing - rounded) > 1e-9)
        return 0;
    const auto s = static_cast<std::size_t>(rounded);
    return n % s == 0 ? n / s : 0;
}

ComplexVector tap_spectrum(const TapChannel &channel, std::size_t m, std::size_t k, std::size_t period)
{
    if (period == 0)
        throw std::invalid_argument("tap_spectrum: period must be positive");
    const auto taps = channel.taps_for(m, k);
    ComplexVector padded(period, Complex{});
    for (std::size_t l = 0; l < taps.size(); ++l)
        padded[l % period] += taps[l];
    return fft::forward(padded);
}

ComplexVector frequency_response(const TapChannel &channel, std::size_t m, std::size_t k, std::size_t n,
                                 double sample_rate)
{
    ComplexVector resp(n);
    if (n == 0)
        return resp;

    if (const std::size_t period = response_period(channel, n, sample_rate)) {
        const auto base = tap_spectrum(channel, m, k, period);
        for (std::size_t start = 0; start < n; start += period)
            std::copy(base.begin(), base.end(), resp.begin() + static_cast<std::ptrdiff_t>(start));
        return resp;
    }

    const auto taps = channel.taps_for(m, k);
    for (std::size_t b = 0; b < n; ++b) {
        const double f = bin_frequency(b, n, sample_rate);
        Complex acc{};
        for (std::size_t l = 0; l < taps.size(); ++l)
            acc += taps[l] * std::polar(1.0, -2.0 * pi * f * static_cast<double>(l) * channel.tap_period);
        resp[b] = acc;
    }
    return resp;
}

double distance(Point2 a, Point2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

void Rectangle::validate() const
{
    if (!(x_max > x_min) || !(y_max > y_min))
        throw std::invalid_argument("Rectangle: region is degenerate");
}

ComplexVector RayChannel::response(double absolute_frequency) const
{
    ComplexVector out(num_antennas);
    for (std::size_t m = 0; m < num_antennas; ++m)
        out[m] = response(m, absolute_frequency);
    return out;
}

Complex RayChannel::response(std::size_t m, double absolute_frequency) const
{
    Complex acc{};
    for (std::size_t s = 0; s < num_scatterers; ++s) {
        const std::size_t i = m * num_scatterers + s;
        acc += gains[i] * std::polar(1.0, -2.0 * pi * absolute_frequency * delays[i]);
    }
    return acc;
}

ScatterMap::ScatterMap(UlaGeometry geometry, std::vector<Point2> scatterers, std::vector<Point2> users,
                       std::vector<double> reflection)
    : geometry_(geometry), scatterers_(std::move(scatterers)), users_(std::move(users)),
      reflection_(std::move(reflection))
{
    geometry_.validate();
    if (scatterers_.empty())
        throw std::invalid_argument("ScatterMap: need at least one scatterer");
    if (reflection_.size() != scatterers_.size())
        throw std::invalid_argument("ScatterMap: one reflection coefficient per scatterer");
    bs_legs_.resize(geometry_.num_antennas * scatterers_.size());
    for (std::size_t m = 0; m < geometry_.num_antennas; ++m) {
        const Point2 e = element_position(m);
        for (std::size_t s = 0; s < scatterers_.size(); ++s) {
            const double d = distance(e, scatterers_[s]);
            if (d <= 0.0)
                throw std::domain_error("ScatterMap: scatterer coincides with an antenna");
            bs_legs_[m * scatterers_.size() + s] = d;
        }
    }
}

Point2 ScatterMap::element_position(std::size_t m) const
{
    const double offset = (static_cast<double>(m) - 0.5 * static_cast<double>(geometry_.num_antennas - 1));
    return {0.0, offset * geometry_.spacing_meters()};
}

RayChannel ScatterMap::channel_to(Point2 terminal) const
{
    const std::size_t S = scatterers_.size();
    std::vector<double> last_leg(S);
    for (std::size_t s = 0; s < S; ++s) {
        last_leg[s] = distance(scatterers_[s], terminal);
        if (last_leg[s] < 1e-9)
            throw std::domain_error("ScatterMap: terminal coincides with a scatterer");
    }
    RayChannel ch;
    ch.terminal = terminal;
    ch.num_antennas = geometry_.num_antennas;
    ch.num_scatterers = S;
    ch.gains.resize(ch.num_antennas * S);
    ch.delays.resize(ch.num_antennas * S);
    for (std::size_t m = 0; m < ch.num_antennas; ++m) {
        for (std::size_t s = 0; s < S; ++s) {
            const double d1 = bs_legs_[m * S + s];
            ch.gains[m * S + s] = reflection_[s] / (d1 * last_leg[s]);
            ch.delays[m * S + s] = (d1 + last_leg[s]) / geometry::kSpeedOfLight;
        }
    }
    return ch;
}

Point2 grid_cell_center(const Rectangle &region, std::size_t n, std::size_t ix, std::size_t iy)
{
    const double dx = region.width() / static_cast<double>(n);
    const double dy = region.height() / static_cast<double>(n);
    return {region.x_min + (static_cast<double>(ix) + 0.5) * dx, region.y_min + (static_cast<double>(iy) + 0.5) * dy};
}

ScatterMap sample_scatter_map(const UlaGeometry &geometry, std::size_t num_scatterers, const Rectangle &region,
                              std::size_t user_count, RngSeed seed, std::size_t user_grid_points)
{
    region.validate();
    if (num_scatterers == 0)
        throw std::invalid_argument("sample_scatter_map: need at least one scatterer");

    auto engine = make_engine(seed.child("scatter-layout"));
    std::uniform_real_distribution<double> ux(region.x_min, region.x_max);
    std::uniform_real_distribution<double> uy(region.y_min, region.y_max);

    std::vector<Point2> scatterers(num_scatterers);
    for (auto &p : scatterers) {
        const double x = ux(engine);
        const double y = uy(engine);
        p = {x, y};
    }

    std::vector<Point2> users(user_count);
    if (user_grid_points > 0) {
        if (user_count > user_grid_points * user_grid_points)
            throw std::invalid_argument("sample_scatter_map: more users than grid cells");
        std::uniform_int_distribution<std::size_t> cell(0, user_grid_points - 1);
        std::set<std::pair<std::size_t, std::size_t>> taken;
        for (auto &p : users) {
            std::size_t ix = 0;
            std::size_t iy = 0;
            do {
                ix = cell(engine);
                iy = cell(engine);
            } while (!taken.emplace(ix, iy).second);
            p = grid_cell_center(region, user_grid_points, ix, iy);
        }
    } else {
        for (auto &p : users) {
            const double x = ux(engine);
            const double y = uy(engine);
            p = {x, y};
        }
    }
    return ScatterMap(geometry, std::move(scatterers), std::move(users), std::vector<double>(num_scatterers, 1.0));
}

} // namespace oobsim::channel
