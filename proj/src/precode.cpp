// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 oobsim authors

#include "oobsim/precode.hpp"

#include "oobsim/fft.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace oobsim::precode {
namespace {

using std::numbers::pi;

void check_users(std::span<const SampledSignal> users, std::size_t channel_users)
{
    if (users.empty())
        throw std::invalid_argument("mrt_precode: no user signals");
    if (users.size() != channel_users)
        throw std::invalid_argument("mrt_precode: user count does not match the channel");
    for (const auto &u : users) {
        if (u.size() != users.front().size() || u.sample_rate != users.front().sample_rate)
            throw std::invalid_argument("mrt_precode: user signals differ in length or sample rate");
        if (u.empty())
            throw std::invalid_argument("mrt_precode: empty user signal");
    }
}

void check_allocation(const PowerAllocation &allocation, std::size_t num_users)
{
    if (allocation.per_user_powers.size() != num_users)
        throw std::invalid_argument("mrt_precode: allocation size does not match the user count");
    for (double p : allocation.per_user_powers)
        if (!(p >= 0.0))
            throw std::invalid_argument("mrt_precode: negative user power");
}

// exp(j phase) on n bins of a cyclic block: carrier term times a per-bin step, resynchronized every
// 256 bins to bound rounding drift.
void delay_phasors(double carrier, double delay, std::size_t n, double sample_rate, double sign,
                   std::span<Complex> out)
{
    for (std::size_t b = 0; b < n; ++b) {
        if (b % 256 == 0 || b == (n + 1) / 2) {
            const double f = carrier + bin_frequency(b, n, sample_rate);
            out[b] = std::polar(1.0, sign * 2.0 * pi * f * delay);
            continue;
        }
        const double df = sample_rate / static_cast<double>(n);
        out[b] = out[b - 1] * std::polar(1.0, sign * 2.0 * pi * df * delay);
    }
}

} // namespace

double PrecodedFrame::measured_power() const
{
    double p = 0.0;
    for (const auto &s : per_antenna)
        p += mean_power(s);
    return p;
}

PowerAllocation allocate_power(std::span<const double> path_gains, AllocationMode mode)
{
    if (path_gains.empty())
        throw std::invalid_argument("allocate_power: no users");
    const auto K = path_gains.size();
    PowerAllocation a;
    a.per_user_powers.assign(K, 1.0 / static_cast<double>(K));
    if (mode == AllocationMode::equal)
        return a;

    double total = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
        if (!(path_gains[k] > 0.0) || !std::isfinite(path_gains[k]))
            throw std::invalid_argument("allocate_power: inverse_path_loss needs positive gains");
        a.per_user_powers[k] = 1.0 / (path_gains[k] * path_gains[k]);
        total += a.per_user_powers[k];
    }
    for (auto &p : a.per_user_powers)
        p /= total;
    return a;
}

void scale_to_power(PrecodedFrame &frame, double total_power)
{
    const double measured = frame.measured_power();
    if (!(measured > 0.0))
        throw std::invalid_argument("scale_to_power: frame carries no power");
    const double g = std::sqrt(total_power / measured);
    for (auto &s : frame.per_antenna)
        for (auto &v : s.samples)
            v *= g;
    frame.total_power = total_power;
}

PrecodedFrame mrt_precode_frequency(std::span<const SampledSignal> user_signals, std::size_t num_antennas,
                                    const ResponseFn &response, const PowerAllocation &allocation,
                                    double total_power)
{
    check_users(user_signals, allocation.per_user_powers.size());
    if (num_antennas == 0)
        throw std::invalid_argument("mrt_precode: no antennas");
    if (!(total_power > 0.0))
        throw std::invalid_argument("mrt_precode: total_power must be positive");

    const std::size_t n = user_signals.front().size();
    const std::size_t M = num_antennas;
    std::vector<ComplexVector> spectra(M, ComplexVector(n, Complex{}));
    ComplexVector user_spec(n);
    ComplexVector h(n);

    // Two passes per user (energy, then accumulation) keep the working set at one response vector.
    for (std::size_t k = 0; k < user_signals.size(); ++k) {
        double energy = 0.0;
        for (std::size_t m = 0; m < M; ++m) {
            response(k, m, h);
            for (const auto &v : h)
                energy += std::norm(v);
        }
        energy /= static_cast<double>(n);
        if (!(energy > 0.0))
            throw std::invalid_argument("mrt_precode: channel of user " + std::to_string(k) + " is zero");
        if (allocation.per_user_powers[k] == 0.0)
            continue;

        fft::forward(user_signals[k].samples, user_spec);
        const double w = std::sqrt(allocation.per_user_powers[k] / energy);
        for (std::size_t m = 0; m < M; ++m) {
            response(k, m, h);
            auto &dst = spectra[m];
            for (std::size_t b = 0; b < n; ++b)
                dst[b] += w * std::conj(h[b]) * user_spec[b];
        }
    }

    PrecodedFrame frame;
    frame.per_antenna.resize(M);
    for (std::size_t m = 0; m < M; ++m) {
        frame.per_antenna[m].sample_rate = user_signals.front().sample_rate;
        frame.per_antenna[m].samples = fft::inverse(spectra[m]);
    }
    scale_to_power(frame, total_power);
    return frame;
}

PrecodedFrame mrt_precode(std::span<const SampledSignal> user_signals, const channel::TapChannel &channel,
                          const PowerAllocation &allocation, double total_power)
{
    check_users(user_signals, channel.num_users);
    check_allocation(allocation, channel.num_users);
    const std::size_t n = user_signals.front().size();
    const double fs = user_signals.front().sample_rate;
    const std::size_t period = channel::response_period(channel, n, fs);
    if (period == 0) {
        auto response = [&](std::size_t k, std::size_t m, std::span<Complex> out) {
            const auto r = channel::frequency_response(channel, m, k, n, fs);
            std::copy(r.begin(), r.end(), out.begin());
        };
        return mrt_precode_frequency(user_signals, channel.num_antennas, response, allocation, total_power);
    }
    if (!(total_power > 0.0))
        throw std::invalid_argument("mrt_precode: total_power must be positive");

    // Symbol-spaced taps: the response repeats every `period` bins, so each antenna/user pair needs one
    // short DFT, and the aggregate energy is the folded tap energy.
    const std::size_t M = channel.num_antennas;
    std::vector<ComplexVector> spectra(M, ComplexVector(n, Complex{}));
    ComplexVector user_spec(n);
    for (std::size_t k = 0; k < channel.num_users; ++k) {
        std::vector<ComplexVector> base(M);
        double energy = 0.0;
        for (std::size_t m = 0; m < M; ++m) {
            base[m] = channel::tap_spectrum(channel, m, k, period);
            for (const auto &v : base[m])
                energy += std::norm(v);
        }
        energy /= static_cast<double>(period);
        if (!(energy > 0.0))
            throw std::invalid_argument("mrt_precode: channel of user " + std::to_string(k) + " is zero");
        if (allocation.per_user_powers[k] == 0.0)
            continue;

        fft::forward(user_signals[k].samples, user_spec);
        const double w = std::sqrt(allocation.per_user_powers[k] / energy);
        for (std::size_t m = 0; m < M; ++m) {
            auto &h = base[m];
            for (auto &v : h)
                v = w * std::conj(v);
            Complex *dst = spectra[m].data();
            const Complex *src = user_spec.data();
            for (std::size_t start = 0; start < n; start += period)
                for (std::size_t j = 0; j < period; ++j)
                    dst[start + j] += h[j] * src[start + j];
        }
    }

    PrecodedFrame frame;
    frame.per_antenna.resize(M);
    for (std::size_t m = 0; m < M; ++m) {
        frame.per_antenna[m].sample_rate = fs;
        frame.per_antenna[m].samples = fft::inverse(spectra[m]);
    }
    scale_to_power(frame, total_power);
    return frame;
}

PrecodedFrame mrt_precode(std::span<const SampledSignal> user_signals, const channel::LosChannel &channel,
                          const PowerAllocation &allocation, double total_power)
{
    check_users(user_signals, channel.num_users());
    check_allocation(allocation, channel.num_users());
    const std::size_t n = user_signals.front().size();
    const double fs = user_signals.front().sample_rate;
    const double fc = channel.geometry.carrier_frequency;

    // Element m response to user k is beta_k * z_k(b)^m with z_k(b) = exp(-j 2 pi f_b d sin(theta_k) / c),
    // f_b the absolute frequency of bin b.
    const double spacing = channel.geometry.spacing_meters();
    std::vector<ComplexVector> step(channel.num_users(), ComplexVector(n));
    for (std::size_t k = 0; k < channel.num_users(); ++k) {
        const double unit_delay = spacing * std::sin(channel.user_angles[k].angle()) / geometry::kSpeedOfLight;
        delay_phasors(fc, unit_delay, n, fs, -1.0, step[k]);
    }

    // mrt_precode_frequency walks the antennas in increasing order per user, so z^m advances in place.
    ComplexVector power_of_z(n);
    auto response = [&](std::size_t k, std::size_t m, std::span<Complex> out) {
        if (m == 0)
            std::fill(power_of_z.begin(), power_of_z.end(), Complex{1.0, 0.0});
        const double g = channel.path_gains[k];
        for (std::size_t b = 0; b < n; ++b) {
            out[b] = g * power_of_z[b];
            power_of_z[b] *= step[k][b];
        }
    };
    return mrt_precode_frequency(user_signals, channel.num_antennas(), response, allocation, total_power);
}

PrecodedFrame mrt_precode(std::span<const SampledSignal> user_signals,
                          std::span<const channel::RayChannel> user_channels, double carrier_frequency,
                          const PowerAllocation &allocation, double total_power)
{
    check_users(user_signals, user_channels.size());
    check_allocation(allocation, user_channels.size());
    const std::size_t n = user_signals.front().size();
    const double fs = user_signals.front().sample_rate;
    const std::size_t M = user_channels.front().num_antennas;
    for (const auto &c : user_channels)
        if (c.num_antennas != M)
            throw std::invalid_argument("mrt_precode: ray channels differ in antenna count");

    ComplexVector ph(n);
    auto response = [&](std::size_t k, std::size_t m, std::span<Complex> out) {
        const auto &ch = user_channels[k];
        std::fill(out.begin(), out.end(), Complex{});
        for (std::size_t s = 0; s < ch.num_scatterers; ++s) {
            const std::size_t i = m * ch.num_scatterers + s;
            delay_phasors(carrier_frequency, ch.delays[i], n, fs, -1.0, ph);
            for (std::size_t b = 0; b < n; ++b)
                out[b] += ch.gains[i] * ph[b];
        }
    };
    return mrt_precode_frequency(user_signals, M, response, allocation, total_power);
}

PrecodedFrame siso_frame(const SampledSignal &signal, double total_power)
{
    if (signal.empty())
        throw std::invalid_argument("siso_frame: empty signal");
    PrecodedFrame frame;
    frame.per_antenna.push_back(signal);
    scale_to_power(frame, total_power);
    return frame;
}

double array_power_from_siso(double siso_power, std::size_t num_antennas, std::size_t num_users)
{
    if (num_users == 0 || num_users > num_antennas)
        throw std::invalid_argument("array_power_from_siso: need 1 <= K <= M");
    return siso_power * static_cast<double>(num_users) / static_cast<double>(num_antennas);
}

double siso_reference_power(double array_power, std::size_t num_antennas, std::size_t num_users)
{
    if (num_users == 0 || num_users > num_antennas)
        throw std::invalid_argument("siso_reference_power: need 1 <= K <= M");
    return array_power * static_cast<double>(num_antennas) / static_cast<double>(num_users);
}

} // namespace oobsim::precode
