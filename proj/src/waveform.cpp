// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 oobsim authors

#include "oobsim/waveform.hpp"

#include "oobsim/fft.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace oobsim::waveform {
namespace {

using std::numbers::pi;

// t in symbol periods.
double rrc_value(double t, double beta)
{
    if (std::abs(t) < 1e-12)
        return 1.0 - beta + 4.0 * beta / pi;
    if (beta > 0.0 && std::abs(std::abs(4.0 * beta * t) - 1.0) < 1e-9) {
        const double a = pi / (4.0 * beta);
        return beta / std::numbers::sqrt2 * ((1.0 + 2.0 / pi) * std::sin(a) + (1.0 - 2.0 / pi) * std::cos(a));
    }
    const double num = std::sin(pi * t * (1.0 - beta)) + 4.0 * beta * t * std::cos(pi * t * (1.0 + beta));
    const double den = pi * t * (1.0 - (4.0 * beta * t) * (4.0 * beta * t));
    return num / den;
}

// Circularly wrapped filter of length n with tap c = (len-1)/2 at index 0.
ComplexVector wrapped_filter(const PulseShape &shape, std::size_t n)
{
    ComplexVector h(n, Complex{});
    const auto center = static_cast<long long>(shape.taps.size() / 2);
    const auto len = static_cast<long long>(n);
    for (std::size_t j = 0; j < shape.taps.size(); ++j) {
        long long idx = (static_cast<long long>(j) - center) % len;
        if (idx < 0)
            idx += len;
        h[static_cast<std::size_t>(idx)] += shape.taps[j];
    }
    return h;
}

} // namespace

PulseShape design_rrc(double rolloff, std::size_t span_symbols, std::size_t oversampling_factor)
{
    if (!(rolloff >= 0.0 && rolloff <= 1.0))
        throw std::invalid_argument("design_rrc: rolloff must be in [0, 1]");
    if (span_symbols == 0 || oversampling_factor == 0)
        throw std::invalid_argument("design_rrc: span_symbols and oversampling_factor must be positive");

    const std::size_t len = span_symbols * oversampling_factor + 1;
    const auto center = static_cast<double>(len / 2);
    const auto os = static_cast<double>(oversampling_factor);

    PulseShape shape;
    shape.oversampling_factor = oversampling_factor;
    shape.rolloff = rolloff;
    shape.taps.resize(len);
    double energy = 0.0;
    for (std::size_t k = 0; k < len; ++k) {
        shape.taps[k] = rrc_value((static_cast<double>(k) - center) / os, rolloff);
        energy += shape.taps[k] * shape.taps[k];
    }
    const double scale = 1.0 / std::sqrt(energy);
    for (auto &t : shape.taps)
        t *= scale;
    // Exact mirror symmetry regardless of rounding in the formula.
    for (std::size_t k = 0; k < len / 2; ++k)
        shape.taps[len - 1 - k] = shape.taps[k];
    return shape;
}

std::vector<ComplexVector> generate_symbols(std::size_t num_users, std::size_t num_symbols, RngSeed seed,
                                            SymbolAlphabet alphabet)
{
    std::vector<ComplexVector> streams(num_users, ComplexVector(num_symbols));
    for (std::size_t k = 0; k < num_users; ++k) {
        auto engine = make_engine(seed.child("symbols", k));
        auto &out = streams[k];
        if (alphabet == SymbolAlphabet::gaussian) {
            std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
            for (auto &s : out) {
                const double re = normal(engine);
                const double im = normal(engine);
                s = {re, im};
            }
        } else {
            const double a = 1.0 / std::numbers::sqrt2;
            for (auto &s : out) {
                const auto bits = engine();
                s = {(bits & 1U) ? a : -a, (bits & 2U) ? a : -a};
            }
        }
    }
    return streams;
}

SampledSignal pulse_shape(std::span<const Complex> symbols, const PulseShape &shape, double baud_rate)
{
    if (symbols.empty())
        throw std::invalid_argument("pulse_shape: no symbols");
    const std::size_t os = shape.oversampling_factor;
    const double gain = std::sqrt(static_cast<double>(os));
    SampledSignal out;
    out.sample_rate = baud_rate * static_cast<double>(os);
    out.samples.assign((symbols.size() - 1) * os + shape.taps.size(), Complex{});
    for (std::size_t i = 0; i < symbols.size(); ++i) {
        const Complex s = symbols[i] * gain;
        auto *dst = out.samples.data() + i * os;
        for (std::size_t j = 0; j < shape.taps.size(); ++j)
            dst[j] += s * shape.taps[j];
    }
    return out;
}

SampledSignal pulse_shape_cyclic(std::span<const Complex> symbols, const PulseShape &shape, double baud_rate)
{
    if (symbols.empty())
        throw std::invalid_argument("pulse_shape_cyclic: no symbols");
    const std::size_t num = symbols.size();
    const std::size_t os = shape.oversampling_factor;
    const std::size_t n = num * os;

    // The spectrum of the zero-stuffed sequence is the N-point symbol spectrum repeated os times.
    const auto sym_spec = fft::forward(symbols);
    const auto filt_spec = fft::forward(wrapped_filter(shape, n));
    const double gain = std::sqrt(static_cast<double>(os));
    ComplexVector spec(n);
    for (std::size_t k = 0; k < n; ++k)
        spec[k] = sym_spec[k % num] * filt_spec[k] * gain;

    SampledSignal out;
    out.sample_rate = baud_rate * static_cast<double>(os);
    out.samples = fft::inverse(spec);
    return out;
}

double peak_to_average_ratio(const SampledSignal &signal, double percentile)
{
    if (!(percentile > 0.0 && percentile < 1.0))
        throw std::invalid_argument("peak_to_average_ratio: percentile must be in (0, 1)");
    if (signal.empty())
        throw std::invalid_argument("peak_to_average_ratio: empty signal");
    std::vector<double> inst(signal.size());
    double mean = 0.0;
    for (std::size_t i = 0; i < inst.size(); ++i) {
        inst[i] = std::norm(signal.samples[i]);
        mean += inst[i];
    }
    mean /= static_cast<double>(inst.size());
    if (!(mean > 0.0))
        throw std::invalid_argument("peak_to_average_ratio: zero-power signal");

    // Linear interpolation between order statistics.
    const double pos = percentile * static_cast<double>(inst.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const double frac = pos - static_cast<double>(lo);
    std::nth_element(inst.begin(), inst.begin() + static_cast<std::ptrdiff_t>(lo), inst.end());
    double q = inst[lo];
    if (frac > 0.0 && lo + 1 < inst.size()) {
        const double next = *std::min_element(inst.begin() + static_cast<std::ptrdiff_t>(lo) + 1, inst.end());
        q += frac * (next - q);
    }
    return 10.0 * std::log10(q / mean);
}

} // namespace oobsim::waveform
