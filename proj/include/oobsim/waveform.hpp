// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 oobsim authors

#pragma once

#include "oobsim/rng.hpp"
#include "oobsim/signal.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace oobsim::waveform {

// Root-raised-cosine FIR, symmetric about its center tap, unit energy (sum of squared taps = 1).
struct PulseShape
{
    std::vector<double> taps;
    std::size_t oversampling_factor = 1;
    double rolloff = 0.0;
};

// Standard RRC impulse response sampled at Ts / oversampling_factor over span_symbols symbol periods
// (span_symbols * oversampling_factor + 1 taps). The removable singularities at t = 0 and
// t = +-Ts/(4 rolloff) use their limit values. Throws std::invalid_argument for rolloff outside [0, 1]
// or zero span/oversampling.
PulseShape design_rrc(double rolloff, std::size_t span_symbols, std::size_t oversampling_factor);

enum class SymbolAlphabet
{
    gaussian, // circularly-symmetric complex Gaussian, E|s|^2 = 1
    qpsk,     // (+-1 +-j)/sqrt(2)
};

// K independent streams of N zero-mean, unit-power symbols. Stream k is drawn from seed.child("symbols", k).
std::vector<ComplexVector> generate_symbols(std::size_t num_users, std::size_t num_symbols, RngSeed seed,
                                            SymbolAlphabet alphabet = SymbolAlphabet::gaussian);

// Zero-stuffed upsampling followed by linear convolution with sqrt(os) * taps, so unit-power symbols
// give unit-power output. Output length (N - 1) * os + taps.size(); sample_rate = baud_rate * os.
SampledSignal pulse_shape(std::span<const Complex> symbols, const PulseShape &shape, double baud_rate);

// Same filter applied as a circular convolution over one period of N * os samples, with the filter
// centered on each symbol. This is the block form used by every simulation experiment.
SampledSignal pulse_shape_cyclic(std::span<const Complex> symbols, const PulseShape &shape, double baud_rate);

// Ratio in dB of the given percentile of instantaneous power |x|^2 to the mean power.
// Throws std::invalid_argument for percentile outside (0, 1) or an empty/zero-power signal.
double peak_to_average_ratio(const SampledSignal &signal, double percentile);

} // namespace oobsim::waveform
