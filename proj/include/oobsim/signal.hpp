// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 oobsim authors

#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace oobsim {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;

// Uniformly sampled complex-baseband waveform.
//
// Every waveform produced by the simulation chain is a cyclic block: the samples are one period of
// a periodic signal, so DFT bins carry the exact power distribution and fractional delays applied
// as per-bin phase ramps are exact for band-limited content.
struct SampledSignal
{
    ComplexVector samples;
    double sample_rate = 1.0; // Hz

    std::size_t size() const { return samples.size(); }
    bool empty() const { return samples.empty(); }
};

// Mean of |x|^2 over the samples; 0 for an empty sequence.
double mean_power(std::span<const Complex> samples);
inline double mean_power(const SampledSignal &signal) { return mean_power(signal.samples); }

// Baseband frequency of DFT bin k for an n-point transform at the given sample rate.
// Bins 0..ceil(n/2)-1 are non-negative, the rest negative (natural FFT order).
double bin_frequency(std::size_t k, std::size_t n, double sample_rate);

double to_db(double linear);
double from_db(double db);

} // namespace oobsim
