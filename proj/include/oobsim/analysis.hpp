// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 oobsim authors

#pragma once

#include "oobsim/channel.hpp"
#include "oobsim/geometry.hpp"
#include "oobsim/precode.hpp"
#include "oobsim/signal.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace oobsim::analysis {

using precode::PrecodedFrame;

// Power spectral density on an ascending baseband frequency grid covering [-fs/2, fs/2].
struct PsdEstimate
{
    std::vector<double> frequencies; // Hz
    std::vector<double> density;     // power per Hz
};

// Welch estimate: periodic Hann window, 50% overlapped segments, averaged periodograms. Normalized so
// that integrating the density over [-fs/2, fs/2] returns the mean power.
// Throws std::invalid_argument when the signal is shorter than 2 * segment_length.
PsdEstimate estimate_psd(const SampledSignal &signal, std::size_t segment_length = 4096);

// Periodogram of one cyclic block (rectangular window, no leakage for periodic content). Integral
// equals the mean power up to the trapezoid rule.
PsdEstimate cyclic_psd(const SampledSignal &signal);
// Same, from DFT bins already computed (natural FFT order, unnormalized forward transform).
PsdEstimate cyclic_psd_from_bins(std::span<const Complex> bins, double sample_rate);

struct Band
{
    double lo = 0.0; // Hz
    double hi = 0.0;
};

// Allocated band [-W/2, W/2] and two adjacent bands of equal width W on either side.
struct BandSpec
{
    double width = 0.0; // W, Hz

    static BandSpec for_waveform(double baud_rate, double rolloff) { return {baud_rate * (1.0 + rolloff)}; }

    Band allocated() const { return {-width / 2.0, width / 2.0}; }
    Band lower() const { return {-1.5 * width, -width / 2.0}; }
    Band upper() const { return {width / 2.0, 1.5 * width}; }
};

// Trapezoidal integral of the density over the band, with linear interpolation at the band edges.
// Throws std::invalid_argument for lo > hi or a band outside the estimate's span.
double band_power(const PsdEstimate &psd, Band band);

struct BandPowers
{
    double allocated = 0.0;
    double lower = 0.0;
    double upper = 0.0;

    double strongest_adjacent() const { return lower > upper ? lower : upper; }
};

BandPowers band_powers(const PsdEstimate &psd, const BandSpec &bands);

// Band powers of a cyclic block straight from its DFT bins (sum of |X_b|^2 / n^2 per band, bins
// on a band edge split by the fraction of the bin inside the band).
BandPowers band_powers_from_bins(std::span<const Complex> bins, double sample_rate, const BandSpec &bands);
// Same, from per-bin mean powers (|X_b|^2 / n^2, e.g. averaged over realizations).
BandPowers band_powers_from_power(std::span<const double> bin_power, double sample_rate, const BandSpec &bands);

// DFT bins (natural order) whose cells reach into [-1.5 W, 1.5 W]: all bins the band powers use.
std::vector<std::size_t> band_bins(std::size_t n, double sample_rate, const BandSpec &bands);

// 10 log10(allocated / strongest adjacent) for one signal. Throws std::domain_error when the
// adjacent bands carry no power (ACLR above any measurable floor).
double aclr_db(const BandPowers &powers);

// Conducted ACLR: band powers summed over antennas before taking the ratio. Uses the exact cyclic
// periodogram of each antenna, or Welch with the given segment length when it is nonzero.
double conducted_aclr(const PrecodedFrame &frame, const BandSpec &bands, std::size_t welch_segment = 0);

// Per-antenna DFTs of a frame, computed once and shared by the receive-side operations below.
struct FrameSpectrum
{
    std::vector<ComplexVector> bins; // [m][b], natural FFT order
    double sample_rate = 0.0;

    std::size_t num_antennas() const { return bins.size(); }
    std::size_t length() const { return bins.empty() ? 0 : bins.front().size(); }
};

FrameSpectrum spectrum_of(const PrecodedFrame &frame);

// Signal at a far-field point in the given direction: r(t) = sum_m x_m(t - tau_m(theta)), with each
// DFT bin rotated at its absolute frequency (carrier + bin offset). Throws on an antenna-count mismatch.
SampledSignal far_field_signal(const PrecodedFrame &frame, const geometry::UlaGeometry &geometry,
                               geometry::Direction direction);

struct Beampattern
{
    std::vector<geometry::Direction> angles;
    std::vector<double> inband_power;
    std::vector<double> oob_power; // strongest adjacent band
};

Beampattern beampattern(const PrecodedFrame &frame, const geometry::UlaGeometry &geometry,
                        std::span<const geometry::Direction> angle_grid, const BandSpec &bands);
Beampattern beampattern(const FrameSpectrum &spectrum, const geometry::UlaGeometry &geometry,
                        std::span<const geometry::Direction> angle_grid, const BandSpec &bands);

// DFT bins of sum_m h[m][user] (*) x_m (cyclic convolution), i.e. the block seen by one receiver.
ComplexVector received_bins(const FrameSpectrum &spectrum, const channel::TapChannel &channel, std::size_t user = 0);
SampledSignal received_signal(const PrecodedFrame &frame, const channel::TapChannel &channel, std::size_t user = 0);

struct ReceivedPower
{
    double inband = 0.0;
    double oob = 0.0; // strongest adjacent band
};

// In-band and OOB power received through an M x L victim channel (a TapChannel with one user).
ReceivedPower fading_received_power(const PrecodedFrame &frame, const channel::TapChannel &victim,
                                    const BandSpec &bands);
ReceivedPower fading_received_power(const FrameSpectrum &spectrum, const channel::TapChannel &victim,
                                    const BandSpec &bands);

// Over-the-air ratio 10 log10(inband / oob). Throws std::invalid_argument for nonpositive inputs.
double array_aclr(double inband_at_served_user, double oob_at_reference_victim);

struct CcdfCurve
{
    std::vector<double> thresholds; // dB
    std::vector<double> probability; // P(X > threshold)
};

// Linearly interpolated order statistic, p in [0, 1]. Throws std::invalid_argument for an empty set
// or p outside [0, 1].
double quantile(std::span<const double> samples, double p);

// Empirical complementary CDF. Throws std::invalid_argument for an empty sample set.
CcdfCurve empirical_ccdf(std::span<const double> samples, std::span<const double> thresholds);

} // namespace oobsim::analysis
