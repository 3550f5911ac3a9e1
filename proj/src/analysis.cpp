// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 oobsim authors

#include "oobsim/analysis.hpp"

#include "oobsim/fft.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace oobsim::analysis {
namespace {

using std::numbers::pi;

// Ascending-frequency view of a periodic bin array with the first point repeated one period later,
// so the trapezoid rule over the full span equals the plain sum of the bins.
PsdEstimate periodic_to_estimate(std::span<const double> bin_density, double sample_rate)
{
    const std::size_t n = bin_density.size();
    const std::size_t half = (n + 1) / 2;
    PsdEstimate est;
    est.frequencies.reserve(n + 1);
    est.density.reserve(n + 1);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t b = (half + i) % n;
        est.frequencies.push_back(bin_frequency(b, n, sample_rate));
        est.density.push_back(bin_density[b]);
    }
    est.frequencies.push_back(est.frequencies.front() + sample_rate);
    est.density.push_back(est.density.front());
    return est;
}

// Length of the overlap of [a, b] and [lo, hi].
double overlap(double a, double b, double lo, double hi) { return std::max(0.0, std::min(b, hi) - std::max(a, lo)); }

void check_band(Band band, double span_lo, double span_hi)
{
    if (!(band.lo <= band.hi))
        throw std::invalid_argument("band: lower edge above upper edge");
    const double eps = 1e-9 * (span_hi - span_lo);
    if (band.lo < span_lo - eps || band.hi > span_hi + eps)
        throw std::invalid_argument("band: outside the spectrum's frequency span");
}

} // namespace

PsdEstimate estimate_psd(const SampledSignal &signal, std::size_t segment_length)
{
    if (segment_length < 2)
        throw std::invalid_argument("estimate_psd: segment length must be at least 2");
    if (signal.size() < 2 * segment_length)
        throw std::invalid_argument("estimate_psd: signal shorter than two segments");

    const std::size_t L = segment_length;
    const std::size_t hop = L / 2;
    std::vector<double> window(L);
    double window_energy = 0.0;
    for (std::size_t i = 0; i < L; ++i) {
        window[i] = 0.5 * (1.0 - std::cos(2.0 * pi * static_cast<double>(i) / static_cast<double>(L)));
        window_energy += window[i] * window[i];
    }

    std::vector<double> acc(L, 0.0);
    ComplexVector seg(L);
    ComplexVector spec(L);
    std::size_t count = 0;
    for (std::size_t start = 0; start + L <= signal.size(); start += hop) {
        for (std::size_t i = 0; i < L; ++i)
            seg[i] = signal.samples[start + i] * window[i];
        fft::forward(seg, spec);
        for (std::size_t b = 0; b < L; ++b)
            acc[b] += std::norm(spec[b]);
        ++count;
    }
    const double scale = 1.0 / (static_cast<double>(count) * window_energy * signal.sample_rate);
    for (auto &v : acc)
        v *= scale;
    return periodic_to_estimate(acc, signal.sample_rate);
}

PsdEstimate cyclic_psd(const SampledSignal &signal)
{
    if (signal.empty())
        throw std::invalid_argument("cyclic_psd: empty signal");
    return cyclic_psd_from_bins(fft::forward(signal.samples), signal.sample_rate);
}

PsdEstimate cyclic_psd_from_bins(std::span<const Complex> bins, double sample_rate)
{
    const double n = static_cast<double>(bins.size());
    std::vector<double> density(bins.size());
    for (std::size_t b = 0; b < bins.size(); ++b)
        density[b] = std::norm(bins[b]) / (n * sample_rate);
    return periodic_to_estimate(density, sample_rate);
}

double band_power(const PsdEstimate &psd, Band band)
{
    if (psd.frequencies.size() < 2 || psd.frequencies.size() != psd.density.size())
        throw std::invalid_argument("band_power: malformed estimate");
    check_band(band, psd.frequencies.front(), psd.frequencies.back());

    const auto &f = psd.frequencies;
    const auto &d = psd.density;
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < f.size(); ++i) {
        const double a = std::max(f[i], band.lo);
        const double b = std::min(f[i + 1], band.hi);
        if (!(b > a))
            continue;
        const double slope = (d[i + 1] - d[i]) / (f[i + 1] - f[i]);
        const double da = d[i] + slope * (a - f[i]);
        const double db = d[i] + slope * (b - f[i]);
        acc += 0.5 * (da + db) * (b - a);
    }
    return acc;
}

BandPowers band_powers(const PsdEstimate &psd, const BandSpec &bands)
{
    return {band_power(psd, bands.allocated()), band_power(psd, bands.lower()), band_power(psd, bands.upper())};
}

namespace {

struct BinWeight
{
    std::size_t bin;
    double allocated;
    double lower;
    double upper;
};

// Fraction of each bin's cell inside each band, for the bins that touch any band. Cached per thread
// for the most recent (n, sample rate, width).
const std::vector<BinWeight> &band_weights(std::size_t n, double sample_rate, const BandSpec &bands)
{
    struct Cache
    {
        std::size_t n = 0;
        double sample_rate = 0.0;
        double width = 0.0;
        std::vector<BinWeight> weights;
    };
    thread_local Cache cache;
    if (cache.n == n && cache.sample_rate == sample_rate && cache.width == bands.width)
        return cache.weights;

    check_band(bands.lower(), -sample_rate / 2.0, sample_rate / 2.0);
    check_band(bands.upper(), -sample_rate / 2.0, sample_rate / 2.0);
    const double df = sample_rate / static_cast<double>(n);
    const Band a = bands.allocated();
    const Band l = bands.lower();
    const Band u = bands.upper();
    std::vector<BinWeight> w;
    for (std::size_t b = 0; b < n; ++b) {
        const double f = bin_frequency(b, n, sample_rate);
        const double c0 = f - df / 2.0;
        const double c1 = f + df / 2.0;
        const BinWeight bw{b, overlap(c0, c1, a.lo, a.hi) / df, overlap(c0, c1, l.lo, l.hi) / df,
                           overlap(c0, c1, u.lo, u.hi) / df};
        if (bw.allocated > 0.0 || bw.lower > 0.0 || bw.upper > 0.0)
            w.push_back(bw);
    }
    cache = {n, sample_rate, bands.width, std::move(w)};
    return cache.weights;
}

template <class PowerOf>
BandPowers accumulate_bands(std::size_t n, double sample_rate, const BandSpec &bands, PowerOf power_of)
{
    if (n == 0)
        throw std::invalid_argument("band powers: no bins");
    BandPowers p;
    for (const auto &w : band_weights(n, sample_rate, bands)) {
        const double power = power_of(w.bin);
        p.allocated += power * w.allocated;
        p.lower += power * w.lower;
        p.upper += power * w.upper;
    }
    return p;
}

} // namespace

BandPowers band_powers_from_bins(std::span<const Complex> bins, double sample_rate, const BandSpec &bands)
{
    const double norm = 1.0 / (static_cast<double>(bins.size()) * static_cast<double>(bins.size()));
    return accumulate_bands(bins.size(), sample_rate, bands, [&](std::size_t b) { return std::norm(bins[b]) * norm; });
}

BandPowers band_powers_from_power(std::span<const double> bin_power, double sample_rate, const BandSpec &bands)
{
    return accumulate_bands(bin_power.size(), sample_rate, bands, [&](std::size_t b) { return bin_power[b]; });
}

double aclr_db(const BandPowers &powers)
{
    const double adjacent = powers.strongest_adjacent();
    if (!(adjacent > 0.0))
        throw std::domain_error("aclr: adjacent bands carry no power");
    return to_db(powers.allocated / adjacent);
}

double conducted_aclr(const PrecodedFrame &frame, const BandSpec &bands, std::size_t welch_segment)
{
    if (frame.num_antennas() == 0 || frame.length() == 0)
        throw std::invalid_argument("conducted_aclr: empty frame");
    BandPowers sum;
    for (const auto &s : frame.per_antenna) {
        const BandPowers p = welch_segment > 0 ? band_powers(estimate_psd(s, welch_segment), bands)
                                               : band_powers_from_bins(fft::forward(s.samples), s.sample_rate, bands);
        sum.allocated += p.allocated;
        sum.lower += p.lower;
        sum.upper += p.upper;
    }
    return aclr_db(sum);
}

std::vector<std::size_t> band_bins(std::size_t n, double sample_rate, const BandSpec &bands)
{
    const double df = sample_rate / static_cast<double>(n);
    const double edge = 1.5 * bands.width + df;
    std::vector<std::size_t> out;
    for (std::size_t b = 0; b < n; ++b)
        if (std::abs(bin_frequency(b, n, sample_rate)) <= edge)
            out.push_back(b);
    return out;
}

FrameSpectrum spectrum_of(const PrecodedFrame &frame)
{
    FrameSpectrum spec;
    spec.sample_rate = frame.sample_rate();
    spec.bins.reserve(frame.num_antennas());
    for (const auto &s : frame.per_antenna)
        spec.bins.push_back(fft::forward(s.samples));
    return spec;
}

SampledSignal far_field_signal(const PrecodedFrame &frame, const geometry::UlaGeometry &geometry,
                               geometry::Direction direction)
{
    if (frame.num_antennas() != geometry.num_antennas)
        throw std::invalid_argument("far_field_signal: frame antennas do not match the geometry");
    const std::size_t n = frame.length();
    const double fs = frame.sample_rate();
    const auto delays = geometry::element_delays(geometry, direction);
    ComplexVector acc(n, Complex{});
    ComplexVector bins(n);
    for (std::size_t m = 0; m < frame.num_antennas(); ++m) {
        fft::forward(frame.per_antenna[m].samples, bins);
        for (std::size_t b = 0; b < n; ++b) {
            const double f = geometry.carrier_frequency + bin_frequency(b, n, fs);
            acc[b] += bins[b] * std::polar(1.0, -2.0 * pi * f * delays[m]);
        }
    }
    return {fft::inverse(acc), fs};
}

Beampattern beampattern(const PrecodedFrame &frame, const geometry::UlaGeometry &geometry,
                        std::span<const geometry::Direction> angle_grid, const BandSpec &bands)
{
    return beampattern(spectrum_of(frame), geometry, angle_grid, bands);
}

Beampattern beampattern(const FrameSpectrum &spectrum, const geometry::UlaGeometry &geometry,
                        std::span<const geometry::Direction> angle_grid, const BandSpec &bands)
{
    const std::size_t M = spectrum.num_antennas();
    if (M != geometry.num_antennas)
        throw std::invalid_argument("beampattern: frame antennas do not match the geometry");
    if (angle_grid.empty())
        throw std::invalid_argument("beampattern: empty angle grid");
    const std::size_t n = spectrum.length();
    const double fs = spectrum.sample_rate;
    const auto sel = band_bins(n, fs, bands);
    const std::size_t B = sel.size();

    // Antenna-major within each selected bin, so Horner's rule walks contiguous memory.
    ComplexVector x(B * M);
    for (std::size_t j = 0; j < B; ++j)
        for (std::size_t m = 0; m < M; ++m)
            x[j * M + m] = spectrum.bins[m][sel[j]];

    Beampattern out;
    out.angles.assign(angle_grid.begin(), angle_grid.end());
    out.inband_power.reserve(angle_grid.size());
    out.oob_power.reserve(angle_grid.size());
    ComplexVector r(n, Complex{});
    const double spacing = geometry.spacing_meters();
    for (const auto &dir : angle_grid) {
        const double unit_delay = spacing * std::sin(dir.angle()) / geometry::kSpeedOfLight;
        for (std::size_t j = 0; j < B; ++j) {
            const double f = geometry.carrier_frequency + bin_frequency(sel[j], n, fs);
            const Complex z = std::polar(1.0, -2.0 * pi * f * unit_delay);
            const Complex *xm = &x[j * M];
            Complex acc = xm[M - 1];
            for (std::size_t m = M - 1; m-- > 0;)
                acc = acc * z + xm[m];
            r[sel[j]] = acc;
        }
        const auto p = band_powers_from_bins(r, fs, bands);
        out.inband_power.push_back(p.allocated);
        out.oob_power.push_back(p.strongest_adjacent());
    }
    return out;
}

ComplexVector received_bins(const FrameSpectrum &spectrum, const channel::TapChannel &channel, std::size_t user)
{
    if (channel.num_antennas != spectrum.num_antennas())
        throw std::invalid_argument("received_bins: channel antennas do not match the frame");
    if (user >= channel.num_users)
        throw std::invalid_argument("received_bins: user index out of range");
    const std::size_t n = spectrum.length();
    ComplexVector acc(n, Complex{});
    if (const std::size_t period = channel::response_period(channel, n, spectrum.sample_rate)) {
        for (std::size_t m = 0; m < spectrum.num_antennas(); ++m) {
            const auto h = channel::tap_spectrum(channel, m, user, period);
            const Complex *x = spectrum.bins[m].data();
            for (std::size_t start = 0; start < n; start += period)
                for (std::size_t j = 0; j < period; ++j)
                    acc[start + j] += h[j] * x[start + j];
        }
        return acc;
    }
    for (std::size_t m = 0; m < spectrum.num_antennas(); ++m) {
        const auto h = channel::frequency_response(channel, m, user, n, spectrum.sample_rate);
        const auto &x = spectrum.bins[m];
        for (std::size_t b = 0; b < n; ++b)
            acc[b] += h[b] * x[b];
    }
    return acc;
}

SampledSignal received_signal(const PrecodedFrame &frame, const channel::TapChannel &channel, std::size_t user)
{
    return {fft::inverse(received_bins(spectrum_of(frame), channel, user)), frame.sample_rate()};
}

ReceivedPower fading_received_power(const PrecodedFrame &frame, const channel::TapChannel &victim,
                                    const BandSpec &bands)
{
    return fading_received_power(spectrum_of(frame), victim, bands);
}

ReceivedPower fading_received_power(const FrameSpectrum &spectrum, const channel::TapChannel &victim,
                                    const BandSpec &bands)
{
    const auto r = received_bins(spectrum, victim, 0);
    const auto p = band_powers_from_bins(r, spectrum.sample_rate, bands);
    return {p.allocated, p.strongest_adjacent()};
}

double array_aclr(double inband_at_served_user, double oob_at_reference_victim)
{
    if (!(inband_at_served_user > 0.0) || !(oob_at_reference_victim > 0.0))
        throw std::invalid_argument("array_aclr: powers must be positive");
    return to_db(inband_at_served_user / oob_at_reference_victim);
}

double quantile(std::span<const double> samples, double p)
{
    if (samples.empty())
        throw std::invalid_argument("quantile: no samples");
    if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument("quantile: p must lie in [0, 1]");
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    const double pos = p * static_cast<double>(sorted.size() - 1);
    const auto i = static_cast<std::size_t>(std::floor(pos));
    if (i + 1 >= sorted.size())
        return sorted.back();
    const double frac = pos - static_cast<double>(i);
    return sorted[i] + frac * (sorted[i + 1] - sorted[i]);
}

CcdfCurve empirical_ccdf(std::span<const double> samples, std::span<const double> thresholds)
{
    if (samples.empty())
        throw std::invalid_argument("empirical_ccdf: no samples");
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    CcdfCurve c;
    c.thresholds.assign(thresholds.begin(), thresholds.end());
    c.probability.reserve(thresholds.size());
    const double n = static_cast<double>(sorted.size());
    for (double t : thresholds) {
        const auto above = sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), t);
        c.probability.push_back(static_cast<double>(above) / n);
    }
    return c;
}

} // namespace oobsim::analysis
