// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 oobsim authors

#include "oobsim/experiments.hpp"

#include "oobsim/csv.hpp"
#include "oobsim/fft.hpp"
#include "oobsim/precode.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <set>
#include <thread>

namespace oobsim::experiments {
namespace {

using std::numbers::pi;
namespace fs = std::filesystem;

// Calls fn(i) for i in [0, count) on up to `threads` workers. Callers write results by index, so the
// outcome does not depend on scheduling.
template <class Fn>
void parallel_for(std::size_t count, std::size_t threads, Fn &&fn)
{
    threads = std::min(threads, count);
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i)
            fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error)
                        error = std::current_exception();
                    next = count;
                }
            }
        });
    }
    for (auto &th : pool)
        th.join();
    if (error)
        std::rethrow_exception(error);
}

std::vector<SampledSignal> shaped_streams(const ExperimentConfig &config, const waveform::PulseShape &shape,
                                          std::size_t count, RngSeed seed)
{
    const auto symbols = waveform::generate_symbols(count, config.waveform.num_symbols, seed, config.waveform.alphabet);
    std::vector<SampledSignal> out;
    out.reserve(count);
    for (const auto &s : symbols)
        out.push_back(waveform::pulse_shape_cyclic(s, shape, config.waveform.baud_rate));
    return out;
}

double tap_period(const ExperimentConfig &config) { return 1.0 / config.waveform.baud_rate; }

RngSeed master(const ExperimentConfig &config) { return RngSeed{config.seed}; }

// Rounds grid arithmetic to 1e-9 so that e.g. 80.5 prints as 80.5.
double tidy(double deg) { return std::round(deg * 1e9) / 1e9; }

std::string scenario_label(const FadingScenario &s)
{
    if (s.num_antennas == 1)
        return "siso";
    return "M" + std::to_string(s.num_antennas) + "-K" + std::to_string(s.num_users);
}

// One fading draw: transmit spectrum after the amplifiers, plus the received blocks of the served
// users and of one victim.
struct DrawSpectra
{
    analysis::FrameSpectrum tx;
    std::vector<ComplexVector> rx_users;
    ComplexVector rx_victim;
};

DrawSpectra simulate_fading_draw(const ExperimentConfig &config, const FadingScenario &scenario,
                                 const waveform::PulseShape &shape, const ChainModels &models, RngSeed draw_seed,
                                 bool all_users)
{
    const std::size_t M = scenario.num_antennas;
    const std::size_t K = scenario.num_users;
    const bool siso = M == 1;
    const auto signals = shaped_streams(config, shape, K, draw_seed.child("symbols"));
    const auto served = channel::sample_rayleigh(M, K, config.fading.num_taps, draw_seed.child("served"),
                                                 tap_period(config), config.fading.profile,
                                                 config.fading.decay_db_per_tap);
    const auto victim = channel::sample_rayleigh(M, 1, config.fading.num_taps, draw_seed.child("victim"),
                                                 tap_period(config), config.fading.profile,
                                                 config.fading.decay_db_per_tap);

    precode::PrecodedFrame frame;
    if (siso) {
        frame = precode::siso_frame(signals.front(), 1.0);
    } else {
        const auto allocation = precode::allocate_power(std::vector<double>(K, 1.0), precode::AllocationMode::equal);
        frame = precode::mrt_precode(signals, served, allocation, precode::array_power_from_siso(1.0, M, K));
    }
    const auto amplified = frontend::apply_nonlinearity(frame, siso ? models.siso : models.array);

    DrawSpectra d;
    d.tx = analysis::spectrum_of(amplified);
    const std::size_t users = all_users ? K : 1;
    for (std::size_t k = 0; k < users; ++k)
        d.rx_users.push_back(analysis::received_bins(d.tx, served, k));
    d.rx_victim = analysis::received_bins(d.tx, victim, 0);
    return d;
}

void write_header_rows(csv::Writer &w, const std::vector<std::pair<std::string, std::string>> &rows)
{
    for (const auto &[k, v] : rows)
        w.row({k, v});
}

std::string tagged(const ExperimentConfig &config, const std::string &suffix)
{
    return suffix.empty() ? config.tag : config.tag + "-" + suffix;
}

fs::path out_file(const ExperimentConfig &config, const std::string &suffix)
{
    return csv::output_path(config.output_dir, to_string(config.experiment), tagged(config, suffix));
}

} // namespace

analysis::BandPowers operator+(const analysis::BandPowers &a, const analysis::BandPowers &b)
{
    return {a.allocated + b.allocated, a.lower + b.lower, a.upper + b.upper};
}

analysis::BandPowers conducted_band_powers(const analysis::FrameSpectrum &spectrum, const analysis::BandSpec &bands)
{
    analysis::BandPowers sum;
    for (const auto &bins : spectrum.bins)
        sum = sum + analysis::band_powers_from_bins(bins, spectrum.sample_rate, bands);
    return sum;
}

waveform::PulseShape pulse_of(const ExperimentConfig &config)
{
    return waveform::design_rrc(config.waveform.rolloff, config.waveform.span_symbols, config.waveform.oversampling);
}

analysis::BandSpec bands_of(const ExperimentConfig &config)
{
    return analysis::BandSpec::for_waveform(config.waveform.baud_rate, config.waveform.rolloff);
}

geometry::UlaGeometry geometry_of(const ExperimentConfig &config)
{
    geometry::UlaGeometry g{config.array.num_antennas, config.array.spacing_wavelengths, config.array.carrier_frequency};
    g.validate();
    return g;
}

ChainModels calibrate_chains(const ExperimentConfig &config)
{
    frontend::CalibrationSpec spec;
    spec.shape = pulse_of(config);
    spec.baud_rate = config.waveform.baud_rate;
    spec.alphabet = config.waveform.alphabet;
    ChainModels models;
    models.array = frontend::calibrate_drive(config.frontend.a3_over_a1, config.frontend.target_aclr_db, spec);
    const double siso_target = config.frontend.siso_target_aclr_db.value_or(config.frontend.target_aclr_db);
    models.siso = siso_target == config.frontend.target_aclr_db
                      ? models.array
                      : frontend::calibrate_drive(config.frontend.a3_over_a1, siso_target, spec);
    return models;
}

std::vector<double> los_user_angles(const ExperimentConfig &config)
{
    if (!config.users.angles_deg.empty())
        return config.users.angles_deg;

    const auto &g = config.angle_grid;
    const auto &u = config.users;
    auto engine = make_engine(master(config).child("user-angles"));
    std::uniform_real_distribution<double> draw(u.angle_min_deg, u.angle_max_deg);
    std::set<long long> taken;
    std::vector<double> angles;
    for (int attempt = 0; angles.size() < u.count; ++attempt) {
        if (attempt > 1000000)
            throw std::runtime_error("los-pattern: cannot place distinct users on the angle grid");
        const long long cell = std::llround((draw(engine) - g.start_deg) / g.step_deg);
        const double snapped = tidy(g.start_deg + static_cast<double>(cell) * g.step_deg);
        if (snapped < u.angle_min_deg - 1e-9 || snapped > u.angle_max_deg + 1e-9)
            continue;
        if (taken.insert(cell).second)
            angles.push_back(snapped);
    }
    return angles;
}

LosPatternResult run_los_pattern(const ExperimentConfig &config) { return run_los_pattern(config, calibrate_chains(config)); }

LosPatternResult run_los_pattern(const ExperimentConfig &config, const ChainModels &models)
{
    config.validate();
    const auto geometry = geometry_of(config);
    const auto shape = pulse_of(config);
    const auto bands = bands_of(config);
    const std::size_t M = geometry.num_antennas;
    const std::size_t K = config.users.count;

    LosPatternResult r;
    r.models = models;
    r.user_angles_deg = los_user_angles(config);
    r.user_gains = config.users.path_gains.empty() ? std::vector<double>(K, 1.0) : config.users.path_gains;
    const auto allocation = precode::allocate_power(r.user_gains, config.users.allocation);
    r.user_powers = allocation.per_user_powers;

    std::vector<geometry::Direction> user_dirs;
    for (double a : r.user_angles_deg)
        user_dirs.push_back(geometry::Direction::from_degrees(a));
    const auto los = channel::make_los(geometry, user_dirs, r.user_gains);

    const auto signals = shaped_streams(config, shape, K, master(config).child("los-symbols"));
    r.siso_power = 1.0;
    r.array_power = precode::array_power_from_siso(r.siso_power, M, K);

    const auto grid = geometry::angle_grid_degrees(config.angle_grid.start_deg, config.angle_grid.stop_deg,
                                                   config.angle_grid.step_deg);
    for (std::size_t i = 0; i < grid.size(); ++i)
        r.angles_deg.push_back(tidy(config.angle_grid.start_deg + static_cast<double>(i) * config.angle_grid.step_deg));

    {
        auto frame = precode::mrt_precode(signals, los, allocation, r.array_power);
        frame = frontend::apply_nonlinearity(frame, models.array);
        const auto spectrum = analysis::spectrum_of(frame);
        frame.per_antenna.clear();
        r.array_conducted = conducted_band_powers(spectrum, bands);
        r.array = analysis::beampattern(spectrum, geometry, grid, bands);
    }

    const auto siso = frontend::apply_nonlinearity(precode::siso_frame(signals.front(), r.siso_power), models.siso);
    r.siso_conducted = conducted_band_powers(analysis::spectrum_of(siso), bands);
    r.siso_inband = r.siso_conducted.allocated;
    r.siso_oob = r.siso_conducted.strongest_adjacent();
    return r;
}

FadingScenarioResult run_fading_scenario(const ExperimentConfig &config, const FadingScenario &scenario,
                                         const ChainModels &models)
{
    const auto shape = pulse_of(config);
    const auto bands = bands_of(config);
    const RngSeed base = master(config).child("fading-" + scenario_label(scenario));

    FadingScenarioResult r;
    r.scenario = scenario;
    r.tx_power = scenario.num_antennas == 1 ? 1.0
                                            : precode::array_power_from_siso(1.0, scenario.num_antennas,
                                                                             scenario.num_users);
    r.samples.resize(config.num_realizations);
    parallel_for(config.num_realizations, config.threads, [&](std::size_t i) {
        const auto d = simulate_fading_draw(config, scenario, shape, models, base.child("draw", i), true);
        const auto tx = conducted_band_powers(d.tx, bands);
        const auto victim = analysis::band_powers_from_bins(d.rx_victim, d.tx.sample_rate, bands);
        FadingSample s;
        s.victim_inband = victim.allocated;
        s.victim_oob = victim.strongest_adjacent();
        s.conducted_inband = tx.allocated;
        s.conducted_oob = tx.strongest_adjacent();
        for (std::size_t k = 0; k < d.rx_users.size(); ++k) {
            const double p = analysis::band_powers_from_bins(d.rx_users[k], d.tx.sample_rate, bands).allocated;
            if (k == 0)
                s.served_inband = p;
            s.served_inband_max = std::max(s.served_inband_max, p);
        }
        r.samples[i] = s;
    });

    double mean = 0.0;
    r.victim_oob_db.reserve(r.samples.size());
    for (const auto &s : r.samples) {
        mean += s.victim_oob;
        r.victim_oob_db.push_back(to_db(s.victim_oob));
    }
    mean /= static_cast<double>(r.samples.size());
    r.mean_oob_db = to_db(mean);

    std::size_t above = 0;
    for (const auto &s : r.samples)
        if (s.victim_oob > mean * from_db(3.0))
            ++above;
    r.p_above_mean_plus_3db = static_cast<double>(above) / static_cast<double>(r.samples.size());

    r.p01_db = analysis::quantile(r.victim_oob_db, 0.01);
    r.p99_db = analysis::quantile(r.victim_oob_db, 0.99);
    double m1 = 0.0;
    for (double v : r.victim_oob_db)
        m1 += v;
    m1 /= static_cast<double>(r.victim_oob_db.size());
    double var = 0.0;
    for (double v : r.victim_oob_db)
        var += (v - m1) * (v - m1);
    r.std_db = std::sqrt(var / static_cast<double>(r.victim_oob_db.size()));

    std::vector<double> thresholds;
    const auto &f = config.fading;
    const auto steps = static_cast<std::size_t>(std::floor((f.threshold_stop_db - f.threshold_start_db) / f.threshold_step_db + 0.5));
    for (std::size_t i = 0; i <= steps; ++i)
        thresholds.push_back(f.threshold_start_db + static_cast<double>(i) * f.threshold_step_db);
    r.ccdf = analysis::empirical_ccdf(r.victim_oob_db, thresholds);
    return r;
}

FadingCcdfResult run_fading_ccdf(const ExperimentConfig &config)
{
    config.validate();
    FadingCcdfResult r;
    r.models = calibrate_chains(config);
    for (const auto &s : config.fading.scenarios)
        r.scenarios.push_back(run_fading_scenario(config, s, r.models));
    return r;
}

ScatterMapResult run_scatter_map(const ExperimentConfig &config) { return run_scatter_map(config, calibrate_chains(config)); }

ScatterMapResult run_scatter_map(const ExperimentConfig &config, const ChainModels &models)
{
    config.validate();
    const auto geometry = geometry_of(config);
    const auto shape = pulse_of(config);
    const auto bands = bands_of(config);
    const auto &sc = config.scatter;
    const std::size_t M = geometry.num_antennas;
    const std::size_t K = config.users.count;
    const std::size_t G = sc.grid_points;

    const auto layout = channel::sample_scatter_map(geometry, sc.num_scatterers, sc.region, K, master(config), G);
    ScatterMapResult r;
    r.models = models;
    r.grid_points = G;
    r.scatterers = layout.scatterers();
    r.users = layout.users();

    std::vector<channel::RayChannel> user_channels;
    for (const auto &u : r.users)
        user_channels.push_back(layout.channel_to(u));
    const auto signals = shaped_streams(config, shape, K, master(config).child("scatter-symbols"));
    const auto allocation = precode::allocate_power(std::vector<double>(K, 1.0), precode::AllocationMode::equal);
    auto frame = precode::mrt_precode(signals, user_channels, geometry.carrier_frequency, allocation,
                                      precode::array_power_from_siso(1.0, M, K));
    frame = frontend::apply_nonlinearity(frame, models.array);
    const auto spectrum = analysis::spectrum_of(frame);
    r.conducted_aclr_db = analysis::aclr_db(conducted_band_powers(spectrum, bands));

    // Field at a point: sum_s exp(-j 2 pi f d_st / c) / d_st * Z_s(f), where Z_s collects all antennas'
    // contributions up to scatterer s.
    const std::size_t n = spectrum.length();
    const double fsr = spectrum.sample_rate;
    const auto sel = analysis::band_bins(n, fsr, bands);
    const std::size_t B = sel.size();
    const std::size_t S = r.scatterers.size();
    std::vector<double> freq(B);
    for (std::size_t j = 0; j < B; ++j)
        freq[j] = geometry.carrier_frequency + bin_frequency(sel[j], n, fsr);

    ComplexVector z(S * B, Complex{});
    for (std::size_t s = 0; s < S; ++s) {
        for (std::size_t m = 0; m < M; ++m) {
            const double d1 = layout.leg_distance(m, s);
            const double amp = layout.reflection()[s] / d1;
            const double delay = d1 / geometry::kSpeedOfLight;
            for (std::size_t j = 0; j < B; ++j)
                z[s * B + j] += amp * std::polar(1.0, -2.0 * pi * freq[j] * delay) * spectrum.bins[m][sel[j]];
        }
    }

    r.positions.resize(G * G);
    r.inband_db.resize(G * G);
    r.oob_db.resize(G * G);
    for (std::size_t iy = 0; iy < G; ++iy)
        for (std::size_t ix = 0; ix < G; ++ix)
            r.positions[r.cell_index(ix, iy)] = channel::grid_cell_center(sc.region, G, ix, iy);

    parallel_for(G * G, config.threads, [&](std::size_t idx) {
        const auto p = r.positions[idx];
        ComplexVector bins(n, Complex{});
        for (std::size_t s = 0; s < S; ++s) {
            const double d2 = channel::distance(r.scatterers[s], p);
            if (d2 < 1e-9)
                throw std::domain_error("scatter-map: grid point coincides with a scatterer");
            const double amp = 1.0 / d2;
            const double delay = d2 / geometry::kSpeedOfLight;
            const Complex *zs = &z[s * B];
            for (std::size_t j = 0; j < B; ++j)
                bins[sel[j]] += amp * std::polar(1.0, -2.0 * pi * freq[j] * delay) * zs[j];
        }
        const auto bp = analysis::band_powers_from_bins(bins, fsr, bands);
        r.inband_db[idx] = to_db(bp.allocated);
        r.oob_db[idx] = to_db(bp.strongest_adjacent());
    });

    const double dx = sc.region.width() / static_cast<double>(G);
    const double dy = sc.region.height() / static_cast<double>(G);
    for (const auto &u : r.users) {
        const auto ix = static_cast<std::size_t>(std::floor((u.x - sc.region.x_min) / dx));
        const auto iy = static_cast<std::size_t>(std::floor((u.y - sc.region.y_min) / dy));
        r.user_cells.push_back(r.cell_index(std::min(ix, G - 1), std::min(iy, G - 1)));
    }
    return r;
}

PsdCompareResult run_psd_compare(const ExperimentConfig &config) { return run_psd_compare(config, calibrate_chains(config)); }

PsdCompareResult run_psd_compare(const ExperimentConfig &config, const ChainModels &models)
{
    config.validate();
    const auto shape = pulse_of(config);
    const auto bands = bands_of(config);
    const FadingScenario siso{1, 1};
    const FadingScenario array{config.array.num_antennas, config.users.count};
    const std::size_t R = config.num_realizations;
    const std::size_t n = config.waveform.num_symbols * config.waveform.oversampling;
    const double fsr = config.waveform.baud_rate * static_cast<double>(config.waveform.oversampling);

    // Per-draw bin powers |X_b|^2 / n^2, summed in draw order one chunk at a time.
    enum Series { siso_tx, siso_user, siso_victim, array_tx, array_user, array_victim, num_series };
    const RngSeed siso_seed = master(config).child("psd-siso");
    const RngSeed array_seed = master(config).child("psd-array");
    const double norm = 1.0 / (static_cast<double>(n) * static_cast<double>(n));

    auto powers = [&](const ComplexVector &bins) {
        std::vector<double> p(bins.size());
        for (std::size_t b = 0; b < bins.size(); ++b)
            p[b] = std::norm(bins[b]) * norm;
        return p;
    };
    auto tx_powers = [&](const analysis::FrameSpectrum &spec) {
        std::vector<double> p(spec.length(), 0.0);
        for (const auto &bins : spec.bins)
            for (std::size_t b = 0; b < bins.size(); ++b)
                p[b] += std::norm(bins[b]) * norm;
        return p;
    };

    std::vector<std::vector<double>> mean(num_series, std::vector<double>(n, 0.0));
    const std::size_t chunk = 64;
    std::vector<std::vector<std::vector<double>>> per_draw(chunk, std::vector<std::vector<double>>(num_series));
    for (std::size_t start = 0; start < R; start += chunk) {
        const std::size_t count = std::min(chunk, R - start);
        parallel_for(count, config.threads, [&](std::size_t j) {
            const std::size_t i = start + j;
            auto &out = per_draw[j];
            {
                const auto d = simulate_fading_draw(config, siso, shape, models, siso_seed.child("draw", i), false);
                out[siso_tx] = tx_powers(d.tx);
                out[siso_user] = powers(d.rx_users.front());
                out[siso_victim] = powers(d.rx_victim);
            }
            {
                const auto d = simulate_fading_draw(config, array, shape, models, array_seed.child("draw", i), false);
                out[array_tx] = tx_powers(d.tx);
                out[array_user] = powers(d.rx_users.front());
                out[array_victim] = powers(d.rx_victim);
            }
        });
        for (std::size_t j = 0; j < count; ++j)
            for (int s = 0; s < num_series; ++s)
                for (std::size_t b = 0; b < n; ++b)
                    mean[s][b] += per_draw[j][s][b];
    }
    for (auto &series : mean)
        for (auto &v : series)
            v /= static_cast<double>(R);

    PsdCompareResult r;
    r.models = models;
    std::vector<analysis::BandPowers> bp;
    for (const auto &series : mean)
        bp.push_back(analysis::band_powers_from_power(series, fsr, bands));
    r.reference_power = bp[siso_user].allocated;
    if (!(r.reference_power > 0.0))
        throw std::runtime_error("psd-compare: served user receives no in-band power");

    // Density times baud rate: power per symbol-rate bandwidth.
    const double df = fsr / static_cast<double>(n);
    const double scale = config.waveform.baud_rate / (df * r.reference_power);
    std::vector<double> *targets[num_series] = {&r.siso_tx, &r.siso_rx_user, &r.siso_rx_victim,
                                                &r.array_tx, &r.array_rx_user, &r.array_rx_victim};
    const std::size_t half = (n + 1) / 2;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t b = (half + i) % n;
        r.frequencies.push_back(bin_frequency(b, n, fsr));
        for (int s = 0; s < num_series; ++s)
            targets[s]->push_back(to_db(mean[s][b] * scale));
    }

    r.siso_tx_aclr_db = analysis::aclr_db(bp[siso_tx]);
    r.array_tx_aclr_db = analysis::aclr_db(bp[array_tx]);
    r.siso_rx_user_inband_db = to_db(bp[siso_user].allocated / r.reference_power);
    r.array_rx_user_inband_db = to_db(bp[array_user].allocated / r.reference_power);
    r.siso_rx_victim_oob_db = to_db(bp[siso_victim].strongest_adjacent() / r.reference_power);
    r.array_rx_victim_oob_db = to_db(bp[array_victim].strongest_adjacent() / r.reference_power);
    r.siso_array_aclr_db = analysis::array_aclr(bp[siso_user].allocated, bp[siso_victim].strongest_adjacent());
    r.array_array_aclr_db = analysis::array_aclr(bp[array_user].allocated, bp[array_victim].strongest_adjacent());
    return r;
}

std::vector<fs::path> write_los_pattern(const ExperimentConfig &config, const LosPatternResult &r)
{
    const auto meta = to_json(config);
    csv::Writer w(out_file(config, ""), meta,
                  {"angle_deg", "array_inband_dB", "array_oob_dB", "siso_inband_dB", "siso_oob_dB"});
    for (std::size_t i = 0; i < r.angles_deg.size(); ++i)
        w.row({csv::format_number(r.angles_deg[i]), csv::format_db(to_db(r.array.inband_power[i])),
               csv::format_db(to_db(r.array.oob_power[i])), csv::format_db(to_db(r.siso_inband)),
               csv::format_db(to_db(r.siso_oob))});
    w.close();

    csv::Writer u(out_file(config, "users"), meta, {"user", "angle_deg", "path_gain", "power_fraction"});
    for (std::size_t k = 0; k < r.user_angles_deg.size(); ++k)
        u.row({std::to_string(k), csv::format_number(r.user_angles_deg[k]), csv::format_number(r.user_gains[k]),
               csv::format_number(r.user_powers[k])});
    u.close();

    csv::Writer s(out_file(config, "summary"), meta, {"metric", "value"});
    write_header_rows(s, {
                             {"array_power_dB", csv::format_db(to_db(r.array_power))},
                             {"siso_power_dB", csv::format_db(to_db(r.siso_power))},
                             {"array_conducted_aclr_dB", csv::format_db(analysis::aclr_db(r.array_conducted))},
                             {"siso_conducted_aclr_dB", csv::format_db(analysis::aclr_db(r.siso_conducted))},
                             {"array_drive_rms", csv::format_number(r.models.array.drive_rms)},
                             {"siso_drive_rms", csv::format_number(r.models.siso.drive_rms)},
                         });
    s.close();
    return {w.path(), u.path(), s.path()};
}

std::vector<fs::path> write_fading_ccdf(const ExperimentConfig &config, const FadingCcdfResult &r)
{
    const auto meta = to_json(config);
    std::vector<fs::path> files;
    const FadingScenarioResult *siso = nullptr;
    for (const auto &sc : r.scenarios)
        if (sc.is_siso() && !siso)
            siso = &sc;

    for (const auto &sc : r.scenarios) {
        csv::Writer w(out_file(config, scenario_label(sc.scenario)), meta, {"threshold_dB", "ccdf"});
        for (std::size_t i = 0; i < sc.ccdf.thresholds.size(); ++i)
            w.row({csv::format_db(sc.ccdf.thresholds[i]), csv::format_number(sc.ccdf.probability[i])});
        w.row({"mean_dB", csv::format_db(sc.mean_oob_db)});
        w.close();
        files.push_back(w.path());
    }

    csv::Writer s(out_file(config, ""), meta,
                  {"scenario", "num_antennas", "num_users", "tx_power_dB", "mean_oob_dB", "gap_to_siso_dB", "std_dB",
                   "p01_dB", "p99_dB", "p_above_mean_plus_3dB", "realizations"});
    for (const auto &sc : r.scenarios)
        s.row({scenario_label(sc.scenario), std::to_string(sc.scenario.num_antennas),
               std::to_string(sc.scenario.num_users), csv::format_db(to_db(sc.tx_power)),
               csv::format_db(sc.mean_oob_db),
               siso ? csv::format_db(siso->mean_oob_db - sc.mean_oob_db) : std::string("nan"),
               csv::format_db(sc.std_db), csv::format_db(sc.p01_db), csv::format_db(sc.p99_db),
               csv::format_number(sc.p_above_mean_plus_3db), std::to_string(sc.samples.size())});
    s.close();
    files.insert(files.begin(), s.path());
    return files;
}

std::vector<fs::path> write_scatter_map(const ExperimentConfig &config, const ScatterMapResult &r)
{
    const auto meta = to_json(config);
    auto ecdf = [](const std::vector<double> &v) {
        std::vector<double> sorted = v;
        std::sort(sorted.begin(), sorted.end());
        std::vector<double> out(v.size());
        for (std::size_t i = 0; i < v.size(); ++i)
            out[i] = static_cast<double>(std::upper_bound(sorted.begin(), sorted.end(), v[i]) - sorted.begin()) /
                     static_cast<double>(v.size());
        return out;
    };
    const auto in_ecdf = ecdf(r.inband_db);
    const auto oob_ecdf = ecdf(r.oob_db);

    csv::Writer w(out_file(config, ""), meta, {"x_m", "y_m", "inband_dB", "oob_dB", "inband_ecdf", "oob_ecdf"});
    for (std::size_t i = 0; i < r.positions.size(); ++i)
        w.row({csv::format_number(r.positions[i].x), csv::format_number(r.positions[i].y),
               csv::format_db(r.inband_db[i]), csv::format_db(r.oob_db[i]), csv::format_number(in_ecdf[i]),
               csv::format_number(oob_ecdf[i])});
    w.close();

    csv::Writer l(out_file(config, "layout"), meta, {"kind", "index", "x_m", "y_m"});
    l.row({"array", "0", "0", "0"});
    for (std::size_t s = 0; s < r.scatterers.size(); ++s)
        l.row({"scatterer", std::to_string(s), csv::format_number(r.scatterers[s].x),
               csv::format_number(r.scatterers[s].y)});
    for (std::size_t k = 0; k < r.users.size(); ++k)
        l.row({"user", std::to_string(k), csv::format_number(r.users[k].x), csv::format_number(r.users[k].y)});
    l.close();
    return {w.path(), l.path()};
}

std::vector<fs::path> write_psd_compare(const ExperimentConfig &config, const PsdCompareResult &r)
{
    const auto meta = to_json(config);
    csv::Writer w(out_file(config, ""), meta,
                  {"frequency_hz", "siso_tx_dB", "siso_rx_user_dB", "siso_rx_victim_dB", "array_tx_dB",
                   "array_rx_user_dB", "array_rx_victim_dB"});
    for (std::size_t i = 0; i < r.frequencies.size(); ++i)
        w.row({csv::format_number(r.frequencies[i]), csv::format_db(r.siso_tx[i]), csv::format_db(r.siso_rx_user[i]),
               csv::format_db(r.siso_rx_victim[i]), csv::format_db(r.array_tx[i]),
               csv::format_db(r.array_rx_user[i]), csv::format_db(r.array_rx_victim[i])});
    w.close();

    csv::Writer s(out_file(config, "summary"), meta, {"metric", "value"});
    write_header_rows(s, {
                             {"siso_tx_aclr_dB", csv::format_db(r.siso_tx_aclr_db)},
                             {"array_tx_aclr_dB", csv::format_db(r.array_tx_aclr_db)},
                             {"siso_rx_user_inband_dB", csv::format_db(r.siso_rx_user_inband_db)},
                             {"array_rx_user_inband_dB", csv::format_db(r.array_rx_user_inband_db)},
                             {"siso_rx_victim_oob_dB", csv::format_db(r.siso_rx_victim_oob_db)},
                             {"array_rx_victim_oob_dB", csv::format_db(r.array_rx_victim_oob_db)},
                             {"siso_array_aclr_dB", csv::format_db(r.siso_array_aclr_db)},
                             {"array_array_aclr_dB", csv::format_db(r.array_array_aclr_db)},
                         });
    s.close();
    return {w.path(), s.path()};
}

std::vector<fs::path> run_and_write(const ExperimentConfig &config)
{
    config.validate();
    switch (config.experiment) {
    case ExperimentId::los_pattern:
        return write_los_pattern(config, run_los_pattern(config));
    case ExperimentId::fading_ccdf:
        return write_fading_ccdf(config, run_fading_ccdf(config));
    case ExperimentId::scatter_map:
        return write_scatter_map(config, run_scatter_map(config));
    case ExperimentId::psd_compare:
        return write_psd_compare(config, run_psd_compare(config));
    }
    return {};
}

} // namespace oobsim::experiments
