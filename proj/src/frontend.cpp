// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 oobsim authors

#include "oobsim/frontend.hpp"

#include "oobsim/analysis.hpp"
#include "oobsim/fft.hpp"

#include <cmath>
#include <sstream>

namespace oobsim::frontend {

void NonlinearityModel::validate() const
{
    if (a1 == Complex{})
        throw std::invalid_argument("NonlinearityModel: a1 must be nonzero");
    if (!(drive_rms > 0.0) || !std::isfinite(drive_rms))
        throw std::invalid_argument("NonlinearityModel: drive_rms must be positive and finite");
}

SampledSignal apply_nonlinearity(const SampledSignal &signal, const NonlinearityModel &model)
{
    model.validate();
    SampledSignal out{ComplexVector(signal.size()), signal.sample_rate};
    const double rms = std::sqrt(mean_power(signal));
    if (!(rms > 0.0))
        return out;

    const double g = model.drive_rms / rms;
    const double g2 = g * g;
    for (std::size_t i = 0; i < signal.size(); ++i) {
        const Complex x = signal.samples[i];
        out.samples[i] = model.a1 * x + model.a3 * (g2 * std::norm(x)) * x;
    }
    return out;
}

precode::PrecodedFrame apply_nonlinearity(const precode::PrecodedFrame &frame, const NonlinearityModel &model)
{
    precode::PrecodedFrame out;
    out.per_antenna.reserve(frame.num_antennas());
    for (const auto &s : frame.per_antenna)
        out.per_antenna.push_back(apply_nonlinearity(s, model));
    out.total_power = out.measured_power();
    return out;
}

namespace {

struct CalibrationSignal
{
    SampledSignal signal;
    analysis::BandSpec bands;
};

CalibrationSignal make_calibration_signal(const CalibrationSpec &spec)
{
    const auto symbols = waveform::generate_symbols(1, spec.num_symbols, spec.seed, spec.alphabet);
    return {waveform::pulse_shape_cyclic(symbols.front(), spec.shape, spec.baud_rate),
            analysis::BandSpec::for_waveform(spec.baud_rate, spec.shape.rolloff)};
}

double measure(const CalibrationSignal &cal, const NonlinearityModel &model)
{
    const auto y = apply_nonlinearity(cal.signal, model);
    const auto bins = fft::forward(y.samples);
    return analysis::aclr_db(analysis::band_powers_from_bins(bins, y.sample_rate, cal.bands));
}

} // namespace

double calibration_aclr(const NonlinearityModel &model, const CalibrationSpec &spec)
{
    return measure(make_calibration_signal(spec), model);
}

NonlinearityModel calibrate_drive(Complex a3_over_a1, double target_aclr_db, const CalibrationSpec &spec)
{
    if (!(spec.drive_lo > 0.0) || !(spec.drive_hi > spec.drive_lo))
        throw std::invalid_argument("calibrate_drive: need 0 < drive_lo < drive_hi");
    if (!(spec.tolerance_db > 0.0))
        throw std::invalid_argument("calibrate_drive: tolerance must be positive");

    const auto cal = make_calibration_signal(spec);
    NonlinearityModel model{Complex{1.0, 0.0}, a3_over_a1, spec.drive_lo};

    const double aclr_lo = measure(cal, model);
    model.drive_rms = spec.drive_hi;
    const double aclr_hi = measure(cal, model);
    if (!(aclr_lo >= target_aclr_db && target_aclr_db >= aclr_hi)) {
        std::ostringstream msg;
        msg << "calibrate_drive: target " << target_aclr_db << " dB outside the bracket range ["
            << aclr_hi << ", " << aclr_lo << "] dB for drive in [" << spec.drive_lo << ", " << spec.drive_hi << "]";
        throw CalibrationError(msg.str());
    }

    double lo = std::log(spec.drive_lo);
    double hi = std::log(spec.drive_hi);
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        model.drive_rms = std::exp(mid);
        const double aclr = measure(cal, model);
        if (std::abs(aclr - target_aclr_db) <= spec.tolerance_db)
            return model;
        if (aclr > target_aclr_db)
            lo = mid;
        else
            hi = mid;
        if (hi - lo < 1e-14)
            break;
    }
    return model;
}

} // namespace oobsim::frontend
