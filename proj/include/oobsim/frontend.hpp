// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 oobsim authors

#pragma once

#include "oobsim/precode.hpp"
#include "oobsim/rng.hpp"
#include "oobsim/signal.hpp"
#include "oobsim/waveform.hpp"

#include <cstddef>
#include <stdexcept>

namespace oobsim::frontend {

// Memoryless odd-order power amplifier y = a1 x + a3 |x|^2 x, evaluated with the input normalized to
// an rms of drive_rms.
struct NonlinearityModel
{
    Complex a1{1.0, 0.0};
    Complex a3{-0.05, 0.0};
    double drive_rms = 1.0;

    // Throws std::invalid_argument if a1 == 0 or drive_rms is not positive and finite.
    void validate() const;
};

// Scales x to rms drive_rms, applies the polynomial, and refers the result back to the input scale:
// y = (rms / drive) * (a1 u + a3 |u|^2 u), u = (drive / rms) x. With a3 = 0 this is exactly a1 x.
// An all-zero input maps to all zeros.
SampledSignal apply_nonlinearity(const SampledSignal &signal, const NonlinearityModel &model);

// Applies the model to every antenna (each normalized by its own rms) and updates total_power to the
// realized output power.
precode::PrecodedFrame apply_nonlinearity(const precode::PrecodedFrame &frame, const NonlinearityModel &model);

// Calibration waveform and search bracket.
struct CalibrationSpec
{
    waveform::PulseShape shape;
    double baud_rate = 20e6;
    std::size_t num_symbols = 16384;
    waveform::SymbolAlphabet alphabet = waveform::SymbolAlphabet::gaussian;
    RngSeed seed{0x0ACA11B2A7E5EEDull};
    double drive_lo = 1e-2;
    double drive_hi = 2.0;
    double tolerance_db = 1e-3;
};

class CalibrationError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

// Finds drive_rms such that a single-antenna cyclic block of the calibration waveform measures the
// target conducted ACLR, by bisection on log(drive). Returns {a1 = 1, a3 = a3_over_a1, drive_rms}.
// Throws CalibrationError when the target lies outside the ACLR range spanned by the bracket.
NonlinearityModel calibrate_drive(Complex a3_over_a1, double target_aclr_db, const CalibrationSpec &spec);

// Conducted ACLR of the calibration waveform at the given model (the quantity calibrate_drive solves for).
double calibration_aclr(const NonlinearityModel &model, const CalibrationSpec &spec);

} // namespace oobsim::frontend
