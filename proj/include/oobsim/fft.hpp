// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 oobsim authors

#pragma once

#include "oobsim/signal.hpp"

#include <span>

// Thin wrapper around FFTW. Plans are created with FFTW_ESTIMATE so that the transform, and therefore
// every downstream result, is bit-identical between runs. Plans are cached per thread; planning is
// serialized internally, execution is lock-free.
namespace oobsim::fft {

// Unnormalized forward DFT: X[k] = sum_n x[n] exp(-j 2 pi k n / N).
void forward(std::span<const Complex> in, std::span<Complex> out);

// Inverse DFT including the 1/N factor, so inverse(forward(x)) == x.
void inverse(std::span<const Complex> in, std::span<Complex> out);

ComplexVector forward(std::span<const Complex> in);
ComplexVector inverse(std::span<const Complex> in);

} // namespace oobsim::fft
