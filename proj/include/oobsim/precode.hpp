// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 oobsim authors

#pragma once

#include "oobsim/channel.hpp"
#include "oobsim/signal.hpp"

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace oobsim::precode {

// Per-antenna transmit signals of one cyclic block. All antennas share sample rate and length.
struct PrecodedFrame
{
    std::vector<SampledSignal> per_antenna;
    double total_power = 0.0; // mean over time of sum_m |x_m|^2

    std::size_t num_antennas() const { return per_antenna.size(); }
    std::size_t length() const { return per_antenna.empty() ? 0 : per_antenna.front().size(); }
    double sample_rate() const { return per_antenna.empty() ? 0.0 : per_antenna.front().sample_rate; }

    // Recomputes sum_m mean|x_m|^2 from the samples.
    double measured_power() const;
};

struct PowerAllocation
{
    std::vector<double> per_user_powers; // nonnegative, sums to 1
};

enum class AllocationMode
{
    equal,
    inverse_path_loss,
};

// equal: p_k = 1/K. inverse_path_loss: p_k proportional to 1/beta_k^2, normalized to sum 1.
// Throws std::invalid_argument on an empty gain list or a nonpositive gain in inverse mode.
PowerAllocation allocate_power(std::span<const double> path_gains, AllocationMode mode);

// Maximum-ratio transmission. Each user's precoding filter is the conjugate (time-reversed for tap
// channels, delay-conjugate for LOS) channel divided by its aggregate energy norm; user k is weighted
// by sqrt(p_k); the sum is then scaled so that the realized frame power equals total_power.
// Throws std::invalid_argument on user-count/length/rate mismatches and on an all-zero user channel.
PrecodedFrame mrt_precode(std::span<const SampledSignal> user_signals, const channel::LosChannel &channel,
                          const PowerAllocation &allocation, double total_power);
PrecodedFrame mrt_precode(std::span<const SampledSignal> user_signals, const channel::TapChannel &channel,
                          const PowerAllocation &allocation, double total_power);
// Ray channels (one per user) evaluated at carrier + baseband bin frequency.
PrecodedFrame mrt_precode(std::span<const SampledSignal> user_signals,
                          std::span<const channel::RayChannel> user_channels, double carrier_frequency,
                          const PowerAllocation &allocation, double total_power);

// Fills out[b], b = 0..n-1, with the response from antenna m to user k on DFT bin b of the block.
using ResponseFn = std::function<void(std::size_t k, std::size_t m, std::span<Complex> out)>;

// MRT for any channel given as per-bin frequency responses.
PrecodedFrame mrt_precode_frequency(std::span<const SampledSignal> user_signals, std::size_t num_antennas,
                                    const ResponseFn &response, const PowerAllocation &allocation,
                                    double total_power);

// Omnidirectional single-antenna transmission of one signal at the given power.
PrecodedFrame siso_frame(const SampledSignal &signal, double total_power);

// Rescales every antenna by one common factor so that the realized frame power equals total_power.
void scale_to_power(PrecodedFrame &frame, double total_power);

// Array total power that gives every user the in-band power it would get from a SISO system with
// power siso_power (MRT array gain M/K per user): P_array = K / M * P_SISO. Throws if K > M or K == 0.
double array_power_from_siso(double siso_power, std::size_t num_antennas, std::size_t num_users);

// Inverse of array_power_from_siso: P_SISO = M / K * P_array.
double siso_reference_power(double array_power, std::size_t num_antennas, std::size_t num_users);

} // namespace oobsim::precode
