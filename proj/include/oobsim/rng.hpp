// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 oobsim authors

#pragma once

#include "oobsim/signal.hpp"

#include <cstdint>
#include <random>
#include <string_view>

namespace oobsim {

// 64-bit seed with pure, hierarchical derivation of child seeds.
//
// child(label, index) hashes (seed, label, index) with SplitMix64 finalizers, so independent streams
// (e.g. "victim" draw 17) can be produced in any order or on any thread with identical results.
struct RngSeed
{
    std::uint64_t value = 0;

    RngSeed child(std::string_view label, std::uint64_t index = 0) const;

    friend bool operator==(const RngSeed &, const RngSeed &) = default;
};

using Engine = std::mt19937_64;

inline Engine make_engine(RngSeed seed) { return Engine(seed.value); }

// Circularly-symmetric complex Gaussian with E|z|^2 = variance.
Complex complex_gaussian(Engine &engine, double variance = 1.0);

} // namespace oobsim
