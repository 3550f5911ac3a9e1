// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 oobsim authors

#include "oobsim/rng.hpp"

#include <cmath>

namespace oobsim {
namespace {

constexpr std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t fnv1a(std::string_view text)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : text) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

} // namespace

RngSeed RngSeed::child(std::string_view label, std::uint64_t index) const
{
    std::uint64_t h = splitmix64(value);
    h = splitmix64(h ^ fnv1a(label));
    h = splitmix64(h + index);
    return RngSeed{h};
}

Complex complex_gaussian(Engine &engine, double variance)
{
    std::normal_distribution<double> normal(0.0, std::sqrt(variance / 2.0));
    const double re = normal(engine);
    const double im = normal(engine);
    return {re, im};
}

} // namespace oobsim
