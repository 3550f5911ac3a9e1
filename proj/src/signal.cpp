// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 oobsim authors

#include "oobsim/signal.hpp"

#include <cmath>
#include <limits>

namespace oobsim {

double mean_power(std::span<const Complex> samples)
{
    if (samples.empty())
        return 0.0;
    double acc = 0.0;
    for (const auto &s : samples)
        acc += std::norm(s);
    return acc / static_cast<double>(samples.size());
}

double bin_frequency(std::size_t k, std::size_t n, double sample_rate)
{
    const auto half = (n + 1) / 2;
    const double index = k < half ? static_cast<double>(k) : static_cast<double>(k) - static_cast<double>(n);
    return index * sample_rate / static_cast<double>(n);
}

double to_db(double linear)
{
    if (linear <= 0.0)
        return -std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(linear);
}

double from_db(double db) { return std::pow(10.0, db / 10.0); }

} // namespace oobsim
