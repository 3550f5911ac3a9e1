// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 oobsim authors

#include "oobsim/fft.hpp"
#include "oobsim/rng.hpp"
#include "oobsim/signal.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <set>

using namespace oobsim;

TEST_SUITE("infra")
{
    TEST_CASE("forward transform matches the direct DFT")
    {
        auto engine = make_engine(RngSeed{7});
        for (std::size_t n : {1u, 2u, 7u, 64u, 105u}) {
            ComplexVector x(n);
            for (auto &v : x)
                v = complex_gaussian(engine);
            const auto fast = fft::forward(x);
            const auto slow = oracle::dft(x);
            for (std::size_t k = 0; k < n; ++k)
                CHECK(std::abs(fast[k] - slow[k]) < 1e-10 * static_cast<double>(n));
        }
    }

    TEST_CASE("inverse undoes forward")
    {
        auto engine = make_engine(RngSeed{8});
        ComplexVector x(3584);
        for (auto &v : x)
            v = complex_gaussian(engine);
        const auto back = fft::inverse(fft::forward(x));
        double err = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i)
            err = std::max(err, std::abs(back[i] - x[i]));
        CHECK(err < 1e-12);
    }

    TEST_CASE("transform into the input buffer")
    {
        ComplexVector x{{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
        const auto expected = oracle::dft(x);
        fft::forward(x, x);
        for (std::size_t k = 0; k < x.size(); ++k)
            CHECK(std::abs(x[k] - expected[k]) < 1e-12);
    }

    TEST_CASE("bin frequencies follow natural FFT order")
    {
        CHECK(bin_frequency(0, 8, 8.0) == 0.0);
        CHECK(bin_frequency(3, 8, 8.0) == 3.0);
        CHECK(bin_frequency(4, 8, 8.0) == -4.0);
        CHECK(bin_frequency(7, 8, 8.0) == -1.0);
        CHECK(bin_frequency(2, 5, 5.0) == 2.0);
        CHECK(bin_frequency(3, 5, 5.0) == -2.0);
    }

    TEST_CASE("dB conversions round-trip")
    {
        CHECK(to_db(100.0) == doctest::Approx(20.0));
        CHECK(from_db(-30.0) == doctest::Approx(1e-3));
        CHECK(from_db(to_db(0.37)) == doctest::Approx(0.37));
        CHECK(mean_power(ComplexVector{}) == 0.0);
        CHECK(mean_power(ComplexVector{{3, 4}, {0, 0}}) == doctest::Approx(12.5));
    }

    TEST_CASE("child seeds are pure and distinct")
    {
        const RngSeed master{42};
        CHECK(master.child("draw", 3) == master.child("draw", 3));
        std::set<std::uint64_t> seen;
        for (std::uint64_t i = 0; i < 1000; ++i) {
            seen.insert(master.child("draw", i).value);
            seen.insert(master.child("victim", i).value);
        }
        CHECK(seen.size() == 2000);
        CHECK(master.child("a").child("b") != master.child("b").child("a"));
        CHECK(RngSeed{1}.child("x") != RngSeed{2}.child("x"));
    }

    TEST_CASE("complex Gaussian has the requested variance")
    {
        auto engine = make_engine(RngSeed{9});
        double p = 0.0;
        Complex m{};
        const int n = 200000;
        for (int i = 0; i < n; ++i) {
            const auto z = complex_gaussian(engine, 2.0);
            p += std::norm(z);
            m += z;
        }
        CHECK(p / n == doctest::Approx(2.0).epsilon(0.02));
        CHECK(std::abs(m) / n < 0.01);
    }
}
