// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 oobsim authors

#include "oobsim/channel.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>

using namespace oobsim;
using namespace oobsim::channel;
using std::numbers::pi;

TEST_SUITE("channel")
{
    TEST_CASE("line of sight responses")
    {
        const UlaGeometry g{8, 0.5, 3.5e9};
        SUBCASE("broadside unit gain is all ones")
        {
            const std::vector<Direction> a{Direction(0.0)};
            const std::vector<double> b{1.0};
            const auto ch = make_los(g, a, b);
            for (double f : {3.49e9, 3.5e9, 3.52e9})
                for (const auto &h : ch.response(0, f))
                    CHECK(std::abs(h - Complex{1.0, 0.0}) < 1e-15);
        }
        SUBCASE("zero gain silences a user")
        {
            const std::vector<Direction> a{Direction(0.3), Direction(-0.2)};
            const std::vector<double> b{1.0, 0.0};
            for (const auto &h : make_los(g, a, b).response(1, 3.5e9))
                CHECK(h == Complex{});
        }
        SUBCASE("mirrored users are conjugates at the carrier")
        {
            const std::vector<Direction> a{Direction(0.4), Direction(-0.4)};
            const std::vector<double> b{1.0, 1.0};
            const auto ch = make_los(g, a, b);
            const auto h0 = ch.response(0, g.carrier_frequency);
            const auto h1 = ch.response(1, g.carrier_frequency);
            for (std::size_t m = 0; m < h0.size(); ++m)
                CHECK(std::abs(h0[m] - std::conj(h1[m])) < 1e-12);
        }
        SUBCASE("magnitude is flat in frequency")
        {
            const std::vector<Direction> a{Direction(0.9)};
            const std::vector<double> b{0.3};
            const auto ch = make_los(g, a, b);
            for (double f = 3.4e9; f < 3.6e9; f += 7.1e6)
                for (const auto &h : ch.response(0, f))
                    CHECK(std::abs(std::abs(h) - 0.3) < 1e-12);
        }
        SUBCASE("invalid input")
        {
            const std::vector<Direction> a{Direction(0.0)};
            const std::vector<double> two{1.0, 1.0};
            const std::vector<double> negative{-1.0};
            CHECK_THROWS_AS(make_los(g, a, two), std::invalid_argument);
            CHECK_THROWS_AS(make_los(g, a, negative), std::invalid_argument);
            CHECK_THROWS_AS(make_los(g, {}, {}), std::invalid_argument);
        }
    }

    TEST_CASE("Rayleigh taps have unit mean energy per antenna")
    {
        double sum = 0.0;
        const int draws = 10000;
        for (int i = 0; i < draws; ++i) {
            const auto ch = sample_rayleigh(1, 1, 15, RngSeed{1}.child("d", static_cast<std::uint64_t>(i)), 1.0);
            for (const auto &h : ch.taps_for(0, 0))
                sum += std::norm(h);
        }
        CHECK(sum / draws >= 0.97);
        CHECK(sum / draws <= 1.03);
    }

    TEST_CASE("single-tap power is exponential")
    {
        std::vector<double> p;
        for (std::uint64_t i = 0; i < 10000; ++i)
            p.push_back(std::norm(sample_rayleigh(1, 1, 1, RngSeed{2}.child("d", i), 1.0).at(0, 0, 0)));
        CHECK(oracle::kolmogorov_distance(p, [](double x) { return 1.0 - std::exp(-x); }) < 0.02);
    }

    TEST_CASE("distinct taps are uncorrelated")
    {
        const std::size_t M = 2;
        const std::size_t K = 2;
        const std::size_t L = 3;
        const std::size_t n = M * K * L;
        std::vector<std::vector<Complex>> corr(n, std::vector<Complex>(n));
        std::vector<double> power(n, 0.0);
        const int draws = 10000;
        for (std::uint64_t d = 0; d < draws; ++d) {
            const auto ch = sample_rayleigh(M, K, L, RngSeed{3}.child("d", d), 1.0);
            for (std::size_t i = 0; i < n; ++i) {
                power[i] += std::norm(ch.taps[i]);
                for (std::size_t j = 0; j < i; ++j)
                    corr[i][j] += ch.taps[i] * std::conj(ch.taps[j]);
            }
        }
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < i; ++j)
                CHECK(std::abs(corr[i][j]) / std::sqrt(power[i] * power[j]) < 0.03);
    }

    TEST_CASE("Rayleigh draws are deterministic")
    {
        const auto a = sample_rayleigh(4, 3, 5, RngSeed{99}, 1e-6);
        const auto b = sample_rayleigh(4, 3, 5, RngSeed{99}, 1e-6);
        CHECK(a.taps == b.taps);
        CHECK(a.taps != sample_rayleigh(4, 3, 5, RngSeed{100}, 1e-6).taps);
        CHECK_THROWS_AS(sample_rayleigh(0, 1, 1, RngSeed{1}, 1.0), std::invalid_argument);
        CHECK_THROWS_AS(sample_rayleigh(1, 1, 1, RngSeed{1}, 0.0), std::invalid_argument);
    }

    TEST_CASE("exponential delay profile decays and stays normalized")
    {
        double first = 0.0;
        double last = 0.0;
        double total = 0.0;
        const int draws = 20000;
        for (std::uint64_t d = 0; d < draws; ++d) {
            const auto ch = sample_rayleigh(1, 1, 4, RngSeed{4}.child("d", d), 1.0, PowerDelayProfile::exponential, 3.0);
            first += std::norm(ch.at(0, 0, 0));
            last += std::norm(ch.at(0, 0, 3));
            for (const auto &h : ch.taps_for(0, 0))
                total += std::norm(h);
        }
        CHECK(total / draws == doctest::Approx(1.0).epsilon(0.03));
        CHECK(to_db(first / last) == doctest::Approx(9.0).epsilon(0.05));
    }

    TEST_CASE("frequency response matches the direct transform")
    {
        const auto ch = sample_rayleigh(2, 2, 3, RngSeed{5}, 1.0 / 4.0);
        for (double fs : {4.0, 4.4}) {
            const std::size_t n = 24;
            for (std::size_t m = 0; m < 2; ++m) {
                const auto h = frequency_response(ch, m, 1, n, fs);
                for (std::size_t b = 0; b < n; ++b) {
                    Complex acc{};
                    const double f = bin_frequency(b, n, fs);
                    for (std::size_t l = 0; l < 3; ++l)
                        acc += ch.at(m, 1, l) * std::exp(Complex{0.0, -2.0 * pi * f * static_cast<double>(l) / 4.0});
                    CHECK(std::abs(h[b] - acc) < 1e-12);
                }
            }
        }
    }

    TEST_CASE("response period")
    {
        const auto ch = sample_rayleigh(1, 1, 3, RngSeed{6}, 1.0 / 20e6);
        CHECK(response_period(ch, 3584, 140e6) == 512);
        CHECK(response_period(ch, 3585, 140e6) == 0);
        CHECK(response_period(ch, 3584, 150e6) == 0);
        const auto spec = tap_spectrum(ch, 0, 0, 512);
        const auto full = frequency_response(ch, 0, 0, 3584, 140e6);
        for (std::size_t b = 0; b < 3584; b += 97)
            CHECK(std::abs(full[b] - spec[b % 512]) < 1e-12);
    }

    TEST_CASE("ray channel geometry")
    {
        const UlaGeometry g{2, 0.5, 3.5e9};
        SUBCASE("equidistant scatterer gives equal magnitudes")
        {
            const ScatterMap map(g, {{100.0, 0.0}}, {}, {1.0});
            const auto ch = map.channel_to({200.0, 30.0});
            CHECK(map.leg_distance(0, 0) == doctest::Approx(map.leg_distance(1, 0)));
            CHECK(ch.gains[0] == doctest::Approx(ch.gains[1]));
        }
        SUBCASE("doubling all distances quarters the amplitudes")
        {
            const ScatterMap near(g, {{50.0, 10.0}}, {}, {1.0});
            const ScatterMap far(g, {{100.0, 20.0}}, {}, {1.0});
            // The array is small compared with the legs, so scaling the scene about the origin doubles them.
            const auto a = near.channel_to({80.0, -5.0});
            const auto b = far.channel_to({160.0, -10.0});
            for (std::size_t m = 0; m < 2; ++m)
                CHECK(b.gains[m] / a.gains[m] == doctest::Approx(0.25).epsilon(1e-4));
        }
        SUBCASE("half a wavelength along the ray flips the phase")
        {
            const ScatterMap map(UlaGeometry{1, 0.5, 3.5e9}, {{100.0, 0.0}}, {}, {1.0});
            const double lambda = g.wavelength();
            const auto a = map.channel_to({200.0, 0.0}).response(0, 3.5e9);
            const auto b = map.channel_to({200.0 + lambda / 2.0, 0.0}).response(0, 3.5e9);
            CHECK(std::abs(std::arg(b / a)) == doctest::Approx(pi).epsilon(1e-6));
        }
        SUBCASE("coincident terminal is rejected")
        {
            const ScatterMap map(g, {{100.0, 0.0}}, {}, {1.0});
            CHECK_THROWS_AS(map.channel_to({100.0, 0.0}), std::domain_error);
        }
        SUBCASE("ray delays and gains follow the legs")
        {
            const ScatterMap map(g, {{120.0, 5.0}, {90.0, -40.0}}, {}, {1.0, 0.5});
            const Point2 t{300.0, 12.0};
            const auto ch = map.channel_to(t);
            for (std::size_t m = 0; m < 2; ++m)
                for (std::size_t s = 0; s < 2; ++s) {
                    const double d1 = distance(map.element_position(m), map.scatterers()[s]);
                    const double d2 = distance(map.scatterers()[s], t);
                    CHECK(ch.delays[m * 2 + s] == doctest::Approx((d1 + d2) / geometry::kSpeedOfLight).epsilon(1e-14));
                    CHECK(ch.gains[m * 2 + s] == doctest::Approx(map.reflection()[s] / (d1 * d2)).epsilon(1e-14));
                }
        }
    }

    TEST_CASE("received power is invariant to scatterer relabeling")
    {
        const UlaGeometry g{16, 0.5, 3.5e9};
        const std::vector<Point2> s{{260, 10}, {300, -30}, {340, 45}};
        const std::vector<Point2> r{{340, 45}, {260, 10}, {300, -30}};
        const ScatterMap a(g, s, {}, {1.0, 0.7, 0.4});
        const ScatterMap b(g, r, {}, {0.4, 1.0, 0.7});
        const Point2 t{310, 0};
        const auto ha = a.channel_to(t).response(3.51e9);
        const auto hb = b.channel_to(t).response(3.51e9);
        for (std::size_t m = 0; m < ha.size(); ++m)
            CHECK(std::abs(ha[m] - hb[m]) < 1e-12 * std::abs(ha[m]) + 1e-18);
    }

    TEST_CASE("scatter layout")
    {
        const UlaGeometry g{100, 0.5, 3.5e9};
        const Rectangle region{250, 350, -50, 50};
        const auto a = sample_scatter_map(g, 20, region, 3, RngSeed{77}, 100);
        const auto b = sample_scatter_map(g, 20, region, 3, RngSeed{77}, 100);
        REQUIRE(a.scatterers().size() == 20);
        for (std::size_t s = 0; s < 20; ++s) {
            CHECK(a.scatterers()[s].x == b.scatterers()[s].x);
            CHECK(a.scatterers()[s].y == b.scatterers()[s].y);
            CHECK(a.scatterers()[s].x >= 250);
            CHECK(a.scatterers()[s].x <= 350);
            CHECK(std::abs(a.scatterers()[s].y) <= 50);
        }
        std::set<std::pair<double, double>> cells;
        for (const auto &u : a.users()) {
            cells.emplace(u.x, u.y);
            // Users sit on cell centers of the 1 m grid.
            CHECK(std::abs(std::fmod(u.x - 250.0, 1.0) - 0.5) < 1e-9);
        }
        CHECK(cells.size() == 3);
        CHECK(a.element_position(0).y == doctest::Approx(-a.element_position(99).y));
        CHECK_THROWS_AS(sample_scatter_map(g, 0, region, 3, RngSeed{1}), std::invalid_argument);
        CHECK_THROWS_AS(sample_scatter_map(g, 5, Rectangle{0, 0, 0, 1}, 3, RngSeed{1}), std::invalid_argument);
        CHECK_THROWS_AS(sample_scatter_map(g, 5, region, 5, RngSeed{1}, 2), std::invalid_argument);
    }
}
