// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 oobsim authors

#include "oobsim/channel.hpp"
#include "oobsim/config.hpp"
#include "oobsim/csv.hpp"
#include "oobsim/experiments.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace oobsim;
using namespace oobsim::experiments;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const ChainModels &calibrated()
{
    static const ChainModels models = calibrate_chains(default_config(ExperimentId::los_pattern, Profile::ci));
    return models;
}

std::string slurp(const fs::path &p)
{
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string &name)
{
    const auto dir = fs::temp_directory_path() / ("oobsim-test-" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string config_error(const json &doc, ExperimentId id = ExperimentId::los_pattern)
{
    try {
        parse_config(doc, id, Profile::ci);
    } catch (const ConfigError &e) {
        return e.what();
    }
    return "";
}

ExperimentConfig small_los()
{
    auto c = default_config(ExperimentId::los_pattern, Profile::ci);
    c.array.num_antennas = 16;
    c.waveform.num_symbols = 512;
    c.angle_grid.step_deg = 1.0;
    return c;
}

int run_cli(const std::string &args)
{
    const std::string cmd = std::string(OOBSIM_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

} // namespace

TEST_SUITE("experiments")
{
    TEST_CASE("defaults validate for every experiment and profile")
    {
        for (auto id : {ExperimentId::los_pattern, ExperimentId::fading_ccdf, ExperimentId::scatter_map,
                        ExperimentId::psd_compare})
            for (auto p : {Profile::ci, Profile::paper}) {
                const auto c = default_config(id, p);
                CHECK_NOTHROW(c.validate());
                CHECK(c.experiment == id);
                CHECK(parse_experiment_id(to_string(id)) == id);
            }
        CHECK(default_config(ExperimentId::los_pattern, Profile::paper).array.num_antennas == 300);
        CHECK(default_config(ExperimentId::los_pattern, Profile::ci).array.num_antennas == 64);
        CHECK(default_config(ExperimentId::fading_ccdf, Profile::paper).num_realizations == 100000);
        CHECK_THROWS_AS(parse_profile("laptop"), ConfigError);
        CHECK_THROWS_AS(parse_experiment_id("fig2"), ConfigError);
    }

    TEST_CASE("config documents overlay the defaults")
    {
        const json doc = {{"schema_version", 1},
                          {"experiment", "los-pattern"},
                          {"tag", "k4"},
                          {"seed", 99},
                          {"array", {{"num_antennas", 32}}},
                          {"users", {{"count", 4}, {"allocation", "inverse_path_loss"}, {"path_gains", {1, 0.5, 0.25, 1}}}},
                          {"frontend", {{"a3_over_a1", {-0.04, 0.01}}, {"target_aclr_db", 25.0}}}};
        const auto c = parse_config(doc, ExperimentId::los_pattern, Profile::ci);
        CHECK(c.tag == "k4");
        CHECK(c.seed == 99);
        CHECK(c.array.num_antennas == 32);
        CHECK(c.users.count == 4);
        CHECK(c.users.allocation == precode::AllocationMode::inverse_path_loss);
        CHECK(c.frontend.a3_over_a1 == Complex{-0.04, 0.01});
        CHECK(c.waveform.rolloff == 0.22);
        const auto round = parse_config(to_json(c), ExperimentId::los_pattern, Profile::paper);
        CHECK(to_json(round) == to_json(c));
    }

    TEST_CASE("config errors name the field")
    {
        CHECK(config_error({{"experiment", "los-pattern"}}).find("schema_version") != std::string::npos);
        CHECK(config_error({{"schema_version", 2}}).find("schema_version") != std::string::npos);
        CHECK(config_error({{"schema_version", 1}, {"colour", 1}}).find("colour") != std::string::npos);
        CHECK(config_error({{"schema_version", 1}, {"array", {{"antennas", 4}}}}).find("array.antennas") != std::string::npos);
        CHECK(config_error({{"schema_version", 1}, {"experiment", "scatter-map"}}).find("experiment") != std::string::npos);
        CHECK(config_error({{"schema_version", 1}, {"waveform", {{"rolloff", 1.5}}}}).find("rolloff") != std::string::npos);
        CHECK(config_error({{"schema_version", 1}, {"waveform", {{"rolloff", "wide"}}}}).find("rolloff") != std::string::npos);
        CHECK(config_error({{"schema_version", 1}, {"waveform", {{"oversampling", 3}}}}).find("oversampling") != std::string::npos);
        CHECK(config_error({{"schema_version", 1}, {"array", {{"num_antennas", 2}}}, {"users", {{"count", 3}}}})
                  .find("users.count") != std::string::npos);
        CHECK(config_error({{"schema_version", 1}, {"num_realizations", 10}}, ExperimentId::fading_ccdf)
                  .find("num_realizations") != std::string::npos);
        CHECK(config_error({{"schema_version", 1}, {"seed", -3}}).find("seed") != std::string::npos);
    }

    TEST_CASE("config files load from disk")
    {
        const auto dir = scratch("config");
        std::ofstream(dir / "ok.json") << R"({"schema_version": 1, "experiment": "fading-ccdf", "num_realizations": 2000})";
        std::ofstream(dir / "bad.json") << "{ not json";
        CHECK(load_config(dir / "ok.json", ExperimentId::fading_ccdf, Profile::ci).num_realizations == 2000);
        CHECK_THROWS_AS(load_config(dir / "bad.json", ExperimentId::fading_ccdf, Profile::ci), ConfigError);
        CHECK_THROWS_AS(load_config(dir / "missing.json", ExperimentId::fading_ccdf, Profile::ci), ConfigError);
    }

    TEST_CASE("shipped configs load")
    {
        std::size_t count = 0;
        for (const auto &entry : fs::directory_iterator(OOBSIM_CONFIG_DIR)) {
            if (entry.path().extension() != ".json")
                continue;
            CAPTURE(entry.path().string());
            std::ifstream in(entry.path());
            const auto id = parse_experiment_id(json::parse(in).at("experiment").get<std::string>());
            for (const auto profile : {Profile::ci, Profile::paper})
                CHECK_NOTHROW(load_config(entry.path(), id, profile).validate());
            ++count;
        }
        CHECK(count >= 4);
    }

    TEST_CASE("CSV formatting")
    {
        CHECK(csv::format_db(-3.14159265) == "-3.1416");
        CHECK(csv::format_db(-0.00001) == "0.0000");
        CHECK(csv::format_db(12.0) == "12.0000");
        CHECK(csv::format_db(-std::numeric_limits<double>::infinity()) == "-inf");
        CHECK(csv::format_number(0.25) == "0.25");
        CHECK(csv::format_number(1e-7) == "1e-07");
        CHECK(csv::output_path("out", "scatter-map", "run1") == fs::path("out") / "scatter-map_run1.csv");

        const auto dir = scratch("csv");
        {
            csv::Writer w(dir / "t.csv", json{{"seed", 1}}, {"a", "b"});
            w.row({"1", "x,y"});
            w.row({"say \"hi\"", "2"});
            CHECK_THROWS(w.row({"only one"}));
        }
        const auto text = slurp(dir / "t.csv");
        CHECK(text.rfind("# {", 0) == 0);
        CHECK(text.find("a,b\n1,\"x,y\"\n\"say \"\"hi\"\"\",2\n") != std::string::npos);
    }

    TEST_CASE("line-of-sight runs are reproducible byte for byte")
    {
        auto c = small_los();
        c.users.count = 3;
        c.output_dir = scratch("los").string();
        const auto files = write_los_pattern(c, run_los_pattern(c, calibrated()));
        REQUIRE(files.size() == 3);
        std::vector<std::string> first;
        for (const auto &f : files)
            first.push_back(slurp(f));
        const auto again = write_los_pattern(c, run_los_pattern(c, calibrated()));
        REQUIRE(again == files);
        for (std::size_t i = 0; i < files.size(); ++i)
            CHECK(slurp(files[i]) == first[i]);
        CHECK(files[0].filename() == "los-pattern_default.csv");
        CHECK(first[0].find("angle_deg,array_inband_dB,array_oob_dB,siso_inband_dB,siso_oob_dB\n") != std::string::npos);
    }

    TEST_CASE("drawn user angles are distinct grid points")
    {
        auto c = small_los();
        c.array.num_antennas = 64;
        c.users.count = 30;
        c.angle_grid.step_deg = 0.25;
        const auto angles = los_user_angles(c);
        REQUIRE(angles.size() == 30);
        auto sorted = angles;
        std::sort(sorted.begin(), sorted.end());
        CHECK(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end());
        for (double a : angles) {
            CHECK(a >= -60.0);
            CHECK(a <= 60.0);
            CHECK(std::abs(a * 4.0 - std::round(a * 4.0)) < 1e-9);
        }
    }

    TEST_CASE("single-user line-of-sight reference levels")
    {
        auto c = small_los();
        c.users.angles_deg = {20.0};
        const auto r = run_los_pattern(c, calibrated());
        CHECK(r.array_power == doctest::Approx(1.0 / 16.0));
        CHECK(analysis::aclr_db(r.array_conducted) == doctest::Approx(analysis::aclr_db(r.siso_conducted)).epsilon(0.02));
        const auto at = std::find_if(r.angles_deg.begin(), r.angles_deg.end(), [](double a) { return std::abs(a - 20.0) < 1e-9; });
        REQUIRE(at != r.angles_deg.end());
        const auto i = static_cast<std::size_t>(at - r.angles_deg.begin());
        CHECK(std::abs(to_db(r.array.inband_power[i] / r.siso_inband)) < 0.5);
        CHECK(std::abs(to_db(r.array.oob_power[i] / r.siso_oob)) < 0.5);
    }

    TEST_CASE("hundred-element beam is about a degree wide")
    {
        auto c = small_los();
        c.array.num_antennas = 100;
        c.waveform.num_symbols = 1024;
        c.users.angles_deg = {10.0};
        c.angle_grid = {5.0, 15.0, 0.02};
        const auto r = run_los_pattern(c, calibrated());
        const auto &p = r.array.inband_power;
        const auto peak = static_cast<std::size_t>(std::max_element(p.begin(), p.end()) - p.begin());
        std::size_t lo = peak;
        std::size_t hi = peak;
        while (lo > 0 && p[lo - 1] >= p[peak] / 2)
            --lo;
        while (hi + 1 < p.size() && p[hi + 1] >= p[peak] / 2)
            ++hi;
        const double width = r.angles_deg[hi] - r.angles_deg[lo];
        CHECK(width >= 0.8);
        CHECK(width <= 2.2);
    }

    TEST_CASE("fading statistics do not depend on the thread count")
    {
        auto c = default_config(ExperimentId::fading_ccdf, Profile::ci);
        c.waveform.num_symbols = 128;
        c.num_realizations = 40;
        const FadingScenario s{8, 2};
        c.threads = 1;
        const auto serial = run_fading_scenario(c, s, calibrated());
        c.threads = 3;
        const auto parallel = run_fading_scenario(c, s, calibrated());
        CHECK(serial.victim_oob_db == parallel.victim_oob_db);
        CHECK(serial.mean_oob_db == parallel.mean_oob_db);
        CHECK(serial.ccdf.probability == parallel.ccdf.probability);
        CHECK(serial.tx_power == doctest::Approx(0.25));
    }

    TEST_CASE("fading powers are normalized to the SISO reference")
    {
        auto c = default_config(ExperimentId::fading_ccdf, Profile::ci);
        c.waveform.num_symbols = 128;
        c.num_realizations = 300;
        const auto siso = run_fading_scenario(c, {1, 1}, calibrated());
        const auto array = run_fading_scenario(c, {32, 1}, calibrated());
        auto mean_served = [](const FadingScenarioResult &r) {
            double s = 0.0;
            for (const auto &x : r.samples)
                s += x.served_inband;
            return s / static_cast<double>(r.samples.size());
        };
        CHECK(std::abs(to_db(mean_served(array) / mean_served(siso))) < 0.5);
        CHECK(siso.mean_oob_db - array.mean_oob_db == doctest::Approx(to_db(32.0)).epsilon(0.1));
        CHECK(array.std_db < siso.std_db);
    }

    TEST_CASE("scatter map focuses on the users and is reproducible")
    {
        auto c = default_config(ExperimentId::scatter_map, Profile::ci);
        c.waveform.num_symbols = 256;
        c.scatter.grid_points = 30;
        const auto a = run_scatter_map(c, calibrated());
        const auto b = run_scatter_map(c, calibrated());
        CHECK(a.inband_db == b.inband_db);
        CHECK(a.oob_db == b.oob_db);
        REQUIRE(a.user_cells.size() == 3);

        // Omnidirectional reference: the power each cell would get with the same total power spread evenly.
        const auto g = geometry_of(c);
        const channel::ScatterMap map(g, a.scatterers, a.users, std::vector<double>(a.scatterers.size(), 1.0));
        auto focusing_db = [&](std::size_t cell) {
            const auto h = map.channel_to(a.positions[cell]).response(g.carrier_frequency);
            double incoherent = 0.0;
            for (const auto &v : h)
                incoherent += std::norm(v);
            return a.inband_db[cell] - to_db(incoherent);
        };
        auto nearest_scatterer = [&](std::size_t cell) {
            double d = 1e300;
            for (const auto &sc : a.scatterers)
                d = std::min(d, channel::distance(sc, a.positions[cell]));
            return d;
        };
        std::vector<double> gains;
        for (std::size_t cell = 0; cell < a.positions.size(); ++cell)
            gains.push_back(focusing_db(cell));
        std::vector<double> sorted = gains;
        std::sort(sorted.begin(), sorted.end());
        const double top_decile = sorted[sorted.size() * 9 / 10];
        for (std::size_t k = 0; k < 3; ++k) {
            const auto cell = a.user_cells[k];
            CHECK(gains[cell] >= top_decile);
            CHECK(std::abs(a.positions[cell].x - a.users[k].x) < 1e-9);
            const long ix = static_cast<long>(cell % 30);
            const long iy = static_cast<long>(cell / 30);
            for (long dy = -1; dy <= 1; ++dy)
                for (long dx = -1; dx <= 1; ++dx) {
                    const long x = ix + dx;
                    const long y = iy + dy;
                    if ((dx == 0 && dy == 0) || x < 0 || y < 0 || x >= 30 || y >= 30)
                        continue;
                    const auto other = static_cast<std::size_t>(y * 30 + x);
                    // Raw power can peak next to a scatterer, where the last leg is short.
                    if (nearest_scatterer(other) >= nearest_scatterer(cell))
                        CHECK(a.inband_db[cell] >= a.inband_db[other]);
                }
        }
    }

    TEST_CASE("PSD comparison normalization")
    {
        auto c = default_config(ExperimentId::psd_compare, Profile::ci);
        c.array.num_antennas = 32;
        c.users.count = 2;
        c.waveform.num_symbols = 128;
        c.num_realizations = 200;
        const auto r = run_psd_compare(c, calibrated());
        CHECK(r.siso_rx_user_inband_db == doctest::Approx(0.0));
        CHECK(std::abs(r.array_rx_user_inband_db) < 0.5);
        CHECK(std::abs(r.siso_rx_victim_oob_db - r.array_rx_victim_oob_db - to_db(16.0)) < 1.0);
        CHECK(r.frequencies.size() == 128 * 7);
        CHECK(std::is_sorted(r.frequencies.begin(), r.frequencies.end()));
    }

    TEST_CASE("less linear array hardware still disturbs the victim less")
    {
        auto c = default_config(ExperimentId::psd_compare, Profile::ci);
        c.array.num_antennas = 32;
        c.users.count = 2;
        c.waveform.num_symbols = 128;
        c.num_realizations = 40;
        c.frontend.target_aclr_db = 23.0;
        c.frontend.siso_target_aclr_db = 30.0;
        const auto r = run_psd_compare(c);
        CHECK(r.array_tx_aclr_db < r.siso_tx_aclr_db);
        CHECK(r.array_rx_victim_oob_db < r.siso_rx_victim_oob_db);
    }

    TEST_CASE("command-line exit codes")
    {
        const auto dir = scratch("cli");
        std::ofstream(dir / "unknown.json") << R"({"schema_version": 1, "bogus": true})";
        std::ofstream(dir / "small.json")
            << R"({"schema_version": 1, "array": {"num_antennas": 8}, "waveform": {"num_symbols": 256},)"
            << R"( "angle_grid": {"start_deg": -90, "stop_deg": 90, "step_deg": 5}})";
        std::ofstream(dir / "unreachable.json")
            << R"({"schema_version": 1, "array": {"num_antennas": 8}, "frontend": {"target_aclr_db": 250}})";
        CHECK(run_cli("los-pattern --config " + (dir / "unknown.json").string()) == 2);
        CHECK(run_cli("los-pattern --profile huge") == 2);
        CHECK(run_cli("no-such-experiment") == 2);
        CHECK(run_cli("los-pattern --config " + (dir / "unreachable.json").string()) == 3);
        CHECK(run_cli("los-pattern --config " + (dir / "small.json").string() + " --out-dir " + dir.string() +
                      " --seed 5") == 0);
        CHECK(fs::exists(dir / "los-pattern_default.csv"));
        CHECK(fs::exists(dir / "los-pattern_default-summary.csv"));
    }
}
