// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 oobsim authors

#include "oobsim/config.hpp"
#include "oobsim/experiments.hpp"
#include "oobsim/frontend.hpp"

#include <CLI11.hpp>
#include <malloc.h>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <utility>

namespace {

namespace ex = oobsim::experiments;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

struct Options
{
    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> realizations;
    std::optional<std::size_t> threads;
    std::string profile = "ci";
};

ex::ExperimentConfig resolve(ex::ExperimentId id, const Options &opt)
{
    const auto profile = ex::parse_profile(opt.profile);
    auto config = opt.config_path.empty() ? ex::default_config(id, profile) : ex::load_config(opt.config_path, id, profile);
    if (!opt.out_dir.empty())
        config.output_dir = opt.out_dir;
    if (opt.seed)
        config.seed = *opt.seed;
    if (opt.realizations)
        config.num_realizations = *opt.realizations;
    if (opt.threads)
        config.threads = *opt.threads;
    config.validate();
    return config;
}

} // namespace

int main(int argc, char **argv)
{
    // Per-draw buffers are freed and reallocated thousands of times; keep them in the heap.
    mallopt(M_TRIM_THRESHOLD, 1 << 30);
    mallopt(M_MMAP_THRESHOLD, 1 << 30);

    CLI::App app{"oobsim: spatial out-of-band radiation of large antenna arrays"};
    app.require_subcommand(1);

    Options opt;
    std::optional<ex::ExperimentId> selected;
    const std::pair<ex::ExperimentId, const char *> commands[] = {
        {ex::ExperimentId::los_pattern, "In-band and OOB beam patterns over angle, line-of-sight users"},
        {ex::ExperimentId::fading_ccdf, "CCDF of victim OOB power under Rayleigh fading"},
        {ex::ExperimentId::scatter_map, "In-band and OOB heat maps through a scatterer field"},
        {ex::ExperimentId::psd_compare, "Fading-averaged PSDs, SISO against the array"},
    };
    for (const auto &[id, description] : commands) {
        auto *sub = app.add_subcommand(ex::to_string(id), description);
        sub->add_option("--config", opt.config_path, "JSON config file (schema_version 1)")->check(CLI::ExistingFile);
        sub->add_option("--out-dir", opt.out_dir, "Directory for the CSV outputs");
        sub->add_option("--seed", opt.seed, "Master seed (unsigned 64-bit)");
        sub->add_option("--realizations", opt.realizations, "Number of Monte Carlo realizations");
        sub->add_option("--threads", opt.threads, "Worker threads");
        sub->add_option("--profile", opt.profile, "Default scale")->check(CLI::IsMember({"ci", "paper"}));
        sub->callback([&selected, id = id] { selected = id; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        const auto config = resolve(*selected, opt);
        for (const auto &path : ex::run_and_write(config))
            std::cout << path.string() << "\n";
    } catch (const ex::ConfigError &e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const oobsim::frontend::CalibrationError &e) {
        std::cerr << "calibration failed: " << e.what() << "\n";
        return kExitRuntime;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitOk;
}
