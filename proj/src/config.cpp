// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 oobsim authors

#include "oobsim/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

namespace oobsim::experiments {

using nlohmann::json;

std::string to_string(ExperimentId id)
{
    switch (id) {
    case ExperimentId::los_pattern:
        return "los-pattern";
    case ExperimentId::fading_ccdf:
        return "fading-ccdf";
    case ExperimentId::scatter_map:
        return "scatter-map";
    case ExperimentId::psd_compare:
        return "psd-compare";
    }
    return "unknown";
}

ExperimentId parse_experiment_id(const std::string &name)
{
    for (auto id : {ExperimentId::los_pattern, ExperimentId::fading_ccdf, ExperimentId::scatter_map,
                    ExperimentId::psd_compare})
        if (to_string(id) == name)
            return id;
    throw ConfigError("field 'experiment': unknown experiment '" + name + "'");
}

Profile parse_profile(const std::string &name)
{
    if (name == "ci")
        return Profile::ci;
    if (name == "paper")
        return Profile::paper;
    throw ConfigError("profile: expected 'ci' or 'paper', got '" + name + "'");
}

namespace {

std::string alphabet_name(waveform::SymbolAlphabet a) { return a == waveform::SymbolAlphabet::qpsk ? "qpsk" : "gaussian"; }
std::string allocation_name(precode::AllocationMode a)
{
    return a == precode::AllocationMode::inverse_path_loss ? "inverse_path_loss" : "equal";
}
std::string profile_name(channel::PowerDelayProfile p)
{
    return p == channel::PowerDelayProfile::exponential ? "exponential" : "uniform";
}

// Walks one JSON object, reading known keys and rejecting the rest.
class Section
{
  public:
    Section(const json &obj, std::string path) : obj_(obj), path_(std::move(path))
    {
        if (!obj_.is_object())
            throw ConfigError("field '" + display() + "': expected an object");
    }

    ~Section() = default;
    Section(const Section &) = delete;
    Section &operator=(const Section &) = delete;

    std::string field(const std::string &key) const { return path_.empty() ? key : path_ + "." + key; }

    const json *find(const std::string &key)
    {
        seen_.insert(key);
        const auto it = obj_.find(key);
        return it == obj_.end() ? nullptr : &*it;
    }

    void number(const std::string &key, double &out)
    {
        if (const auto *v = find(key)) {
            if (!v->is_number())
                throw ConfigError("field '" + field(key) + "': expected a number");
            out = v->get<double>();
        }
    }

    void count(const std::string &key, std::size_t &out)
    {
        if (const auto *v = find(key)) {
            if (!v->is_number_integer() || v->get<long long>() < 0)
                throw ConfigError("field '" + field(key) + "': expected a nonnegative integer");
            out = v->get<std::size_t>();
        }
    }

    void text(const std::string &key, std::string &out)
    {
        if (const auto *v = find(key)) {
            if (!v->is_string())
                throw ConfigError("field '" + field(key) + "': expected a string");
            out = v->get<std::string>();
        }
    }

    void numbers(const std::string &key, std::vector<double> &out)
    {
        if (const auto *v = find(key)) {
            if (!v->is_array())
                throw ConfigError("field '" + field(key) + "': expected an array of numbers");
            out.clear();
            for (const auto &e : *v) {
                if (!e.is_number())
                    throw ConfigError("field '" + field(key) + "': expected an array of numbers");
                out.push_back(e.get<double>());
            }
        }
    }

    void finish() const
    {
        for (auto it = obj_.begin(); it != obj_.end(); ++it)
            if (!seen_.count(it.key()))
                throw ConfigError("field '" + field(it.key()) + "': unknown key");
    }

  private:
    std::string display() const { return path_.empty() ? "<root>" : path_; }

    const json &obj_;
    std::string path_;
    std::set<std::string> seen_;
};

void read_waveform(Section s, WaveformConfig &w)
{
    s.number("baud_rate", w.baud_rate);
    s.number("rolloff", w.rolloff);
    s.count("oversampling", w.oversampling);
    s.count("span_symbols", w.span_symbols);
    s.count("num_symbols", w.num_symbols);
    std::string alphabet = alphabet_name(w.alphabet);
    s.text("alphabet", alphabet);
    if (alphabet == "gaussian")
        w.alphabet = waveform::SymbolAlphabet::gaussian;
    else if (alphabet == "qpsk")
        w.alphabet = waveform::SymbolAlphabet::qpsk;
    else
        throw ConfigError("field '" + s.field("alphabet") + "': expected 'gaussian' or 'qpsk'");
    s.finish();
}

void read_array(Section s, ArrayConfig &a)
{
    s.count("num_antennas", a.num_antennas);
    s.number("spacing_wavelengths", a.spacing_wavelengths);
    s.number("carrier_frequency", a.carrier_frequency);
    s.finish();
}

void read_frontend(Section s, FrontendConfig &f)
{
    std::vector<double> ratio{f.a3_over_a1.real(), f.a3_over_a1.imag()};
    s.numbers("a3_over_a1", ratio);
    if (ratio.size() != 2)
        throw ConfigError("field '" + s.field("a3_over_a1") + "': expected [real, imag]");
    f.a3_over_a1 = {ratio[0], ratio[1]};
    s.number("target_aclr_db", f.target_aclr_db);
    if (const auto *v = s.find("siso_target_aclr_db")) {
        if (v->is_null())
            f.siso_target_aclr_db.reset();
        else if (v->is_number())
            f.siso_target_aclr_db = v->get<double>();
        else
            throw ConfigError("field '" + s.field("siso_target_aclr_db") + "': expected a number or null");
    }
    s.finish();
}

void read_users(Section s, UsersConfig &u)
{
    s.count("count", u.count);
    std::string allocation = allocation_name(u.allocation);
    s.text("allocation", allocation);
    if (allocation == "equal")
        u.allocation = precode::AllocationMode::equal;
    else if (allocation == "inverse_path_loss")
        u.allocation = precode::AllocationMode::inverse_path_loss;
    else
        throw ConfigError("field '" + s.field("allocation") + "': expected 'equal' or 'inverse_path_loss'");
    s.numbers("angles_deg", u.angles_deg);
    s.numbers("path_gains", u.path_gains);
    std::vector<double> range{u.angle_min_deg, u.angle_max_deg};
    s.numbers("angle_range_deg", range);
    if (range.size() != 2)
        throw ConfigError("field '" + s.field("angle_range_deg") + "': expected [min, max]");
    u.angle_min_deg = range[0];
    u.angle_max_deg = range[1];
    s.finish();
}

void read_angle_grid(Section s, AngleGridConfig &g)
{
    s.number("start_deg", g.start_deg);
    s.number("stop_deg", g.stop_deg);
    s.number("step_deg", g.step_deg);
    s.finish();
}

void read_fading(Section s, FadingConfig &f)
{
    s.count("num_taps", f.num_taps);
    std::string profile = profile_name(f.profile);
    s.text("power_delay_profile", profile);
    if (profile == "uniform")
        f.profile = channel::PowerDelayProfile::uniform;
    else if (profile == "exponential")
        f.profile = channel::PowerDelayProfile::exponential;
    else
        throw ConfigError("field '" + s.field("power_delay_profile") + "': expected 'uniform' or 'exponential'");
    s.number("decay_db_per_tap", f.decay_db_per_tap);
    if (const auto *v = s.find("scenarios")) {
        if (!v->is_array())
            throw ConfigError("field '" + s.field("scenarios") + "': expected an array");
        f.scenarios.clear();
        for (std::size_t i = 0; i < v->size(); ++i) {
            Section e((*v)[i], s.field("scenarios") + "[" + std::to_string(i) + "]");
            FadingScenario sc;
            e.count("num_antennas", sc.num_antennas);
            e.count("num_users", sc.num_users);
            e.finish();
            f.scenarios.push_back(sc);
        }
    }
    if (const auto *v = s.find("ccdf_thresholds_db")) {
        Section t(*v, s.field("ccdf_thresholds_db"));
        t.number("start", f.threshold_start_db);
        t.number("stop", f.threshold_stop_db);
        t.number("step", f.threshold_step_db);
        t.finish();
    }
    s.finish();
}

void read_scatter(Section s, ScatterConfig &c)
{
    s.count("num_scatterers", c.num_scatterers);
    s.count("grid_points", c.grid_points);
    if (const auto *v = s.find("region")) {
        Section r(*v, s.field("region"));
        r.number("x_min", c.region.x_min);
        r.number("x_max", c.region.x_max);
        r.number("y_min", c.region.y_min);
        r.number("y_max", c.region.y_max);
        r.finish();
    }
    s.finish();
}

void require(bool ok, const std::string &field, const std::string &what)
{
    if (!ok)
        throw ConfigError("field '" + field + "': " + what);
}

bool finite_positive(double v) { return std::isfinite(v) && v > 0.0; }

} // namespace

void ExperimentConfig::validate() const
{
    require(schema_version == 1, "schema_version", "only version 1 is supported");
    require(!tag.empty(), "tag", "must not be empty");
    require(threads >= 1, "threads", "must be at least 1");
    require(num_realizations >= 1, "num_realizations", "must be at least 1");

    require(finite_positive(waveform.baud_rate), "waveform.baud_rate", "must be positive");
    require(waveform.rolloff >= 0.0 && waveform.rolloff <= 1.0, "waveform.rolloff", "must lie in [0, 1]");
    require(waveform.oversampling >= 1, "waveform.oversampling", "must be at least 1");
    require(waveform.span_symbols >= 1, "waveform.span_symbols", "must be at least 1");
    require(waveform.num_symbols >= 1, "waveform.num_symbols", "must be at least 1");
    // Allocated band plus both adjacent bands must fit below Nyquist.
    require(3.0 * (1.0 + waveform.rolloff) < static_cast<double>(waveform.oversampling), "waveform.oversampling",
            "too small to contain the allocated and both adjacent bands");

    require(array.num_antennas >= 1, "array.num_antennas", "must be at least 1");
    require(finite_positive(array.spacing_wavelengths), "array.spacing_wavelengths", "must be positive");
    require(finite_positive(array.carrier_frequency), "array.carrier_frequency", "must be positive");

    require(std::isfinite(frontend.a3_over_a1.real()) && std::isfinite(frontend.a3_over_a1.imag()),
            "frontend.a3_over_a1", "must be finite");
    require(std::isfinite(frontend.target_aclr_db), "frontend.target_aclr_db", "must be finite");
    require(!frontend.siso_target_aclr_db || std::isfinite(*frontend.siso_target_aclr_db),
            "frontend.siso_target_aclr_db", "must be finite");

    require(users.count >= 1, "users.count", "must be at least 1");
    require(users.angles_deg.empty() || users.angles_deg.size() == users.count, "users.angles_deg",
            "must list one angle per user");
    require(users.path_gains.empty() || users.path_gains.size() == users.count, "users.path_gains",
            "must list one gain per user");
    for (double g : users.path_gains)
        require(finite_positive(g), "users.path_gains", "gains must be positive");
    require(users.angle_min_deg < users.angle_max_deg, "users.angle_range_deg", "min must be below max");

    require(finite_positive(angle_grid.step_deg), "angle_grid.step_deg", "must be positive");
    require(angle_grid.start_deg <= angle_grid.stop_deg, "angle_grid", "start must not exceed stop");

    require(fading.num_taps >= 1, "fading.num_taps", "must be at least 1");
    require(std::isfinite(fading.decay_db_per_tap) && fading.decay_db_per_tap >= 0.0, "fading.decay_db_per_tap",
            "must be nonnegative");
    require(finite_positive(fading.threshold_step_db), "fading.ccdf_thresholds_db.step", "must be positive");
    require(fading.threshold_start_db <= fading.threshold_stop_db, "fading.ccdf_thresholds_db",
            "start must not exceed stop");

    require(scatter.num_scatterers >= 1, "scatter.num_scatterers", "must be at least 1");
    require(scatter.grid_points >= 1, "scatter.grid_points", "must be at least 1");
    require(scatter.region.x_max > scatter.region.x_min && scatter.region.y_max > scatter.region.y_min,
            "scatter.region", "must be nondegenerate");

    switch (experiment) {
    case ExperimentId::los_pattern:
        require(users.count <= array.num_antennas, "users.count", "must not exceed array.num_antennas");
        break;
    case ExperimentId::fading_ccdf:
        require(!fading.scenarios.empty(), "fading.scenarios", "must not be empty");
        for (std::size_t i = 0; i < fading.scenarios.size(); ++i) {
            const auto &sc = fading.scenarios[i];
            const auto f = "fading.scenarios[" + std::to_string(i) + "]";
            require(sc.num_antennas >= 1 && sc.num_users >= 1, f, "counts must be at least 1");
            require(sc.num_users <= sc.num_antennas, f, "num_users must not exceed num_antennas");
        }
        require(num_realizations >= 1000, "num_realizations", "must be at least 1000 for fading-ccdf");
        break;
    case ExperimentId::scatter_map:
        require(users.count <= array.num_antennas, "users.count", "must not exceed array.num_antennas");
        require(users.count <= scatter.grid_points * scatter.grid_points, "users.count",
                "must not exceed the number of grid cells");
        break;
    case ExperimentId::psd_compare:
        require(users.count <= array.num_antennas, "users.count", "must not exceed array.num_antennas");
        break;
    }
}

ExperimentConfig default_config(ExperimentId experiment, Profile profile)
{
    ExperimentConfig c;
    c.experiment = experiment;
    const bool paper = profile == Profile::paper;
    switch (experiment) {
    case ExperimentId::los_pattern:
        c.array.num_antennas = paper ? 300 : 64;
        c.users.count = 1;
        c.waveform.num_symbols = 4096;
        c.num_realizations = 1;
        break;
    case ExperimentId::fading_ccdf:
        c.waveform.num_symbols = 512;
        c.num_realizations = paper ? 100000 : 10000;
        break;
    case ExperimentId::scatter_map:
        c.array.num_antennas = 100;
        c.users.count = 3;
        c.waveform.num_symbols = 512;
        c.num_realizations = 1;
        break;
    case ExperimentId::psd_compare:
        c.array.num_antennas = 100;
        c.users.count = 10;
        c.waveform.num_symbols = 512;
        c.num_realizations = paper ? 2000 : 200;
        break;
    }
    return c;
}

ExperimentConfig parse_config(const json &doc, ExperimentId experiment, Profile profile)
{
    ExperimentConfig c = default_config(experiment, profile);
    Section root(doc, "");

    if (const auto *v = root.find("schema_version")) {
        if (!v->is_number_integer())
            throw ConfigError("field 'schema_version': expected an integer");
        c.schema_version = v->get<int>();
    } else {
        throw ConfigError("field 'schema_version': required");
    }
    if (c.schema_version != 1)
        throw ConfigError("field 'schema_version': only version 1 is supported");

    std::string name = to_string(experiment);
    root.text("experiment", name);
    if (parse_experiment_id(name) != experiment)
        throw ConfigError("field 'experiment': config is for '" + name + "', not '" + to_string(experiment) + "'");

    root.text("tag", c.tag);
    if (const auto *v = root.find("seed")) {
        if (!v->is_number_unsigned() && !(v->is_number_integer() && v->get<std::int64_t>() >= 0))
            throw ConfigError("field 'seed': expected an unsigned 64-bit integer");
        c.seed = v->get<std::uint64_t>();
    }
    root.text("output_dir", c.output_dir);
    root.count("threads", c.threads);
    root.count("num_realizations", c.num_realizations);

    if (const auto *v = root.find("waveform"))
        read_waveform(Section(*v, "waveform"), c.waveform);
    if (const auto *v = root.find("array"))
        read_array(Section(*v, "array"), c.array);
    if (const auto *v = root.find("frontend"))
        read_frontend(Section(*v, "frontend"), c.frontend);
    if (const auto *v = root.find("users"))
        read_users(Section(*v, "users"), c.users);
    if (const auto *v = root.find("angle_grid"))
        read_angle_grid(Section(*v, "angle_grid"), c.angle_grid);
    if (const auto *v = root.find("fading"))
        read_fading(Section(*v, "fading"), c.fading);
    if (const auto *v = root.find("scatter"))
        read_scatter(Section(*v, "scatter"), c.scatter);
    root.finish();

    c.validate();
    return c;
}

ExperimentConfig load_config(const std::filesystem::path &path, ExperimentId experiment, Profile profile)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file '" + path.string() + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error &e) {
        throw ConfigError("config file '" + path.string() + "': " + e.what());
    }
    return parse_config(doc, experiment, profile);
}

json to_json(const ExperimentConfig &c)
{
    json scenarios = json::array();
    for (const auto &s : c.fading.scenarios)
        scenarios.push_back({{"num_antennas", s.num_antennas}, {"num_users", s.num_users}});

    json frontend = {{"a3_over_a1", {c.frontend.a3_over_a1.real(), c.frontend.a3_over_a1.imag()}},
                     {"target_aclr_db", c.frontend.target_aclr_db}};
    frontend["siso_target_aclr_db"] = c.frontend.siso_target_aclr_db ? json(*c.frontend.siso_target_aclr_db) : json();

    return {
        {"schema_version", c.schema_version},
        {"experiment", to_string(c.experiment)},
        {"tag", c.tag},
        {"seed", c.seed},
        {"output_dir", c.output_dir},
        {"threads", c.threads},
        {"num_realizations", c.num_realizations},
        {"waveform",
         {{"baud_rate", c.waveform.baud_rate},
          {"rolloff", c.waveform.rolloff},
          {"oversampling", c.waveform.oversampling},
          {"span_symbols", c.waveform.span_symbols},
          {"num_symbols", c.waveform.num_symbols},
          {"alphabet", alphabet_name(c.waveform.alphabet)}}},
        {"array",
         {{"num_antennas", c.array.num_antennas},
          {"spacing_wavelengths", c.array.spacing_wavelengths},
          {"carrier_frequency", c.array.carrier_frequency}}},
        {"frontend", frontend},
        {"users",
         {{"count", c.users.count},
          {"allocation", allocation_name(c.users.allocation)},
          {"angles_deg", c.users.angles_deg},
          {"path_gains", c.users.path_gains},
          {"angle_range_deg", {c.users.angle_min_deg, c.users.angle_max_deg}}}},
        {"angle_grid",
         {{"start_deg", c.angle_grid.start_deg}, {"stop_deg", c.angle_grid.stop_deg}, {"step_deg", c.angle_grid.step_deg}}},
        {"fading",
         {{"num_taps", c.fading.num_taps},
          {"power_delay_profile", profile_name(c.fading.profile)},
          {"decay_db_per_tap", c.fading.decay_db_per_tap},
          {"scenarios", scenarios},
          {"ccdf_thresholds_db",
           {{"start", c.fading.threshold_start_db},
            {"stop", c.fading.threshold_stop_db},
            {"step", c.fading.threshold_step_db}}}}},
        {"scatter",
         {{"num_scatterers", c.scatter.num_scatterers},
          {"grid_points", c.scatter.grid_points},
          {"region",
           {{"x_min", c.scatter.region.x_min},
            {"x_max", c.scatter.region.x_max},
            {"y_min", c.scatter.region.y_min},
            {"y_max", c.scatter.region.y_max}}}}},
    };
}

} // namespace oobsim::experiments
