// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 oobsim authors

#pragma once

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace oobsim::csv {

// dB quantities: fixed notation, 4 decimals.
std::string format_db(double value);
// Everything else: shortest round-trippable form.
std::string format_number(double value);

// Comma-separated file with a leading '#' metadata block (the config as indented JSON) and one
// header row. Fields containing separators or quotes are quoted.
class Writer
{
  public:
    Writer(const std::filesystem::path &path, const nlohmann::json &metadata, const std::vector<std::string> &header);

    void row(const std::vector<std::string> &fields);
    void close();

    const std::filesystem::path &path() const { return path_; }

  private:
    std::filesystem::path path_;
    std::ofstream out_;
    std::size_t columns_ = 0;
};

// <dir>/<experiment>_<tag>.csv
std::filesystem::path output_path(const std::filesystem::path &dir, const std::string &experiment,
                                  const std::string &tag);

} // namespace oobsim::csv
