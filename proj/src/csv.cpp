// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 oobsim authors

#include "oobsim/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace oobsim::csv {
namespace {

std::string quote(const std::string &field)
{
    if (field.find_first_of(",\"\r\n") == std::string::npos)
        return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"')
            out += '"';
        out += c;
    }
    return out + "\"";
}

std::string non_finite(double value)
{
    if (std::isnan(value))
        return "nan";
    return value > 0 ? "inf" : "-inf";
}

} // namespace

std::string format_db(double value)
{
    if (!std::isfinite(value))
        return non_finite(value);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4f", value);
    std::string s = buf;
    if (s == "-0.0000")
        s = "0.0000";
    return s;
}

std::string format_number(double value)
{
    if (!std::isfinite(value))
        return non_finite(value);
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

Writer::Writer(const std::filesystem::path &path, const nlohmann::json &metadata,
               const std::vector<std::string> &header)
    : path_(path), columns_(header.size())
{
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    out_.open(path, std::ios::binary | std::ios::trunc);
    if (!out_)
        throw std::runtime_error("cannot open '" + path.string() + "' for writing");

    std::istringstream meta(metadata.dump(2));
    for (std::string line; std::getline(meta, line);)
        out_ << "# " << line << "\n";
    row(header);
}

void Writer::row(const std::vector<std::string> &fields)
{
    if (fields.size() != columns_)
        throw std::logic_error("csv row has " + std::to_string(fields.size()) + " fields, header has " +
                               std::to_string(columns_));
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i)
            out_ << ',';
        out_ << quote(fields[i]);
    }
    out_ << "\n";
    if (!out_)
        throw std::runtime_error("write to '" + path_.string() + "' failed");
}

void Writer::close()
{
    out_.close();
    if (out_.fail())
        throw std::runtime_error("closing '" + path_.string() + "' failed");
}

std::filesystem::path output_path(const std::filesystem::path &dir, const std::string &experiment,
                                  const std::string &tag)
{
    return dir / (experiment + "_" + tag + ".csv");
}

} // namespace oobsim::csv
