#pragma once

#include <charconv>
#include <cmath>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "gala/errors.hpp"

namespace gala::csv {

inline std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(',', start);
        out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

inline bool try_parse_real(std::string_view field, double& value) {
    field = trim(field);
    if (!field.empty() && field.front() == '+') field.remove_prefix(1);
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    return !field.empty() && ec == std::errc() && ptr == field.data() + field.size();
}

inline std::size_t parse_label(std::string_view field, std::size_t line) {
    field = trim(field);
    std::size_t value = 0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (field.empty() || ec != std::errc() || ptr != field.data() + field.size())
        throw ParseError("invalid label '" + std::string(field) + "'", line);
    return value;
}

inline double parse_real(std::string_view field, std::size_t line) {
    double value = 0.0;
    if (!try_parse_real(field, value))
        throw ParseError("non-numeric field '" + std::string(trim(field)) + "'", line);
    if (!std::isfinite(value)) throw ParseError("non-finite field '" + std::string(trim(field)) + "'", line);
    return value;
}

}  // namespace gala::csv
