// SPDX-License-Identifier: Apache-2.0
//
// csisr - super-resolution channel estimation for MIMO-OFDM resource blocks
// Copyright (C) 2026 The csisr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

// Parsing helpers for the flat key = value text used by configs and
// checkpoint specs.

#include <charconv>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace csisr::text
{

inline std::string_view trim(std::string_view s) noexcept
{
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

inline std::vector<std::string> split(std::string_view s, char sep)
{
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true)
    {
        const auto pos = s.find(sep, start);
        parts.emplace_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos)
            break;
        start = pos + 1;
    }
    return parts;
}

inline std::uint64_t parse_u64(std::string_view s, std::string_view key)
{
    s = trim(s);
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size())
        throw std::invalid_argument(std::string(key) + ": expected a non-negative integer, got '" + std::string(s) +
                                    "'");
    return v;
}

inline std::size_t parse_size(std::string_view s, std::string_view key)
{
    return static_cast<std::size_t>(parse_u64(s, key));
}

// Accepts "inf", "+inf" and "-inf" besides ordinary decimal numbers.
inline double parse_double(std::string_view s, std::string_view key)
{
    s = trim(s);
    if (!s.empty() && s.front() == '+')
        s.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size())
        throw std::invalid_argument(std::string(key) + ": expected a number, got '" + std::string(s) + "'");
    return v;
}

// Shortest text that parses back to the same float.
inline std::string format_float(float v)
{
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

// Shortest text that parses back to the same double.
inline std::string format_double(double v)
{
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

inline std::vector<std::size_t> parse_size_list(std::string_view s, std::string_view key)
{
    std::vector<std::size_t> out;
    for (const auto &part : split(s, ','))
        out.push_back(parse_size(part, key));
    return out;
}

// "key = value" lines; blank lines and lines starting with '#' are skipped.
// Duplicate keys are rejected.
inline std::map<std::string, std::string> parse_key_values(std::string_view body, std::string_view what)
{
    std::map<std::string, std::string> out;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= body.size())
    {
        const auto end = body.find('\n', start);
        const auto raw = body.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
        ++line_no;
        const auto line = trim(raw);
        if (!line.empty() && line.front() != '#')
        {
            const auto eq = line.find('=');
            if (eq == std::string_view::npos)
                throw std::invalid_argument(std::string(what) + " line " + std::to_string(line_no) +
                                            ": expected key = value");
            std::string key(trim(line.substr(0, eq)));
            if (key.empty())
                throw std::invalid_argument(std::string(what) + " line " + std::to_string(line_no) + ": empty key");
            if (!out.emplace(key, std::string(trim(line.substr(eq + 1)))).second)
                throw std::invalid_argument(std::string(what) + ": duplicate key '" + key + "'");
        }
        if (end == std::string_view::npos)
            break;
        start = end + 1;
    }
    return out;
}

} // namespace csisr::text
