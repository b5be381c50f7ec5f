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

#include "csisr/metrics.hpp"

#include "csisr/text.hpp"

#include <cstdio>

namespace csisr::metrics
{

std::string_view to_string(NmseAveraging averaging) noexcept
{
    return averaging == NmseAveraging::PerFrame ? "per_frame" : "aggregate";
}

NmseAveraging parse_nmse_averaging(std::string_view name)
{
    if (name == "per_frame")
        return NmseAveraging::PerFrame;
    if (name == "aggregate")
        return NmseAveraging::Aggregate;
    throw std::invalid_argument("unknown NMSE averaging '" + std::string(name) + "' (expected per_frame or aggregate)");
}

std::string format_metric(double value)
{
    if (std::isnan(value))
        return "nan";
    if (std::isinf(value))
        return value > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", value);
    return buf;
}

double parse_metric(std::string_view s)
{
    s = text::trim(s);
    if (s == "inf" || s == "+inf")
        return std::numeric_limits<double>::infinity();
    if (s == "-inf")
        return -std::numeric_limits<double>::infinity();
    if (s == "nan")
        return std::numeric_limits<double>::quiet_NaN();
    return text::parse_double(s, "metric");
}

std::string csv_header()
{
    return "method,recovery,pilots,scenario,snr_db,psnr_db,nmse_db,frames";
}

std::string to_csv_row(const MetricReport &r)
{
    return r.method + "," + r.recovery + "," + r.pilots + "," + r.scenario + "," + format_metric(r.snr_db) + "," +
           format_metric(r.psnr_db) + "," + format_metric(r.nmse_db) + "," + std::to_string(r.frames);
}

MetricReport parse_csv_row(std::string_view line)
{
    const auto f = text::split(line, ',');
    if (f.size() != 8)
        throw std::invalid_argument("report row: expected 8 fields, got " + std::to_string(f.size()) + " in '" +
                                    std::string(line) + "'");
    MetricReport r;
    r.method = f[0];
    r.recovery = f[1];
    r.pilots = f[2];
    r.scenario = f[3];
    r.snr_db = parse_metric(f[4]);
    r.psnr_db = parse_metric(f[5]);
    r.nmse_db = parse_metric(f[6]);
    r.frames = text::parse_size(f[7], "frames");
    if (r.method.empty() || r.frames == 0)
        throw std::invalid_argument("report row: empty method or zero frame count in '" + std::string(line) + "'");
    return r;
}

} // namespace csisr::metrics
