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

// Estimation quality: squared error, PSNR over the channel-image encoding
// and NMSE in dB.

#include "csisr/grid.hpp"
#include "csisr/parallel.hpp"

#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace csisr::metrics
{

// Per-frame ratio then mean (default), or total error over total power.
enum class NmseAveraging
{
    PerFrame,
    Aggregate,
};

std::string_view to_string(NmseAveraging averaging) noexcept;
NmseAveraging parse_nmse_averaging(std::string_view name);

// Sum of |a - b|^2 over every entry, accumulated in double.
template <typename RealA, typename RealB>
double squared_error(const CsiGrid<RealA> &a, const CsiGrid<RealB> &b)
{
    if (!(a.dims() == b.dims()))
        throw std::invalid_argument("metrics: dimension mismatch " + to_string(a.dims()) + " vs " +
                                    to_string(b.dims()));
    const auto x = a.values();
    const auto y = b.values();
    double sum = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k)
    {
        const double dr = static_cast<double>(x[k].real()) - static_cast<double>(y[k].real());
        const double di = static_cast<double>(x[k].imag()) - static_cast<double>(y[k].imag());
        sum += dr * dr + di * di;
    }
    return sum;
}

template <typename Real>
double frobenius_power(const CsiGrid<Real> &g)
{
    double sum = 0.0;
    for (const auto &v : g.values())
    {
        const double re = static_cast<double>(v.real());
        const double im = static_cast<double>(v.imag());
        sum += re * re + im * im;
    }
    return sum;
}

// 10 log10(peak^2 / MSE) with MSE the mean over all real components (two
// per complex entry). Returns +inf when MSE is zero.
inline double psnr_from_mse(double mse, double peak)
{
    if (!(peak > 0.0) || !std::isfinite(peak))
        throw std::invalid_argument("psnr: peak must be finite and > 0");
    if (mse == 0.0)
        return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(peak * peak / mse);
}

namespace detail
{

template <typename RealA, typename RealB>
void require_same_length(std::span<const CsiGrid<RealA>> a, std::span<const CsiGrid<RealB>> b, const char *what)
{
    if (a.size() != b.size())
        throw std::invalid_argument(std::string(what) + ": " + std::to_string(a.size()) + " estimates vs " +
                                    std::to_string(b.size()) + " truths");
    if (a.empty())
        throw std::invalid_argument(std::string(what) + ": empty frame sequence");
}

} // namespace detail

template <typename RealA, typename RealB>
double psnr_db(const CsiGrid<RealA> &estimate, const CsiGrid<RealB> &truth, double peak)
{
    const double mse = squared_error(estimate, truth) / static_cast<double>(2 * truth.dims().size());
    return psnr_from_mse(mse, peak);
}

// PSNR of the mean squared error pooled over all frames.
template <typename RealA, typename RealB>
double psnr_db(std::span<const CsiGrid<RealA>> estimates, std::span<const CsiGrid<RealB>> truths, double peak)
{
    detail::require_same_length(estimates, truths, "psnr");
    std::vector<double> err(truths.size());
    parallel_for(truths.size(), [&](std::size_t j) { err[j] = squared_error(estimates[j], truths[j]); });
    double total = 0.0;
    double count = 0.0;
    for (std::size_t j = 0; j < truths.size(); ++j)
    {
        total += err[j];
        count += static_cast<double>(2 * truths[j].dims().size());
    }
    return psnr_from_mse(total / count, peak);
}

// Throws when a truth frame carries zero power. Perfect estimates give -inf.
template <typename RealA, typename RealB>
double nmse_db(std::span<const CsiGrid<RealA>> estimates, std::span<const CsiGrid<RealB>> truths,
               NmseAveraging averaging = NmseAveraging::PerFrame)
{
    detail::require_same_length(estimates, truths, "nmse");
    std::vector<double> err(truths.size());
    std::vector<double> power(truths.size());
    parallel_for(truths.size(), [&](std::size_t j) {
        err[j] = squared_error(estimates[j], truths[j]);
        power[j] = frobenius_power(truths[j]);
    });
    double num = 0.0;
    double den = 0.0;
    for (std::size_t j = 0; j < truths.size(); ++j)
    {
        if (!(power[j] > 0.0))
            throw std::invalid_argument("nmse: truth frame " + std::to_string(j) + " has zero power");
        if (averaging == NmseAveraging::PerFrame)
            num += err[j] / power[j];
        else
        {
            num += err[j];
            den += power[j];
        }
    }
    const double ratio = averaging == NmseAveraging::PerFrame ? num / static_cast<double>(truths.size()) : num / den;
    return 10.0 * std::log10(ratio);
}

template <typename RealA, typename RealB>
double nmse_db(const CsiGrid<RealA> &estimate, const CsiGrid<RealB> &truth)
{
    return nmse_db(std::span(&estimate, 1), std::span(&truth, 1));
}

// One evaluated configuration.
struct MetricReport
{
    std::string method;
    std::string recovery;
    std::string pilots;    // e.g. "16x16"
    std::string scenario;  // LOS or NLOS
    double snr_db = 0.0;
    double psnr_db = 0.0;
    double nmse_db = 0.0;
    std::size_t frames = 0;

    bool operator==(const MetricReport &) const = default;
};

// "inf", "-inf", "nan" or fixed notation with six decimals.
std::string format_metric(double value);
// Inverse of format_metric; also accepts any decimal number.
double parse_metric(std::string_view text);

std::string csv_header();
std::string to_csv_row(const MetricReport &report);
// Throws std::invalid_argument on a malformed row.
MetricReport parse_csv_row(std::string_view line);

} // namespace csisr::metrics
