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

#include "csisr/interpolation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace csisr
{

namespace
{

using cd = std::complex<double>;

void require_lattice(const EstimatedPilotGrid &est)
{
    if (est.freq_count() == 0 || est.time_count() == 0)
        throw std::invalid_argument("interpolation: empty pilot grid");
    const auto &d = est.grid_dims;
    est.pattern.validate(d.n_sc, d.n_s);
    if (est.freq_count() != est.pattern.freq_count(d.n_sc) || est.time_count() != est.pattern.time_count(d.n_s) ||
        est.values.dims().n_r != d.n_r || est.values.dims().n_t != d.n_t)
        throw std::invalid_argument("interpolation: pilot grid does not match its pattern");
}

AxisCell freq_cell(const EstimatedPilotGrid &est, std::size_t i) noexcept
{
    return locate_on_axis(i, est.pattern.freq_offset, est.pattern.freq_stride, est.freq_count());
}

AxisCell time_cell(const EstimatedPilotGrid &est, std::size_t t) noexcept
{
    return locate_on_axis(t, est.pattern.time_offset, est.pattern.time_stride, est.time_count());
}

void copy_pilots(const EstimatedPilotGrid &est, GridEstimate &out)
{
    for (std::size_t u = 0; u < est.freq_count(); ++u)
        for (std::size_t v = 0; v < est.time_count(); ++v)
        {
            auto src = est.values.matrix(u, v);
            auto dst = out.matrix(est.pattern.freq_index(u), est.pattern.time_index(v));
            std::copy(src.begin(), src.end(), dst.begin());
        }
}

GridEstimate blank_output(const EstimatedPilotGrid &est)
{
    return GridEstimate(est.grid_dims, est.values.frame_id());
}

struct CatmullRom
{
    std::array<std::size_t, 4> index{};
    std::array<double, 4> weight{};
};

CatmullRom catmull_rom(std::size_t position, std::size_t offset, std::size_t stride, std::size_t count) noexcept
{
    CatmullRom cr;
    const double rel = (static_cast<double>(position) - static_cast<double>(offset)) / static_cast<double>(stride);
    const double u = std::clamp(rel, 0.0, static_cast<double>(count - 1));
    auto k = static_cast<std::size_t>(std::floor(u));
    if (k >= count - 1)
        k = count - 1;
    const double t = u - static_cast<double>(k);
    const auto last = static_cast<long long>(count) - 1;
    for (int m = 0; m < 4; ++m)
    {
        const long long idx = std::clamp(static_cast<long long>(k) + m - 1, 0LL, last);
        cr.index[static_cast<std::size_t>(m)] = static_cast<std::size_t>(idx);
    }
    cr.weight[0] = ((-t + 2.0) * t - 1.0) * t / 2.0;
    cr.weight[1] = ((3.0 * t - 5.0) * t * t + 2.0) / 2.0;
    cr.weight[2] = ((-3.0 * t + 4.0) * t + 1.0) * t / 2.0;
    cr.weight[3] = (t - 1.0) * t * t / 2.0;
    return cr;
}

} // namespace

std::string_view to_string(InterpMode mode) noexcept
{
    switch (mode)
    {
    case InterpMode::PaperLinear: return "paper_linear";
    case InterpMode::PaperGaussian: return "paper_gaussian";
    case InterpMode::StandardBilinear: return "bilinear";
    case InterpMode::StandardBicubic: return "bicubic";
    }
    return "unknown";
}

InterpMode parse_interp_mode(std::string_view name)
{
    if (name == "paper_linear")
        return InterpMode::PaperLinear;
    if (name == "paper_gaussian")
        return InterpMode::PaperGaussian;
    if (name == "bilinear")
        return InterpMode::StandardBilinear;
    if (name == "bicubic")
        return InterpMode::StandardBicubic;
    throw std::invalid_argument("unknown interpolation mode '" + std::string(name) +
                                "' (expected paper_linear|paper_gaussian|bilinear|bicubic)");
}

AxisCell locate_on_axis(std::size_t index, std::size_t offset, std::size_t stride, std::size_t count) noexcept
{
    if (count <= 1)
        return {};
    const long long rel = static_cast<long long>(index) - static_cast<long long>(offset);
    std::size_t first = rel < 0 ? 0 : static_cast<std::size_t>(rel) / stride;
    first = std::min(first, count - 2);
    const double coeff =
        static_cast<double>(rel - static_cast<long long>(first * stride)) / static_cast<double>(stride);
    return {first, first + 1, std::clamp(coeff, 0.0, 1.0)};
}

std::size_t nearest_lattice_index(long long position, std::size_t offset, std::size_t stride,
                                  std::size_t count) noexcept
{
    const double rel = static_cast<double>(position - static_cast<long long>(offset)) / static_cast<double>(stride);
    const long long k = std::llround(rel);
    return static_cast<std::size_t>(std::clamp(k, 0LL, static_cast<long long>(count) - 1));
}

GridEstimate linear_interpolate(const EstimatedPilotGrid &est, InterpMode mode)
{
    if (mode != InterpMode::PaperLinear && mode != InterpMode::StandardBilinear)
        throw std::invalid_argument("linear_interpolate: mode must be paper_linear or bilinear");
    require_lattice(est);
    const auto &d = est.grid_dims;
    const auto pairs = d.antenna_pairs();
    auto out = blank_output(est);

    for (std::size_t i = 0; i < d.n_sc; ++i)
    {
        const auto fc = freq_cell(est, i);
        const double alpha = fc.coeff;
        for (std::size_t t = 0; t < d.n_s; ++t)
        {
            const auto tc = time_cell(est, t);
            const double beta = tc.coeff;
            auto dst = out.matrix(i, t);
            const auto h11 = est.values.matrix(fc.first, tc.first);
            const auto h22 = est.values.matrix(fc.second, tc.second);
            if (mode == InterpMode::PaperLinear)
            {
                const double w1 = (1.0 - alpha) * (1.0 - beta);
                const double w2 = alpha * beta;
                for (std::size_t k = 0; k < pairs; ++k)
                    dst[k] = w1 * h11[k] + w2 * h22[k];
            }
            else
            {
                const auto h21 = est.values.matrix(fc.second, tc.first);
                const auto h12 = est.values.matrix(fc.first, tc.second);
                const double w11 = (1.0 - alpha) * (1.0 - beta);
                const double w21 = alpha * (1.0 - beta);
                const double w12 = (1.0 - alpha) * beta;
                const double w22 = alpha * beta;
                for (std::size_t k = 0; k < pairs; ++k)
                    dst[k] = w11 * h11[k] + w21 * h21[k] + w12 * h12[k] + w22 * h22[k];
            }
        }
    }
    copy_pilots(est, out);
    return out;
}

GridEstimate gaussian_interpolate(const EstimatedPilotGrid &est, InterpMode mode)
{
    if (mode != InterpMode::PaperGaussian && mode != InterpMode::StandardBicubic)
        throw std::invalid_argument("gaussian_interpolate: mode must be paper_gaussian or bicubic");
    require_lattice(est);
    const auto &d = est.grid_dims;
    const auto &p = est.pattern;
    const auto pairs = d.antenna_pairs();
    auto out = blank_output(est);

    if (mode == InterpMode::PaperGaussian)
    {
        for (std::size_t i = 0; i < d.n_sc; ++i)
        {
            const auto fc = freq_cell(est, i);
            const double alpha = fc.coeff;
            const auto i1 = static_cast<long long>(p.freq_index(fc.first));
            const auto i2 = static_cast<long long>(p.freq_index(fc.second));
            const auto u_minus = nearest_lattice_index(2 * i1 - i2, p.freq_offset, p.freq_stride, est.freq_count());
            const auto u_plus = nearest_lattice_index(2 * i1 + i2, p.freq_offset, p.freq_stride, est.freq_count());
            for (std::size_t t = 0; t < d.n_s; ++t)
            {
                const auto tc = time_cell(est, t);
                const double beta = tc.coeff;
                const auto t1 = static_cast<long long>(p.time_index(tc.first));
                const auto t2 = static_cast<long long>(p.time_index(tc.second));
                const auto v_minus =
                    nearest_lattice_index(2 * t1 - t2, p.time_offset, p.time_stride, est.time_count());
                const auto v_plus = nearest_lattice_index(2 * t1 + t2, p.time_offset, p.time_stride, est.time_count());

                const double c_minus = 0.25 * (alpha * alpha - alpha) * (beta * beta - beta);
                const double c_center = (1.0 - alpha * alpha) * (1.0 - beta * beta);
                const double c_plus = 0.25 * (alpha * alpha + alpha) * (beta * beta + beta);
                const auto h_minus = est.values.matrix(u_minus, v_minus);
                const auto h_center = est.values.matrix(fc.first, tc.first);
                const auto h_plus = est.values.matrix(u_plus, v_plus);
                auto dst = out.matrix(i, t);
                for (std::size_t k = 0; k < pairs; ++k)
                    dst[k] = c_minus * h_minus[k] + c_center * h_center[k] + c_plus * h_plus[k];
            }
        }
    }
    else
    {
        std::vector<CatmullRom> rows(d.n_sc);
        for (std::size_t i = 0; i < d.n_sc; ++i)
            rows[i] = catmull_rom(i, p.freq_offset, p.freq_stride, est.freq_count());
        std::vector<CatmullRom> cols(d.n_s);
        for (std::size_t t = 0; t < d.n_s; ++t)
            cols[t] = catmull_rom(t, p.time_offset, p.time_stride, est.time_count());

        for (std::size_t i = 0; i < d.n_sc; ++i)
            for (std::size_t t = 0; t < d.n_s; ++t)
            {
                auto dst = out.matrix(i, t);
                for (std::size_t k = 0; k < pairs; ++k)
                {
                    cd acc{0.0, 0.0};
                    for (std::size_t m = 0; m < 4; ++m)
                    {
                        cd row{0.0, 0.0};
                        for (std::size_t n = 0; n < 4; ++n)
                            row += cols[t].weight[n] * est.values.matrix(rows[i].index[m], cols[t].index[n])[k];
                        acc += rows[i].weight[m] * row;
                    }
                    dst[k] = acc;
                }
            }
    }
    copy_pilots(est, out);
    return out;
}

GridEstimate interpolate(const EstimatedPilotGrid &est, InterpMode mode)
{
    switch (mode)
    {
    case InterpMode::PaperLinear:
    case InterpMode::StandardBilinear: return linear_interpolate(est, mode);
    case InterpMode::PaperGaussian:
    case InterpMode::StandardBicubic: return gaussian_interpolate(est, mode);
    }
    throw std::invalid_argument("interpolate: unknown mode");
}

} // namespace csisr
