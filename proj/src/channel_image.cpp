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

#include "csisr/channel_image.hpp"

#include <cmath>
#include <stdexcept>

namespace csisr::sr
{

template <typename Real>
NormalizationStats NormalizationStats::from_frames(std::span<const CsiGrid<Real>> frames)
{
    double peak = 0.0;
    for (const auto &f : frames)
        for (const auto &v : f.values())
            peak = std::max({peak, std::abs(static_cast<double>(v.real())), std::abs(static_cast<double>(v.imag()))});
    NormalizationStats stats{peak > 0.0 ? peak : 1.0};
    return stats;
}

void NormalizationStats::validate() const
{
    if (!std::isfinite(scale) || scale <= 0.0)
        throw std::invalid_argument("normalization scale must be finite and > 0");
}

template <typename Real>
autograd::Tensor to_channel_image(std::span<const CsiGrid<Real>> grids, const NormalizationStats &stats)
{
    require_uniform_dims(grids, "to_channel_image");
    stats.validate();
    const auto d = grids.front().dims();
    const std::size_t channels = image_channels(d.n_r, d.n_t);
    autograd::Tensor image({grids.size(), channels, d.n_sc, d.n_s});
    auto out = image.data();
    const std::size_t plane = d.n_sc * d.n_s;
    for (std::size_t n = 0; n < grids.size(); ++n)
    {
        const auto &g = grids[n];
        float *base = out.data() + n * channels * plane;
        for (std::size_t i = 0; i < d.n_sc; ++i)
            for (std::size_t t = 0; t < d.n_s; ++t)
            {
                const auto block = g.matrix(i, t);
                for (std::size_t pair = 0; pair < block.size(); ++pair)
                {
                    const auto v = block[pair];
                    base[(2 * pair) * plane + i * d.n_s + t] =
                        static_cast<float>(static_cast<double>(v.real()) / stats.scale);
                    base[(2 * pair + 1) * plane + i * d.n_s + t] =
                        static_cast<float>(static_cast<double>(v.imag()) / stats.scale);
                }
            }
    }
    return image;
}

template <typename Real>
std::vector<CsiGrid<Real>> from_channel_image(const autograd::Tensor &image, const NormalizationStats &stats,
                                              std::size_t n_r, std::size_t n_t)
{
    stats.validate();
    if (image.rank() != 4 || image.dim(1) != image_channels(n_r, n_t))
        throw std::invalid_argument("from_channel_image: image " + autograd::to_string(image.shape()) +
                                    " does not carry " + std::to_string(image_channels(n_r, n_t)) + " channels");
    const GridDims d{image.dim(2), image.dim(3), n_r, n_t};
    const std::size_t channels = image.dim(1);
    const std::size_t plane = d.n_sc * d.n_s;
    std::vector<CsiGrid<Real>> grids;
    grids.reserve(image.dim(0));
    for (std::size_t n = 0; n < image.dim(0); ++n)
    {
        CsiGrid<Real> g(d, static_cast<std::int64_t>(n));
        const float *base = image.data().data() + n * channels * plane;
        for (std::size_t i = 0; i < d.n_sc; ++i)
            for (std::size_t t = 0; t < d.n_s; ++t)
            {
                auto block = g.matrix(i, t);
                for (std::size_t pair = 0; pair < block.size(); ++pair)
                {
                    const double re = static_cast<double>(base[(2 * pair) * plane + i * d.n_s + t]) * stats.scale;
                    const double im = static_cast<double>(base[(2 * pair + 1) * plane + i * d.n_s + t]) * stats.scale;
                    block[pair] = {static_cast<Real>(re), static_cast<Real>(im)};
                }
            }
        grids.push_back(std::move(g));
    }
    return grids;
}

template NormalizationStats NormalizationStats::from_frames<float>(std::span<const CsiGrid<float>>);
template NormalizationStats NormalizationStats::from_frames<double>(std::span<const CsiGrid<double>>);
template autograd::Tensor to_channel_image<float>(std::span<const CsiGrid<float>>, const NormalizationStats &);
template autograd::Tensor to_channel_image<double>(std::span<const CsiGrid<double>>, const NormalizationStats &);
template std::vector<CsiGrid<float>> from_channel_image<float>(const autograd::Tensor &, const NormalizationStats &,
                                                               std::size_t, std::size_t);
template std::vector<CsiGrid<double>> from_channel_image<double>(const autograd::Tensor &,
                                                                 const NormalizationStats &, std::size_t,
                                                                 std::size_t);

} // namespace csisr::sr
