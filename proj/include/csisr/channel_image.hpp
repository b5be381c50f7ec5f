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

// Real-valued image encoding of complex CSI grids.
//
// A batch of grids with dims (n_sc, n_s, n_r, n_t) becomes a tensor
// [B, 2 * n_r * n_t, n_sc, n_s]. Antenna pair (a, b) is taken rx-major,
// tx-minor: channel 2 * (a * n_t + b) holds the real part and the next
// channel the imaginary part. Values are divided by the dataset scale.

#include "csisr/grid.hpp"
#include "csisr/tensor.hpp"

#include <span>
#include <vector>

namespace csisr::sr
{

// Single global max-abs scale over all real and imaginary components.
struct NormalizationStats
{
    double scale = 1.0;

    template <typename Real>
    static NormalizationStats from_frames(std::span<const CsiGrid<Real>> frames);

    // Throws unless scale is finite and > 0.
    void validate() const;
};

constexpr std::size_t image_channels(std::size_t n_r, std::size_t n_t) noexcept
{
    return 2 * n_r * n_t;
}

template <typename Real>
autograd::Tensor to_channel_image(std::span<const CsiGrid<Real>> grids, const NormalizationStats &stats);

// Inverse of to_channel_image. Frame ids are 0..B-1.
template <typename Real>
std::vector<CsiGrid<Real>> from_channel_image(const autograd::Tensor &image, const NormalizationStats &stats,
                                              std::size_t n_r, std::size_t n_t);

} // namespace csisr::sr
