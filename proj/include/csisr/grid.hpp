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

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace csisr
{

// Extents of a resource-block CSI grid: subcarriers x slots x rx x tx.
struct GridDims
{
    std::size_t n_sc = 0;
    std::size_t n_s = 0;
    std::size_t n_r = 0;
    std::size_t n_t = 0;

    std::size_t points() const noexcept { return n_sc * n_s; }
    std::size_t antenna_pairs() const noexcept { return n_r * n_t; }
    std::size_t size() const noexcept { return points() * antenna_pairs(); }

    bool operator==(const GridDims &) const = default;
};

std::string to_string(const GridDims &dims);

// Complex CSI over a resource block, indexed [subcarrier][slot][rx][tx].
// Subcarriers are rows and slots are columns; each grid point holds an
// n_r x n_t matrix stored rx-major.
template <typename Real>
class CsiGrid
{
public:
    using value_type = std::complex<Real>;

    CsiGrid() = default;
    explicit CsiGrid(GridDims dims, std::int64_t frame_id = 0)
        : dims_(dims), frame_id_(frame_id), values_(dims.size())
    {
    }

    const GridDims &dims() const noexcept { return dims_; }
    std::int64_t frame_id() const noexcept { return frame_id_; }
    void set_frame_id(std::int64_t id) noexcept { frame_id_ = id; }

    std::size_t offset(std::size_t i, std::size_t t, std::size_t rx, std::size_t tx) const noexcept
    {
        return ((i * dims_.n_s + t) * dims_.n_r + rx) * dims_.n_t + tx;
    }

    value_type &operator()(std::size_t i, std::size_t t, std::size_t rx, std::size_t tx) noexcept
    {
        return values_[offset(i, t, rx, tx)];
    }
    const value_type &operator()(std::size_t i, std::size_t t, std::size_t rx, std::size_t tx) const noexcept
    {
        return values_[offset(i, t, rx, tx)];
    }

    // The n_r*n_t block at grid point (i, t).
    std::span<value_type> matrix(std::size_t i, std::size_t t) noexcept
    {
        return {values_.data() + offset(i, t, 0, 0), dims_.antenna_pairs()};
    }
    std::span<const value_type> matrix(std::size_t i, std::size_t t) const noexcept
    {
        return {values_.data() + offset(i, t, 0, 0), dims_.antenna_pairs()};
    }

    std::span<value_type> values() noexcept { return values_; }
    std::span<const value_type> values() const noexcept { return values_; }

    bool operator==(const CsiGrid &) const = default;

private:
    GridDims dims_{};
    std::int64_t frame_id_ = 0;
    std::vector<value_type> values_;
};

// Ground truth is held at the storage precision of the dataset format.
using ChannelGrid = CsiGrid<float>;
// Estimates are produced in double precision.
using GridEstimate = CsiGrid<double>;

template <typename To, typename From>
CsiGrid<To> grid_cast(const CsiGrid<From> &src)
{
    CsiGrid<To> out(src.dims(), src.frame_id());
    auto dst = out.values();
    auto in = src.values();
    for (std::size_t k = 0; k < in.size(); ++k)
        dst[k] = std::complex<To>(static_cast<To>(in[k].real()), static_cast<To>(in[k].imag()));
    return out;
}

template <typename Real>
void require_uniform_dims(std::span<const CsiGrid<Real>> grids, const char *what)
{
    if (grids.empty())
        throw std::invalid_argument(std::string(what) + ": empty frame sequence");
    for (const auto &g : grids)
        if (!(g.dims() == grids.front().dims()))
            throw std::invalid_argument(std::string(what) + ": mixed grid dimensions (" +
                                        to_string(g.dims()) + " vs " + to_string(grids.front().dims()) + ")");
}

} // namespace csisr
