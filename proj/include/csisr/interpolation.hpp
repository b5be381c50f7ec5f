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

// Expansion of lattice CSI to the full resource block.
//
// PaperLinear and PaperGaussian evaluate the two-corner and three-point
// diagonal formulas exactly as written, including their non-normalized
// weights. StandardBilinear and StandardBicubic (Catmull-Rom) are the
// conventional separable interpolators. Every mode treats each antenna pair
// as an independent complex image and returns pilot positions unchanged.

#include "csisr/pilots.hpp"

#include <string_view>

namespace csisr
{

enum class InterpMode
{
    PaperLinear,
    PaperGaussian,
    StandardBilinear,
    StandardBicubic,
};

std::string_view to_string(InterpMode mode) noexcept;
InterpMode parse_interp_mode(std::string_view name);

// Position of a query along one axis relative to its enclosing lattice cell.
// first/second are lattice indices (not grid indices); coeff is the
// normalized distance from first, clamped to [0, 1] outside the lattice.
struct AxisCell
{
    std::size_t first = 0;
    std::size_t second = 0;
    double coeff = 0.0;
};

AxisCell locate_on_axis(std::size_t index, std::size_t offset, std::size_t stride, std::size_t count) noexcept;

// Lattice index nearest to grid position `position`, clamped to the lattice.
std::size_t nearest_lattice_index(long long position, std::size_t offset, std::size_t stride,
                                  std::size_t count) noexcept;

// mode must be PaperLinear or StandardBilinear.
GridEstimate linear_interpolate(const EstimatedPilotGrid &est, InterpMode mode);

// mode must be PaperGaussian or StandardBicubic.
GridEstimate gaussian_interpolate(const EstimatedPilotGrid &est, InterpMode mode);

// Dispatches to one of the two families above.
GridEstimate interpolate(const EstimatedPilotGrid &est, InterpMode mode);

} // namespace csisr
