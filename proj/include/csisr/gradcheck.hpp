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

#include "csisr/tensor.hpp"

#include <cstdint>
#include <functional>

namespace csisr::autograd
{

struct GradCheckResult
{
    double max_relative_error = 0.0;
    std::size_t worst_index = 0;
    double analytic = 0.0;
    double numeric = 0.0;
    std::size_t checked = 0;
    std::size_t skipped = 0;  // probes whose interval held a kink
};

// Compares the tape gradient of fn with respect to `wrt` against central
// differences with step h.
//
// fn builds its result on the tape it is given. A scalar result is
// differentiated directly; any other result is contracted with a fixed
// random cotangent c (objective sum_k c_k out_k, accumulated in double), so
// unaffected outputs cancel exactly between the two perturbed evaluations.
//
// The relative error of a coordinate is |a - n| / max(|a|, |n|, floor) with
// floor = 1e-2 * max_k |a_k|: components far below the gradient's own scale
// are measured against that scale instead of against themselves.
//
// At most `samples` coordinates are probed (all of them when the tensor is
// smaller), chosen by `seed`.
//
// Probes whose [x - h, x + h] interval contains a kink (relu at zero, |.|
// at zero) have no meaningful central difference. Each probe also evaluates
// x +- h/2 and is skipped, and replaced by another coordinate, when
//   |(f(h) - 2f(h/2) + f0) - (f(-h) - 2f(-h/2) + f0)|   or
//   |f(-h) - 4f(-h/2) + 6f0 - 4f(h/2) + f(h)|
// exceeds 1e-4 * h * max(|n|, floor) plus a rounding allowance. Both vanish to
// third order on smooth functions, and a single slope jump inside the
// interval cannot zero both unless it sits at the interval's end, where its
// effect on the central difference vanishes too.
template <typename T>
using Objective = std::function<BasicTensor<T>(BasicTape<T> &)>;

// Central differences of fn against its autograd gradient with respect to
// `wrt`, over at most `samples` coordinates. Non-scalar outputs are reduced
// with fixed random weights in [-1, 1]. Per-coordinate error is
// |a - n| / max(|a|, |n|, 1e-2 * max|a|).
GradCheckResult finite_diff_check(const Objective<float> &fn, Tensor &wrt, double h = 1e-3, std::size_t samples = 32,
                                  std::uint64_t seed = 7);
GradCheckResult finite_diff_check(const Objective<double> &fn, Tensor64 &wrt, double h = 1e-3,
                                  std::size_t samples = 32, std::uint64_t seed = 7);

// Analytic gradient from the float engine, differences from a double
// mirror of the same function. `mirror_wrt` must hold the values of `wrt`.
GradCheckResult finite_diff_check(const Objective<float> &fn, Tensor &wrt, const Objective<double> &mirror,
                                  Tensor64 &mirror_wrt, double h = 1e-3, std::size_t samples = 32,
                                  std::uint64_t seed = 7);

} // namespace csisr::autograd
