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

// Differentiable operators. Image tensors use the [batch, channels, height,
// width] layout. Every function rejects mismatched shapes with
// std::invalid_argument.

#include "csisr/tensor.hpp"

#include <type_traits>

namespace csisr::autograd
{

// "Same" cross-correlation: stride 1, odd kernel extents, zero padding of
// (k - 1) / 2. input [B, Cin, H, W], kernel [Cout, Cin, kh, kw],
// bias [Cout] -> [B, Cout, H, W].
template <typename T>
BasicTensor<T> conv2d(BasicTape<T> &tape, const BasicTensor<T> &input, const BasicTensor<T> &kernel,
                      const BasicTensor<T> &bias);

template <typename T>
BasicTensor<T> relu(BasicTape<T> &tape, const BasicTensor<T> &input);

// [B, C*r*r, H, W] -> [B, C, r*H, r*W] with
// out[b][c][r*h + dy][r*w + dx] = in[b][c*r*r + dy*r + dx][h][w].
template <typename T>
BasicTensor<T> pixel_shuffle(BasicTape<T> &tape, const BasicTensor<T> &input, std::size_t r);

template <typename T>
BasicTensor<T> add(BasicTape<T> &tape, const BasicTensor<T> &a, const BasicTensor<T> &b);
template <typename T>
BasicTensor<T> sub(BasicTape<T> &tape, const BasicTensor<T> &a, const BasicTensor<T> &b);
template <typename T>
BasicTensor<T> scale(BasicTape<T> &tape, const BasicTensor<T> &a, std::type_identity_t<T> factor);

// Mean of squared differences over all elements.
template <typename T>
BasicTensor<T> mse_loss(BasicTape<T> &tape, const BasicTensor<T> &pred, const BasicTensor<T> &target);

// Mean of absolute differences over all elements; subgradient 0 at ties.
template <typename T>
BasicTensor<T> l1_loss(BasicTape<T> &tape, const BasicTensor<T> &pred, const BasicTensor<T> &target);

} // namespace csisr::autograd
