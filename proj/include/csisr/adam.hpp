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

#include <span>
#include <vector>

namespace csisr::autograd
{

struct AdamOptions
{
    double lr = 1e-4;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

// Moment buffers are kept in double; one entry per parameter element.
struct AdamState
{
    AdamOptions options;
    std::vector<std::vector<double>> first_moment;
    std::vector<std::vector<double>> second_moment;
    std::size_t step = 0;
};

// One bias-corrected Adam update of params using grads[k] for params[k].
// The moment buffers are created on the first call and must keep matching
// the parameter extents afterwards.
void adam_step(std::span<Tensor> params, std::span<const std::span<const float>> grads, AdamState &state);

// Convenience wrapper that reads each parameter's own gradient buffer.
class Adam
{
public:
    Adam(std::vector<Tensor> params, AdamOptions options = {});

    void step();
    void zero_grad() noexcept;

    std::size_t steps() const noexcept { return state_.step; }
    const AdamState &state() const noexcept { return state_; }
    void set_lr(double lr) noexcept { state_.options.lr = lr; }

private:
    std::vector<Tensor> params_;
    AdamState state_;
};

} // namespace csisr::autograd
