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

#include "csisr/adam.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace csisr::autograd
{

void adam_step(std::span<Tensor> params, std::span<const std::span<const float>> grads, AdamState &state)
{
    if (params.size() != grads.size())
        throw std::invalid_argument("adam_step: " + std::to_string(params.size()) + " parameters but " +
                                    std::to_string(grads.size()) + " gradients");
    if (state.first_moment.empty() && state.step == 0)
    {
        for (const auto &p : params)
        {
            state.first_moment.emplace_back(p.numel(), 0.0);
            state.second_moment.emplace_back(p.numel(), 0.0);
        }
    }
    if (state.first_moment.size() != params.size())
        throw std::invalid_argument("adam_step: optimizer state tracks a different parameter count");
    for (std::size_t k = 0; k < params.size(); ++k)
        if (grads[k].size() != params[k].numel() || state.first_moment[k].size() != params[k].numel())
            throw std::invalid_argument("adam_step: extent mismatch for parameter " + std::to_string(k));

    ++state.step;
    const auto &o = state.options;
    const double t = static_cast<double>(state.step);
    const double correction1 = 1.0 - std::pow(o.beta1, t);
    const double correction2 = 1.0 - std::pow(o.beta2, t);
    for (std::size_t k = 0; k < params.size(); ++k)
    {
        auto values = params[k].data();
        auto &m = state.first_moment[k];
        auto &v = state.second_moment[k];
        const auto g = grads[k];
        for (std::size_t e = 0; e < values.size(); ++e)
        {
            const double ge = g[e];
            m[e] = o.beta1 * m[e] + (1.0 - o.beta1) * ge;
            v[e] = o.beta2 * v[e] + (1.0 - o.beta2) * ge * ge;
            const double m_hat = m[e] / correction1;
            const double v_hat = v[e] / correction2;
            values[e] = static_cast<float>(values[e] - o.lr * m_hat / (std::sqrt(v_hat) + o.eps));
        }
    }
}

Adam::Adam(std::vector<Tensor> params, AdamOptions options) : params_(std::move(params))
{
    state_.options = options;
    for (const auto &p : params_)
        if (!p.requires_grad())
            throw std::invalid_argument("Adam: every parameter must require gradients");
}

void Adam::step()
{
    std::vector<std::span<const float>> grads;
    grads.reserve(params_.size());
    for (const auto &p : params_)
        grads.push_back(p.grad());
    adam_step(params_, grads, state_);
}

void Adam::zero_grad() noexcept
{
    for (auto &p : params_)
        p.zero_grad();
}

} // namespace csisr::autograd
