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

#include "csisr/gradcheck.hpp"

#include "csisr/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

namespace csisr::autograd
{

namespace
{

template <typename A, typename N>
GradCheckResult check(const Objective<A> &fn, BasicTensor<A> &wrt, const Objective<N> &mirror,
                      BasicTensor<N> &mirror_wrt, double h, std::size_t samples, std::uint64_t seed)
{
    if (!wrt.requires_grad())
        throw std::invalid_argument("finite_diff_check: tensor must require gradients");
    if (wrt.shape() != mirror_wrt.shape())
        throw std::invalid_argument("finite_diff_check: mirror tensor has shape " + to_string(mirror_wrt.shape()) +
                                    ", expected " + to_string(wrt.shape()));

    Rng rng(seed);
    std::vector<A> cotangent;
    auto objective = [&](const BasicTensor<N> &out) {
        if (out.numel() == 1)
            return static_cast<double>(out.data()[0]);
        if (out.numel() != cotangent.size())
            throw std::invalid_argument("finite_diff_check: mirror output extent differs");
        double acc = 0.0;
        for (std::size_t k = 0; k < out.numel(); ++k)
            acc += static_cast<double>(cotangent[k]) * static_cast<double>(out.data()[k]);
        return acc;
    };

    wrt.zero_grad();
    {
        BasicTape<A> tape;
        const auto out = fn(tape);
        if (out.numel() == 1)
        {
            tape.backward(out);
        }
        else
        {
            std::uniform_real_distribution<A> coeff(-1, 1);
            cotangent.resize(out.numel());
            for (auto &c : cotangent)
                c = coeff(rng);
            tape.backward(out, cotangent);
        }
    }
    const std::vector<double> analytic(wrt.grad().begin(), wrt.grad().end());
    const double scale = std::accumulate(analytic.begin(), analytic.end(), 0.0,
                                         [](double m, double g) { return std::max(m, std::abs(g)); });
    const double floor = std::max(1e-2 * scale, 1e-12);

    std::vector<std::size_t> pool(wrt.numel());
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    std::shuffle(pool.begin(), pool.end(), rng);
    std::vector<std::size_t> coords(pool.begin(), pool.begin() + std::min(samples, pool.size()));

    auto values = mirror_wrt.data();
    auto eval_at = [&](std::size_t k, double offset) {
        const N original = values[k];
        values[k] = static_cast<N>(original + offset);
        auto probe = BasicTape<N>::inference();
        const double f = objective(mirror(probe));
        values[k] = original;
        return f;
    };
    double f0 = 0.0;
    {
        auto probe = BasicTape<N>::inference();
        f0 = objective(mirror(probe));
    }
    const double eps = std::numeric_limits<N>::epsilon();

    GradCheckResult result;
    std::size_t next = coords.size();
    for (std::size_t c = 0; c < coords.size(); ++c)
    {
        const auto k = coords[c];
        const N original = values[k];
        const double f_plus = eval_at(k, h);
        const double f_minus = eval_at(k, -h);
        const double f_half_plus = eval_at(k, 0.5 * h);
        const double f_half_minus = eval_at(k, -0.5 * h);
        const double span = static_cast<double>(static_cast<N>(original + h)) -
                            static_cast<double>(static_cast<N>(original - h));
        const double numeric = (f_plus - f_minus) / span;

        const double asym = (f_plus - 2.0 * f_half_plus) - (f_minus - 2.0 * f_half_minus);
        const double fourth = f_minus - 4.0 * f_half_minus + 6.0 * f0 - 4.0 * f_half_plus + f_plus;
        const double noise = 64.0 * eps * (std::abs(f0) + std::abs(f_plus) + std::abs(f_minus));
        const double limit = 1e-4 * h * std::max(std::abs(numeric), floor) + noise;
        if (std::abs(asym) > limit || std::abs(fourth) > limit)
        {
            ++result.skipped;
            // Replace the probe while untried coordinates remain.
            if (next < wrt.numel())
                coords.push_back(pool[next++]);
            continue;
        }

        const double a = analytic[k];
        const double err = std::abs(a - numeric) / std::max({std::abs(a), std::abs(numeric), floor});
        if (err >= result.max_relative_error)
        {
            result.max_relative_error = err;
            result.worst_index = k;
            result.analytic = a;
            result.numeric = numeric;
        }
        ++result.checked;
    }
    return result;
}

} // namespace

GradCheckResult finite_diff_check(const Objective<float> &fn, Tensor &wrt, double h, std::size_t samples,
                                  std::uint64_t seed)
{
    return check(fn, wrt, fn, wrt, h, samples, seed);
}

GradCheckResult finite_diff_check(const Objective<double> &fn, Tensor64 &wrt, double h, std::size_t samples,
                                  std::uint64_t seed)
{
    return check(fn, wrt, fn, wrt, h, samples, seed);
}

GradCheckResult finite_diff_check(const Objective<float> &fn, Tensor &wrt, const Objective<double> &mirror,
                                  Tensor64 &mirror_wrt, double h, std::size_t samples, std::uint64_t seed)
{
    return check(fn, wrt, mirror, mirror_wrt, h, samples, seed);
}

} // namespace csisr::autograd
