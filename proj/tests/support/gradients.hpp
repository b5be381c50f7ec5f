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

// Shared gradient-check helpers for the unit tests and the acceptance run.

#include "csisr/gradcheck.hpp"
#include "csisr/networks.hpp"

#include <string>
#include <vector>

namespace csisr::testing
{

autograd::Tensor random_tensor(autograd::Shape shape, std::uint64_t seed, bool requires_grad = true, float lo = -1.0f,
                               float hi = 1.0f);

// Values bounded away from zero so relu and l1 stay differentiable under the probe step.
autograd::Tensor away_from_zero(autograd::Shape shape, std::uint64_t seed);

struct GradientStats
{
    double error = 0.0;  // worst relative error
    std::size_t checked = 0;
    std::size_t skipped = 0;

    void merge(const autograd::GradCheckResult &r)
    {
        error = std::max(error, r.max_relative_error);
        checked += r.checked;
        skipped += r.skipped;
    }
};

// Float autograd against central differences (h = 1e-3) of the same
// expression evaluated in double, for every argument in turn.
template <typename Expr>
GradientStats gradient_stats(Expr expr, const std::vector<autograd::Tensor> &args)
{
    using namespace autograd;
    GradientStats stats;
    for (std::size_t i = 0; i < args.size(); ++i)
    {
        std::vector<Tensor> f;
        std::vector<Tensor64> d;
        for (std::size_t j = 0; j < args.size(); ++j)
        {
            f.push_back(args[j].clone());
            f.back().set_requires_grad(j == i);
            d.push_back(tensor_cast<double>(args[j], j == i));
        }
        const auto r = finite_diff_check([&](Tape &t) { return expr(t, f); }, f[i],
                                         [&](Tape64 &t) { return expr(t, d); }, d[i]);
        stats.merge(r);
    }
    return stats;
}

template <typename Expr>
double gradient_error(Expr expr, const std::vector<autograd::Tensor> &args)
{
    return gradient_stats(expr, args).error;
}

// The same comparison through a whole network, for the input and every
// parameter tensor. Biases are randomised first to keep pre-activations off
// the relu kink.
GradientStats composite_stats(const sr::SrModel &net, const autograd::Shape &shape, std::uint64_t seed);

inline double composite_error(const sr::SrModel &net, const autograd::Shape &shape, std::uint64_t seed)
{
    return composite_stats(net, shape, seed).error;
}

struct ConvShape
{
    std::size_t b, cin, h, w, cout, k;
};

inline const std::vector<ConvShape> kConvShapes = {
    {1, 1, 5, 5, 1, 3}, {2, 3, 6, 4, 2, 3}, {1, 2, 7, 7, 3, 5}, {2, 4, 3, 5, 2, 1}};

struct GradientCase
{
    std::string name;
    autograd::Shape shape;
    GradientStats stats;
};

// Every differentiable operation on at least three shapes, then the SR-CNN
// and EDSR composites on three input shapes each.
std::vector<GradientCase> gradient_suite();

} // namespace csisr::testing
