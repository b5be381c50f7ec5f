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

// Plain-loop reference implementations, written independently of the
// library, shared by the unit tests and the acceptance run.

#include "csisr/interpolation.hpp"
#include "csisr/rng.hpp"

#include <cmath>
#include <complex>
#include <cstdlib>
#include <random>
#include <vector>

namespace csisr::testing
{

inline EstimatedPilotGrid empty_lattice(GridDims grid, PilotPattern pattern)
{
    EstimatedPilotGrid est;
    est.pattern = pattern;
    est.grid_dims = grid;
    est.values = GridEstimate({pattern.freq_count(grid.n_sc), pattern.time_count(grid.n_s), grid.n_r, grid.n_t});
    return est;
}

inline EstimatedPilotGrid random_lattice(GridDims grid, PilotPattern pattern, std::uint64_t seed)
{
    auto est = empty_lattice(grid, pattern);
    Rng rng(seed);
    for (auto &v : est.values.values())
        v = complex_gaussian(rng);
    return est;
}

inline GridEstimate random_grid(GridDims d, std::uint64_t seed, double sd = 1.0)
{
    Rng rng(seed);
    std::normal_distribution<double> n(0.0, sd);
    GridEstimate g(d);
    for (auto &v : g.values())
        v = {n(rng), n(rng)};
    return g;
}

// Loop oracle for the two diagonal formulas, written directly from the lattice
// definition: the cell corner is the last pilot (excluding the final one) at
// or before the query, coefficients are clamped, and out-of-lattice
// neighbours snap to the nearest pilot (larger index on ties).
struct InterpOracle
{
    using cd = std::complex<double>;
    const EstimatedPilotGrid &est;

    static std::vector<long long> axis(std::size_t offset, std::size_t stride, std::size_t count)
    {
        std::vector<long long> pos;
        for (std::size_t k = 0; k < count; ++k)
            pos.push_back(static_cast<long long>(offset + k * stride));
        return pos;
    }

    static std::size_t corner(const std::vector<long long> &pos, long long q)
    {
        std::size_t k = 0;
        for (std::size_t m = 0; m + 1 < pos.size(); ++m)
            if (pos[m] <= q)
                k = m;
        return k;
    }

    static double coeff(const std::vector<long long> &pos, std::size_t k, long long q)
    {
        if (pos.size() < 2)
            return 0.0;
        const double c = static_cast<double>(q - pos[k]) / static_cast<double>(pos[k + 1] - pos[k]);
        return c < 0.0 ? 0.0 : (c > 1.0 ? 1.0 : c);
    }

    static std::size_t nearest(const std::vector<long long> &pos, long long q)
    {
        std::size_t best = 0;
        for (std::size_t m = 1; m < pos.size(); ++m)
            if (std::llabs(pos[m] - q) <= std::llabs(pos[best] - q))
                best = m;
        return best;
    }

    // mode is PaperLinear or PaperGaussian.
    GridEstimate run(InterpMode mode) const
    {
        const auto &p = est.pattern;
        const auto &d = est.grid_dims;
        const auto fp = axis(p.freq_offset, p.freq_stride, est.freq_count());
        const auto tp = axis(p.time_offset, p.time_stride, est.time_count());
        GridEstimate out(d);
        for (std::size_t i = 0; i < d.n_sc; ++i)
            for (std::size_t t = 0; t < d.n_s; ++t)
            {
                const auto u1 = corner(fp, static_cast<long long>(i));
                const auto v1 = corner(tp, static_cast<long long>(t));
                const auto u2 = std::min(u1 + 1, fp.size() - 1);
                const auto v2 = std::min(v1 + 1, tp.size() - 1);
                const double a = coeff(fp, u1, static_cast<long long>(i));
                const double b = coeff(tp, v1, static_cast<long long>(t));
                for (std::size_t k = 0; k < d.antenna_pairs(); ++k)
                {
                    const cd h1 = est.values.matrix(u1, v1)[k];
                    const cd h2 = est.values.matrix(u2, v2)[k];
                    cd value;
                    if (mode == InterpMode::PaperLinear)
                    {
                        value = (1.0 - a) * (1.0 - b) * h1 + a * b * h2;
                    }
                    else
                    {
                        const auto um = nearest(fp, 2 * fp[u1] - fp[u2]);
                        const auto vm = nearest(tp, 2 * tp[v1] - tp[v2]);
                        const auto up = nearest(fp, 2 * fp[u1] + fp[u2]);
                        const auto vp = nearest(tp, 2 * tp[v1] + tp[v2]);
                        value = 0.25 * (a * a - a) * (b * b - b) * est.values.matrix(um, vm)[k] +
                                (1.0 - a * a) * (1.0 - b * b) * h1 +
                                0.25 * (a * a + a) * (b * b + b) * est.values.matrix(up, vp)[k];
                    }
                    out.matrix(i, t)[k] = value;
                }
            }
        for (std::size_t u = 0; u < fp.size(); ++u)
            for (std::size_t v = 0; v < tp.size(); ++v)
                for (std::size_t k = 0; k < d.antenna_pairs(); ++k)
                    out.matrix(static_cast<std::size_t>(fp[u]), static_cast<std::size_t>(tp[v]))[k] =
                        est.values.matrix(u, v)[k];
        return out;
    }
};

// PSNR over the real image: both parts of every entry count as one sample.
inline double oracle_psnr(const std::vector<GridEstimate> &est, const std::vector<GridEstimate> &truth, double peak)
{
    double se = 0.0;
    double count = 0.0;
    for (std::size_t j = 0; j < truth.size(); ++j)
        for (std::size_t k = 0; k < truth[j].values().size(); ++k)
        {
            const auto e = est[j].values()[k];
            const auto t = truth[j].values()[k];
            se += (e.real() - t.real()) * (e.real() - t.real());
            se += (e.imag() - t.imag()) * (e.imag() - t.imag());
            count += 2.0;
        }
    return 10.0 * std::log10(peak * peak / (se / count));
}

inline double oracle_nmse(const std::vector<GridEstimate> &est, const std::vector<GridEstimate> &truth, bool per_frame)
{
    double acc = 0.0, num = 0.0, den = 0.0;
    for (std::size_t j = 0; j < truth.size(); ++j)
    {
        double e2 = 0.0, p2 = 0.0;
        for (std::size_t k = 0; k < truth[j].values().size(); ++k)
        {
            e2 += std::norm(est[j].values()[k] - truth[j].values()[k]);
            p2 += std::norm(truth[j].values()[k]);
        }
        acc += e2 / p2;
        num += e2;
        den += p2;
    }
    return 10.0 * std::log10(per_frame ? acc / static_cast<double>(truth.size()) : num / den);
}

} // namespace csisr::testing
