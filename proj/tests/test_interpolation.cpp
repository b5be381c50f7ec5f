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

#include "csisr/interpolation.hpp"

#include "support/oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace csisr;
using namespace csisr::testing;

namespace
{

using cd = std::complex<double>;

constexpr InterpMode kModes[] = {InterpMode::PaperLinear, InterpMode::PaperGaussian, InterpMode::StandardBilinear,
                                 InterpMode::StandardBicubic};

double max_diff(const GridEstimate &a, const GridEstimate &b)
{
    double m = 0.0;
    for (std::size_t k = 0; k < a.values().size(); ++k)
        m = std::max(m, std::abs(a.values()[k] - b.values()[k]));
    return m;
}

} // namespace

TEST_CASE("mode names round trip")
{
    for (auto m : kModes)
        CHECK(parse_interp_mode(to_string(m)) == m);
    CHECK_THROWS_AS(parse_interp_mode("spline"), std::invalid_argument);
}

TEST_CASE("axis cells")
{
    const auto c = locate_on_axis(5, 0, 4, 16);
    CHECK(c.first == 1);
    CHECK(c.second == 2);
    CHECK(c.coeff == 0.25);
    CHECK(locate_on_axis(63, 0, 4, 16).coeff == 1.0);  // beyond the last pilot
    CHECK(locate_on_axis(63, 0, 4, 16).first == 14);
    CHECK(locate_on_axis(0, 1, 4, 16).coeff == 0.0);   // before the first pilot
    CHECK(nearest_lattice_index(-4, 0, 4, 16) == 0);
    CHECK(nearest_lattice_index(6, 0, 4, 16) == 2);
    CHECK(nearest_lattice_index(200, 0, 4, 16) == 15);
}

TEST_CASE("brute-force oracle equivalence on an 8x8 grid with a 3x3 lattice")
{
    const GridDims grid{8, 8, 2, 2};
    const auto pattern = PilotPattern::uniform(3);
    for (std::uint64_t seed = 1; seed <= 5; ++seed)
    {
        const auto est = random_lattice(grid, pattern, seed);
        REQUIRE(est.freq_count() == 3);
        const InterpOracle oracle{est};
        CHECK(linear_interpolate(est, InterpMode::PaperLinear) == oracle.run(InterpMode::PaperLinear));
        CHECK(gaussian_interpolate(est, InterpMode::PaperGaussian) == oracle.run(InterpMode::PaperGaussian));
    }
    // offsets and unequal strides
    const auto est = random_lattice({9, 11, 1, 2}, PilotPattern{1, 3, 2, 4}, 9);
    const InterpOracle oracle{est};
    CHECK(interpolate(est, InterpMode::PaperLinear) == oracle.run(InterpMode::PaperLinear));
    CHECK(interpolate(est, InterpMode::PaperGaussian) == oracle.run(InterpMode::PaperGaussian));
}

TEST_CASE("pilot positions pass through unchanged in every mode")
{
    const GridDims grid{8, 8, 2, 2};
    const auto est = random_lattice(grid, PilotPattern::uniform(3), 4);
    for (auto mode : kModes)
    {
        const auto out = interpolate(est, mode);
        for (std::size_t u = 0; u < 3; ++u)
            for (std::size_t v = 0; v < 3; ++v)
                for (std::size_t k = 0; k < 4; ++k)
                    CHECK(out.matrix(3 * u, 3 * v)[k] == est.values.matrix(u, v)[k]);
    }
}

TEST_CASE("hand-evaluated cell corners and midpoints")
{
    auto est = empty_lattice({3, 3, 1, 1}, PilotPattern::uniform(2));
    est.values(0, 0, 0, 0) = 4.0;
    est.values(1, 0, 0, 0) = 8.0;
    est.values(0, 1, 0, 0) = 4.0;
    est.values(1, 1, 0, 0) = 8.0;
    CHECK(linear_interpolate(est, InterpMode::PaperLinear)(1, 1, 0, 0) == cd(3.0));
    CHECK(linear_interpolate(est, InterpMode::StandardBilinear)(1, 1, 0, 0) == cd(6.0));

    // a = b = 0 gives corner 1 and the Gaussian centre term exactly
    auto wide = random_lattice({9, 9, 1, 1}, PilotPattern::uniform(4), 3);
    CHECK(linear_interpolate(wide, InterpMode::PaperLinear)(4, 4, 0, 0) == wide.values(1, 1, 0, 0));
    CHECK(gaussian_interpolate(wide, InterpMode::PaperGaussian)(4, 4, 0, 0) == wide.values(1, 1, 0, 0));
}

TEST_CASE("clamped extrapolation reaches the far corner with weight one")
{
    // 10 positions, lattice 0,4,8: positions 9 lie past the last pilot.
    auto est = random_lattice({10, 10, 1, 1}, PilotPattern::uniform(4), 8);
    const auto lin = linear_interpolate(est, InterpMode::PaperLinear);
    CHECK(lin(9, 9, 0, 0) == est.values(2, 2, 0, 0));
    // Gaussian at a = b = 1: coefficients (0, 0, 1) onto the snapped far neighbour.
    const auto gi = gaussian_interpolate(est, InterpMode::PaperGaussian);
    const auto far = nearest_lattice_index(2 * 4 + 8, 0, 4, 3);
    CHECK(gi(9, 9, 0, 0) == est.values(far, far, 0, 0));
}

TEST_CASE("constant and affine fields")
{
    const GridDims grid{13, 10, 1, 2};
    const auto pattern = PilotPattern{1, 3, 0, 2};
    auto est = empty_lattice(grid, pattern);
    for (auto &v : est.values.values())
        v = cd(1.5, -0.5);
    for (auto mode : {InterpMode::StandardBilinear, InterpMode::StandardBicubic})
        for (const auto &v : interpolate(est, mode).values())
            CHECK(std::abs(v - cd(1.5, -0.5)) < 1e-12);
    // the diagonal formulas reproduce the constant at lattice-exact cell corners
    const auto gi = interpolate(est, InterpMode::PaperGaussian);
    CHECK(std::abs(gi(4, 4, 0, 1) - cd(1.5, -0.5)) < 1e-12);

    // bilinear is exact on affine fields inside the lattice hull
    for (std::size_t u = 0; u < est.freq_count(); ++u)
        for (std::size_t v = 0; v < est.time_count(); ++v)
            for (std::size_t k = 0; k < 2; ++k)
                est.values.matrix(u, v)[k] = cd(0.5 * pattern.freq_index(u) - 2.0 * pattern.time_index(v) + 1.0, k);
    const auto bl = interpolate(est, InterpMode::StandardBilinear);
    for (std::size_t i = 1; i <= 10; ++i)
        for (std::size_t t = 0; t <= 8; ++t)
            CHECK(std::abs(bl(i, t, 0, 0) - cd(0.5 * i - 2.0 * t + 1.0, 0.0)) < 1e-6);
}

TEST_CASE("every mode is linear")
{
    const GridDims grid{16, 12, 2, 1};
    const auto pattern = PilotPattern::uniform(4);
    const auto x = random_lattice(grid, pattern, 10);
    const auto y = random_lattice(grid, pattern, 11);
    auto mix = empty_lattice(grid, pattern);
    const cd a(0.7, -1.2), b(-2.0, 0.3);
    for (std::size_t k = 0; k < mix.values.values().size(); ++k)
        mix.values.values()[k] = a * x.values.values()[k] + b * y.values.values()[k];
    for (auto mode : kModes)
    {
        const auto ix = interpolate(x, mode);
        const auto iy = interpolate(y, mode);
        GridEstimate combo(grid);
        for (std::size_t k = 0; k < combo.values().size(); ++k)
            combo.values()[k] = a * ix.values()[k] + b * iy.values()[k];
        CHECK(max_diff(interpolate(mix, mode), combo) < 1e-6);
    }
}

TEST_CASE("invalid inputs")
{
    auto est = empty_lattice({8, 8, 1, 1}, PilotPattern::uniform(4));
    CHECK_THROWS_AS(linear_interpolate(est, InterpMode::PaperGaussian), std::invalid_argument);
    CHECK_THROWS_AS(gaussian_interpolate(est, InterpMode::StandardBilinear), std::invalid_argument);
    EstimatedPilotGrid empty;
    empty.grid_dims = {8, 8, 1, 1};
    CHECK_THROWS_AS(interpolate(empty, InterpMode::PaperLinear), std::invalid_argument);
    est.values = GridEstimate({3, 2, 1, 1});
    CHECK_THROWS_AS(interpolate(est, InterpMode::StandardBicubic), std::invalid_argument);
}
