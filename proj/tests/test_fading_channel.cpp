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

#include "csisr/fading_channel.hpp"
#include "csisr/rng.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace csisr;

namespace
{

ChannelModelConfig small_config()
{
    ChannelModelConfig c;
    c.n_sc = 8;
    c.n_s = 4;
    c.n_r = 2;
    c.n_t = 2;
    return c;
}

} // namespace

TEST_CASE("config validation names the offending field")
{
    auto c = small_config();
    CHECK_NOTHROW(c.validate());
    c.n_sc = 0;
    CHECK_THROWS_WITH_AS(c.validate(), doctest::Contains("n_sc"), std::invalid_argument);
    c = small_config();
    c.rx_corr = 1.0;
    CHECK_THROWS_WITH_AS(c.validate(), doctest::Contains("rx_corr"), std::invalid_argument);
    c = small_config();
    c.rms_delay_spread = 0.0;
    CHECK_THROWS_WITH_AS(c.validate(), doctest::Contains("rms_delay_spread"), std::invalid_argument);
    c = small_config();
    c.rician_k_db = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("defaults")
{
    const ChannelModelConfig c;
    CHECK(c.carrier_freq == 5.3e9);
    CHECK(c.bandwidth == 20e6);
    CHECK(c.n_r == 3);
    CHECK(c.n_t == 3);
    CHECK(c.subcarrier_spacing == c.bandwidth / 64);
    CHECK(c.line_of_sight());
}

TEST_CASE("single NLOS path carries unit power")
{
    auto c = small_config();
    c.n_paths = 1;
    c.rician_k_db = kNlosKFactorDb;
    const auto set = sample_path_set(c, 5);
    REQUIRE(set.diffuse.size() == 1);
    CHECK_FALSE(set.los.has_value());
    CHECK(set.diffuse[0].power == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("K = 0 dB splits power evenly")
{
    auto c = small_config();
    c.rician_k_db = 0.0;
    const auto set = sample_path_set(c, 11);
    REQUIRE(set.los.has_value());
    CHECK(set.los->power == doctest::Approx(0.5).epsilon(1e-12));
    double diffuse = 0.0;
    for (const auto &p : set.diffuse)
        diffuse += p.power;
    CHECK(diffuse == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(set.los->delay == 0.0);
    CHECK(set.los->doppler == 0.0);
}

TEST_CASE("exponential correlation matrix")
{
    const auto r = exponential_correlation(3, 0.3);
    CHECK(r(0, 0) == 1.0);
    CHECK(r(0, 1) == doctest::Approx(0.3));
    CHECK(r(0, 2) == doctest::Approx(0.09));
    const auto root = psd_sqrt(r);
    CHECK((root * root - r).norm() < 1e-12);
}

TEST_CASE("power normalization and Doppler bound hold for every draw")
{
    auto c = small_config();
    for (double k : {6.0, 0.0, -3.0, kNlosKFactorDb})
    {
        c.rician_k_db = k;
        for (std::uint64_t seed = 0; seed < 200; ++seed)
        {
            const auto set = sample_path_set(c, seed);
            CHECK(std::abs(set.total_power() - 1.0) < 1e-9);
            for (const auto &p : set.diffuse)
            {
                CHECK(std::abs(p.doppler) <= c.max_doppler);
                CHECK(p.delay >= 0.0);
            }
        }
    }
}

TEST_CASE("a static single path is flat across the grid")
{
    auto c = small_config();
    PathSet set;
    PropagationPath p;
    p.power = 0.64;
    p.signature = Eigen::MatrixXcd(2, 2);
    p.signature << std::complex<double>(1, 2), std::complex<double>(-0.5, 0), std::complex<double>(0, 1),
        std::complex<double>(0.25, -0.75);
    set.diffuse.push_back(p);
    const auto g = evaluate_channel_grid(set, c, 3);
    CHECK(g.frame_id() == 3);
    for (std::size_t i = 0; i < c.n_sc; ++i)
        for (std::size_t t = 0; t < c.n_s; ++t)
            for (std::size_t a = 0; a < 2; ++a)
                for (std::size_t b = 0; b < 2; ++b)
                {
                    const std::complex<double> expect = 0.8 * p.signature(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
                    CHECK(g(i, t, a, b) == std::complex<float>(static_cast<float>(expect.real()),
                                                               static_cast<float>(expect.imag())));
                }
}

TEST_CASE("two equal paths ripple with period 1/delta_tau")
{
    auto c = small_config();
    c.n_sc = 64;
    c.n_r = c.n_t = 1;
    const double dtau = 1.0 / (8 * c.subcarrier_spacing);  // period of 8 subcarriers
    PathSet set;
    for (double tau : {0.0, dtau})
    {
        PropagationPath p;
        p.delay = tau;
        p.power = 0.5;
        p.signature = Eigen::MatrixXcd::Ones(1, 1);
        set.diffuse.push_back(p);
    }
    const auto g = evaluate_channel_grid(set, c, 0);
    for (std::size_t i = 0; i < c.n_sc; ++i)
    {
        const double f = (static_cast<double>(i) - 32.0) * c.subcarrier_spacing;
        const double expect = std::sqrt(0.5) * std::abs(1.0 + std::polar(1.0, -2.0 * std::numbers::pi * f * dtau));
        CHECK(std::abs(g(i, 0, 0, 0)) == doctest::Approx(expect).epsilon(1e-5));
        if (i + 8 < c.n_sc)
            CHECK(std::abs(g(i, 0, 0, 0)) == doctest::Approx(std::abs(g(i + 8, 0, 0, 0))).epsilon(1e-5));
    }
    // Nulls half a period away from the peaks.
    CHECK(std::abs(g(36, 0, 0, 0)) < 1e-6);
    CHECK(std::abs(g(32, 0, 0, 0)) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-6));
}

TEST_CASE("frame generation is deterministic and composes sample + evaluate")
{
    const auto c = small_config();
    const auto a = generate_frames(c, 5, 42);
    const auto b = generate_frames(c, 5, 42);
    CHECK(a == b);
    CHECK(generate_frames(c, 5, 43) != a);
    for (std::size_t j = 0; j < a.size(); ++j)
        CHECK(a[j].frame_id() == static_cast<std::int64_t>(j));
    const auto one = generate_frames(c, 1, 9);
    CHECK(one.front() == evaluate_channel_grid(sample_path_set(c, derive_seed(9, 0)), c, 0));
    CHECK_THROWS_AS(generate_frames(c, 0, 1), std::invalid_argument);

    ChannelModelConfig full;
    const auto frames = generate_frames(full, 2, 1);
    CHECK(frames.front().dims() == GridDims{64, 64, 3, 3});
}

TEST_CASE("Monte Carlo statistics")
{
    auto c = small_config();
    c.n_s = 2;
    const std::size_t n_frames = 10000;

    SUBCASE("unit mean power, LOS and NLOS")
    {
        for (double k : {6.0, kNlosKFactorDb})
        {
            c.rician_k_db = k;
            const auto frames = generate_frames(c, n_frames, 17);
            double power = 0.0;
            std::size_t count = 0;
            for (const auto &f : frames)
                for (const auto &v : f.values())
                {
                    power += std::norm(std::complex<double>(v));
                    ++count;
                }
            CHECK(power / static_cast<double>(count) == doctest::Approx(1.0).epsilon(0.05));
        }
    }

    SUBCASE("NLOS is zero mean, LOS mean equals the deterministic component")
    {
        for (double k : {6.0, kNlosKFactorDb})
        {
            c.rician_k_db = k;
            const auto frames = generate_frames(c, n_frames, 23);
            std::complex<double> mean = 0.0;
            for (const auto &f : frames)
                mean += std::complex<double>(f(3, 1, 1, 0));
            mean /= static_cast<double>(n_frames);
            const double los = std::isinf(k) ? 0.0 : std::sqrt(std::pow(10.0, k / 10) / (std::pow(10.0, k / 10) + 1));
            CHECK(std::abs(mean - los) < 0.03);
        }
    }

    SUBCASE("adjacent-subcarrier correlation matches the exponential profile")
    {
        c.rician_k_db = kNlosKFactorDb;
        const auto frames = generate_frames(c, n_frames, 29);
        std::complex<double> cross = 0.0;
        double power = 0.0;
        for (const auto &f : frames)
            for (std::size_t i = 0; i + 1 < c.n_sc; ++i)
                for (std::size_t a = 0; a < c.n_r; ++a)
                    for (std::size_t b = 0; b < c.n_t; ++b)
                    {
                        const std::complex<double> h0(f(i, 0, a, b));
                        const std::complex<double> h1(f(i + 1, 0, a, b));
                        cross += h0 * std::conj(h1);
                        power += 0.5 * (std::norm(h0) + std::norm(h1));
                    }
        const double x = 2.0 * std::numbers::pi * c.subcarrier_spacing * c.rms_delay_spread;
        const double analytic = 1.0 / std::sqrt(1.0 + x * x);
        CHECK(analytic == doctest::Approx(0.995).epsilon(1e-3));
        CHECK(std::abs(std::abs(cross) / power - analytic) < 0.01);
    }
}
