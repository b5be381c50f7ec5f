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

#include "csisr/metrics.hpp"
#include "csisr/rng.hpp"

#include "support/oracles.hpp"

#include <doctest.h>

#include <random>

using namespace csisr;
using namespace csisr::metrics;
using namespace csisr::testing;


TEST_CASE("psnr and nmse match loop oracles")
{
    const GridDims d{8, 6, 2, 3};
    for (std::uint64_t trial = 0; trial < 5; ++trial)
    {
        std::vector<GridEstimate> truth, est;
        for (std::uint64_t j = 0; j < 4; ++j)
        {
            truth.push_back(random_grid(d, 100 * trial + j));
            est.push_back(truth.back());
            const auto noise = random_grid(d, 100 * trial + j + 50, 0.1 * (j + 1));
            for (std::size_t k = 0; k < noise.values().size(); ++k)
                est.back().values()[k] += noise.values()[k];
        }
        const std::span<const GridEstimate> es(est), ts(truth);
        CHECK(std::abs(psnr_db(es, ts, 2.5) - oracle_psnr(est, truth, 2.5)) < 1e-9);
        CHECK(std::abs(nmse_db(es, ts) - oracle_nmse(est, truth, true)) < 1e-9);
        CHECK(std::abs(nmse_db(es, ts, NmseAveraging::Aggregate) - oracle_nmse(est, truth, false)) < 1e-9);
        CHECK(std::abs(psnr_db(est[0], truth[0], 1.0) - oracle_psnr({est[0]}, {truth[0]}, 1.0)) < 1e-9);
        CHECK(std::abs(nmse_db(est[1], truth[1]) - oracle_nmse({est[1]}, {truth[1]}, true)) < 1e-9);
    }
}

TEST_CASE("half-scaled estimate has nmse of -6.02 dB")
{
    const auto truth = random_grid({16, 16, 3, 3}, 7);
    GridEstimate half = truth;
    for (auto &v : half.values())
        v *= 0.5;
    CHECK(nmse_db(half, truth) == doctest::Approx(-6.0206).epsilon(1e-4));
    CHECK(std::abs(nmse_db(half, truth) - (-6.02)) < 0.01);
}

TEST_CASE("exact estimates give infinite sentinels")
{
    const auto truth = random_grid({4, 4, 1, 1}, 8);
    CHECK(psnr_db(truth, truth, 1.0) == std::numeric_limits<double>::infinity());
    CHECK(nmse_db(truth, truth) == -std::numeric_limits<double>::infinity());
}

TEST_CASE("metric scaling behaviour")
{
    const auto truth = random_grid({6, 6, 2, 2}, 9);
    auto est = random_grid({6, 6, 2, 2}, 10, 0.2);
    for (std::size_t k = 0; k < est.values().size(); ++k)
        est.values()[k] += truth.values()[k];
    auto scaled_t = truth, scaled_e = est;
    for (auto &v : scaled_t.values())
        v *= 3.0;
    for (auto &v : scaled_e.values())
        v *= 3.0;
    CHECK(nmse_db(scaled_e, scaled_t) == doctest::Approx(nmse_db(est, truth)).epsilon(1e-12));
    // Doubling the peak adds 20 log10(2).
    CHECK(psnr_db(est, truth, 2.0) - psnr_db(est, truth, 1.0) == doctest::Approx(20.0 * std::log10(2.0)));
    // Larger error, lower PSNR.
    auto worse = est;
    for (std::size_t k = 0; k < worse.values().size(); ++k)
        worse.values()[k] += est.values()[k] - truth.values()[k];
    CHECK(psnr_db(worse, truth, 1.0) < psnr_db(est, truth, 1.0));
    CHECK(nmse_db(worse, truth) > nmse_db(est, truth));
}

TEST_CASE("squared error and power")
{
    GridEstimate a({1, 2, 1, 1}), b({1, 2, 1, 1});
    a.values()[0] = {1.0, 2.0};
    b.values()[1] = {0.0, -3.0};
    CHECK(squared_error(a, b) == 14.0);
    CHECK(frobenius_power(a) == 5.0);
    CHECK(psnr_from_mse(0.25, 1.0) == doctest::Approx(10.0 * std::log10(4.0)));
}

TEST_CASE("invalid metric inputs are rejected")
{
    const auto a = random_grid({4, 4, 1, 1}, 11);
    const auto b = random_grid({4, 2, 1, 1}, 12);
    CHECK_THROWS_AS(squared_error(a, b), std::invalid_argument);
    CHECK_THROWS_AS(psnr_from_mse(1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(psnr_from_mse(1.0, std::numeric_limits<double>::infinity()), std::invalid_argument);
    const GridEstimate zero({4, 4, 1, 1});
    CHECK_THROWS_AS(nmse_db(a, zero), std::invalid_argument);
    const std::vector<GridEstimate> two{a, a}, one{a};
    CHECK_THROWS_AS(nmse_db(std::span<const GridEstimate>(two), std::span<const GridEstimate>(one)),
                    std::invalid_argument);
    CHECK_THROWS_AS(psnr_db(std::span<const GridEstimate>{}, std::span<const GridEstimate>{}, 1.0),
                    std::invalid_argument);
}

TEST_CASE("mixed precision inputs")
{
    const auto truth = random_grid({4, 4, 2, 2}, 13);
    const auto f = grid_cast<float>(truth);
    CHECK(nmse_db(f, truth) < -100.0);
}

TEST_CASE("metric text formatting")
{
    CHECK(format_metric(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(format_metric(-std::numeric_limits<double>::infinity()) == "-inf");
    CHECK(format_metric(std::nan("")) == "nan");
    CHECK(format_metric(-6.0205999) == "-6.020600");
    CHECK(parse_metric("inf") == std::numeric_limits<double>::infinity());
    CHECK(parse_metric("-inf") == -std::numeric_limits<double>::infinity());
    CHECK(std::isnan(parse_metric("nan")));
    CHECK(parse_metric("1.5") == 1.5);
    CHECK_THROWS_AS(parse_metric("abc"), std::invalid_argument);
    CHECK(to_string(NmseAveraging::PerFrame) == "per_frame");
    CHECK(parse_nmse_averaging("aggregate") == NmseAveraging::Aggregate);
    CHECK_THROWS_AS(parse_nmse_averaging("median"), std::invalid_argument);
}

TEST_CASE("csv rows round trip")
{
    CHECK(csv_header() == "method,recovery,pilots,scenario,snr_db,psnr_db,nmse_db,frames");
    MetricReport r{"srcnn", "mmse", "16x16", "LOS", 20.0, 21.5, -11.25, 50};
    const auto row = to_csv_row(r);
    CHECK(row == "srcnn,mmse,16x16,LOS,20.000000,21.500000,-11.250000,50");
    CHECK(parse_csv_row(row) == r);
    r.nmse_db = -std::numeric_limits<double>::infinity();
    r.psnr_db = std::numeric_limits<double>::infinity();
    CHECK(parse_csv_row(to_csv_row(r)) == r);
    CHECK_THROWS_AS(parse_csv_row("srcnn,ls,16x16,LOS,20,1,2"), std::invalid_argument);
    CHECK_THROWS_AS(parse_csv_row("srcnn,ls,16x16,LOS,20,1,2,x"), std::invalid_argument);
}
