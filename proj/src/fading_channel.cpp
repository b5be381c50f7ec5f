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

#include "csisr/parallel.hpp"
#include "csisr/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace csisr
{

namespace
{

void require(bool ok, const std::string &message)
{
    if (!ok)
        throw std::invalid_argument("channel model: " + message);
}

} // namespace

void ChannelModelConfig::validate() const
{
    require(n_sc >= 1, "n_sc must be >= 1");
    require(n_s >= 1, "n_s must be >= 1");
    require(n_r >= 1, "n_r must be >= 1");
    require(n_t >= 1, "n_t must be >= 1");
    require(n_paths >= 1, "n_paths must be >= 1");
    require(std::isfinite(rms_delay_spread) && rms_delay_spread > 0.0, "rms_delay_spread must be > 0");
    require(std::isfinite(subcarrier_spacing) && subcarrier_spacing > 0.0, "subcarrier_spacing must be > 0");
    require(std::isfinite(slot_duration) && slot_duration > 0.0, "slot_duration must be > 0");
    require(std::isfinite(max_doppler) && max_doppler >= 0.0, "max_doppler must be >= 0");
    require(rx_corr >= 0.0 && rx_corr < 1.0, "rx_corr must lie in [0, 1)");
    require(tx_corr >= 0.0 && tx_corr < 1.0, "tx_corr must lie in [0, 1)");
    require(!std::isnan(rician_k_db) && rician_k_db != std::numeric_limits<double>::infinity(),
            "rician_k_db must be finite or -inf");
}

double PathSet::total_power() const noexcept
{
    double total = los ? los->power : 0.0;
    for (const auto &p : diffuse)
        total += p.power;
    return total;
}

Eigen::MatrixXd exponential_correlation(std::size_t n, double corr)
{
    Eigen::MatrixXd r(n, n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            r(a, b) = std::pow(corr, std::abs(static_cast<double>(a) - static_cast<double>(b)));
    return r;
}

Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd &m)
{
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m);
    const Eigen::VectorXd root = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return eig.eigenvectors() * root.asDiagonal() * eig.eigenvectors().transpose();
}

PathSet sample_path_set(const ChannelModelConfig &config, std::uint64_t seed)
{
    config.validate();
    Rng rng(seed);
    std::exponential_distribution<double> delay_dist(1.0 / config.rms_delay_spread);
    std::uniform_real_distribution<double> angle_dist(0.0, 2.0 * std::numbers::pi);

    const Eigen::MatrixXd rx_root = psd_sqrt(exponential_correlation(config.n_r, config.rx_corr));
    const Eigen::MatrixXd tx_root = psd_sqrt(exponential_correlation(config.n_t, config.tx_corr));

    PathSet set;
    set.diffuse.resize(config.n_paths);
    double weight_sum = 0.0;
    for (auto &path : set.diffuse)
    {
        path.delay = delay_dist(rng);
        path.power = std::exp(-path.delay / config.rms_delay_spread);
        path.doppler = config.max_doppler * std::cos(angle_dist(rng));
        Eigen::MatrixXcd g(config.n_r, config.n_t);
        for (Eigen::Index a = 0; a < g.rows(); ++a)
            for (Eigen::Index b = 0; b < g.cols(); ++b)
                g(a, b) = complex_gaussian(rng);
        path.signature = rx_root.cast<std::complex<double>>() * g * tx_root.cast<std::complex<double>>();
        weight_sum += path.power;
    }

    double diffuse_total = 1.0;
    if (config.line_of_sight())
    {
        const double k = std::pow(10.0, config.rician_k_db / 10.0);
        PropagationPath los;
        los.power = k / (k + 1.0);
        los.signature = Eigen::MatrixXcd::Ones(config.n_r, config.n_t);
        set.los = std::move(los);
        diffuse_total = 1.0 / (k + 1.0);
    }
    for (auto &path : set.diffuse)
        path.power *= diffuse_total / weight_sum;
    return set;
}

ChannelGrid evaluate_channel_grid(const PathSet &paths, const ChannelModelConfig &config, std::int64_t frame_id)
{
    using cd = std::complex<double>;
    constexpr double two_pi = 2.0 * std::numbers::pi;

    std::vector<const PropagationPath *> all;
    if (paths.los)
        all.push_back(&*paths.los);
    for (const auto &p : paths.diffuse)
        all.push_back(&p);
    const auto n_paths = static_cast<Eigen::Index>(all.size());
    const auto n_sc = static_cast<Eigen::Index>(config.n_sc);
    const auto n_s = static_cast<Eigen::Index>(config.n_s);

    Eigen::MatrixXcd freq(n_sc, n_paths);
    Eigen::MatrixXcd time(n_paths, n_s);
    for (Eigen::Index l = 0; l < n_paths; ++l)
    {
        const auto &p = *all[static_cast<std::size_t>(l)];
        for (Eigen::Index i = 0; i < n_sc; ++i)
        {
            const double f = (static_cast<double>(i) - static_cast<double>(config.n_sc / 2)) * config.subcarrier_spacing;
            freq(i, l) = std::polar(1.0, -two_pi * f * p.delay);
        }
        for (Eigen::Index t = 0; t < n_s; ++t)
            time(l, t) = std::polar(std::sqrt(p.power), two_pi * p.doppler * static_cast<double>(t) * config.slot_duration);
    }

    ChannelGrid grid(config.dims(), frame_id);
    Eigen::VectorXcd coeff(n_paths);
    for (std::size_t a = 0; a < config.n_r; ++a)
    {
        for (std::size_t b = 0; b < config.n_t; ++b)
        {
            for (Eigen::Index l = 0; l < n_paths; ++l)
                coeff(l) = all[static_cast<std::size_t>(l)]->signature(static_cast<Eigen::Index>(a),
                                                                      static_cast<Eigen::Index>(b));
            const Eigen::MatrixXcd h = (freq * coeff.asDiagonal()) * time;
            for (Eigen::Index i = 0; i < n_sc; ++i)
                for (Eigen::Index t = 0; t < n_s; ++t)
                {
                    const cd v = h(i, t);
                    grid(static_cast<std::size_t>(i), static_cast<std::size_t>(t), a, b) =
                        std::complex<float>(static_cast<float>(v.real()), static_cast<float>(v.imag()));
                }
        }
    }
    return grid;
}

ChannelGrid generate_frame(const ChannelModelConfig &config, std::uint64_t base_seed, std::int64_t frame_id)
{
    const auto seed = derive_seed(base_seed, static_cast<std::uint64_t>(frame_id));
    return evaluate_channel_grid(sample_path_set(config, seed), config, frame_id);
}

std::vector<ChannelGrid> generate_frames(const ChannelModelConfig &config, std::size_t count, std::uint64_t base_seed)
{
    if (count == 0)
        throw std::invalid_argument("generate_frames: count must be >= 1");
    config.validate();
    std::vector<ChannelGrid> frames(count);
    parallel_for(count, [&](std::size_t j) {
        frames[j] = generate_frame(config, base_seed, static_cast<std::int64_t>(j));
    });
    return frames;
}

} // namespace csisr
