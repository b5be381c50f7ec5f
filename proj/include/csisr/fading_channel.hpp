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

// Statistical MIMO-OFDM channel frames from a clustered tapped-delay-line
// model with Kronecker (separable rx/tx) spatial correlation.
//
// This is a surrogate for geometry-based simulators: it reproduces the
// frequency, time and antenna correlation structure an interpolator has to
// exploit, not any particular measured environment.

#include "csisr/grid.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

namespace csisr
{

// Rician K-factor (dB) sentinel selecting pure scattering.
inline constexpr double kNlosKFactorDb = -std::numeric_limits<double>::infinity();

struct ChannelModelConfig
{
    double carrier_freq = 5.3e9;          // Hz
    double bandwidth = 20e6;              // Hz
    std::size_t n_sc = 64;                // subcarriers per resource block
    std::size_t n_s = 64;                 // slots per resource block
    std::size_t n_r = 3;                  // receive antennas
    std::size_t n_t = 3;                  // transmit antennas
    double subcarrier_spacing = 312.5e3;  // Hz, bandwidth / 64-point FFT
    double slot_duration = 4e-6;          // s, one OFDM symbol with guard
    std::size_t n_paths = 12;             // diffuse taps
    double rms_delay_spread = 50e-9;      // s
    double max_doppler = 10.0;            // Hz
    double rician_k_db = 6.0;             // dB, kNlosKFactorDb for NLOS
    double rx_corr = 0.3;                 // exponential correlation coefficient
    double tx_corr = 0.3;

    GridDims dims() const noexcept { return {n_sc, n_s, n_r, n_t}; }
    bool line_of_sight() const noexcept { return rician_k_db != kNlosKFactorDb; }

    // Throws std::invalid_argument naming the offending field.
    void validate() const;
};

struct PropagationPath
{
    double delay = 0.0;          // s
    double power = 0.0;          // fraction of total power
    double doppler = 0.0;        // Hz
    Eigen::MatrixXcd signature;  // n_r x n_t, unit average element power
};

struct PathSet
{
    std::vector<PropagationPath> diffuse;
    std::optional<PropagationPath> los;

    double total_power() const noexcept;
};

// R[a][b] = corr^|a-b|
Eigen::MatrixXd exponential_correlation(std::size_t n, double corr);

// Principal square root of a symmetric positive semidefinite matrix.
Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd &m);

PathSet sample_path_set(const ChannelModelConfig &config, std::uint64_t seed);

// H_i(t) = sum_l sqrt(p_l) A_l exp(-j2pi f_i tau_l) exp(j2pi f_d,l t T_s)
// with f_i = (i - n_sc/2) * subcarrier_spacing.
ChannelGrid evaluate_channel_grid(const PathSet &paths, const ChannelModelConfig &config, std::int64_t frame_id);

// Frame j of the family rooted at base_seed.
ChannelGrid generate_frame(const ChannelModelConfig &config, std::uint64_t base_seed, std::int64_t frame_id);

// Frames 0..count-1; frame j draws its paths from derive_seed(base_seed, j),
// so the result does not depend on how the work is scheduled.
std::vector<ChannelGrid> generate_frames(const ChannelModelConfig &config, std::size_t count,
                                         std::uint64_t base_seed);

} // namespace csisr
