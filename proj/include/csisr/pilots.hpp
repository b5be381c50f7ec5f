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

// Pilot lattice, pilot observation and LS/MMSE recovery at the pilots.
//
// Indices are 0-based: the lattice with offset 0 and stride 4 on a 64-point
// axis covers 0, 4, ..., 60 (1, 5, ..., 61 when counted from one).

#include "csisr/grid.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace csisr
{

struct PilotPattern
{
    std::size_t freq_offset = 0;
    std::size_t freq_stride = 4;
    std::size_t time_offset = 0;
    std::size_t time_stride = 4;

    static PilotPattern uniform(std::size_t stride, std::size_t offset = 0) noexcept
    {
        return {offset, stride, offset, stride};
    }

    // ceil((dim - offset) / stride)
    std::size_t freq_count(std::size_t n_sc) const noexcept;
    std::size_t time_count(std::size_t n_s) const noexcept;

    std::size_t freq_index(std::size_t k) const noexcept { return freq_offset + k * freq_stride; }
    std::size_t time_index(std::size_t k) const noexcept { return time_offset + k * time_stride; }

    // Throws std::invalid_argument when the lattice does not fit the grid.
    void validate(std::size_t n_sc, std::size_t n_s) const;

    bool operator==(const PilotPattern &) const = default;
};

struct PilotPosition
{
    std::size_t subcarrier = 0;
    std::size_t slot = 0;

    bool operator==(const PilotPosition &) const = default;
};

// Row-major (subcarrier-major) list of the lattice points.
std::vector<PilotPosition> pilot_positions(const PilotPattern &pattern, std::size_t n_sc, std::size_t n_s);

// n_t x n_t pilot block sent over n_t consecutive uses of one lattice point.
// Rows are transmit antennas, columns are uses; X X^H = power * I.
struct PilotSymbols
{
    Eigen::MatrixXcd x;
    double power = 1.0;

    // Scaled unitary DFT design.
    static PilotSymbols orthogonal(std::size_t n_t, double power);

    // Throws std::invalid_argument unless X X^H = power * I within 1e-9.
    void validate() const;
};

// Pilot power that puts the per-receive-antenna SNR at snr_db under unit
// noise variance and unit average channel power. Infinite SNR maps to 1.
double pilot_power_for_snr(double snr_db) noexcept;

struct PilotObservationSet
{
    PilotPattern pattern;
    GridDims grid_dims;
    std::vector<Eigen::MatrixXcd> y;  // n_r x n_t per lattice point, row-major lattice order
    double snr_db = 0.0;
    double noise_variance = 0.0;
    std::uint64_t seed = 0;
};

enum class RecoveryMethod
{
    LeastSquares,
    Mmse,
};

std::string_view to_string(RecoveryMethod method) noexcept;
RecoveryMethod parse_recovery_method(std::string_view name);

// Recovered CSI on the pilot lattice. `values` has dims
// (n_pf, n_pt, n_r, n_t); `grid_dims` are the full resource-block dims.
struct EstimatedPilotGrid
{
    PilotPattern pattern;
    GridDims grid_dims;
    GridEstimate values;
    RecoveryMethod method = RecoveryMethod::LeastSquares;

    std::size_t freq_count() const noexcept { return values.dims().n_sc; }
    std::size_t time_count() const noexcept { return values.dims().n_s; }
};

// E[H H^H] at the receiver. Construct through checked().
class ReceiveCorrelation
{
public:
    // Rejects matrices that are not Hermitian within 1e-9 or have an
    // eigenvalue below -1e-9.
    static ReceiveCorrelation checked(Eigen::MatrixXcd r);

    const Eigen::MatrixXcd &matrix() const noexcept { return r_; }

private:
    explicit ReceiveCorrelation(Eigen::MatrixXcd r) : r_(std::move(r)) {}
    Eigen::MatrixXcd r_;
};

// Y = H X + N at every lattice point; N is i.i.d. CN(0, power / 10^(snr/10)).
// snr_db = +inf disables the noise. The noise at lattice point k is drawn
// from derive_seed(seed, k).
PilotObservationSet observe_pilots(const ChannelGrid &grid, const PilotPattern &pattern,
                                   const PilotSymbols &symbols, double snr_db, std::uint64_t seed);

// H_LS = Y X^H (X X^H)^-1
EstimatedPilotGrid ls_estimate(const PilotObservationSet &obs, const PilotSymbols &symbols);

// H_MMSE = R_H [R_H + sigma^2 (X X^H)^-1]^-1 H_LS. Under the calibrated
// unit-noise convention sigma^2 = 1.
EstimatedPilotGrid mmse_estimate(const PilotObservationSet &obs, const PilotSymbols &symbols,
                                 const ReceiveCorrelation &r_h);

// Hermitian-symmetrized sample mean of H H^H over every grid point of every frame.
ReceiveCorrelation estimate_receive_correlation(std::span<const ChannelGrid> frames);

// Observation followed by recovery with calibrated pilots; the usual way to
// turn a ground-truth frame into an LR input.
struct RecoverySetup
{
    PilotPattern pattern;
    double snr_db = 20.0;
    RecoveryMethod method = RecoveryMethod::LeastSquares;
    const ReceiveCorrelation *r_h = nullptr;  // required for Mmse
};

EstimatedPilotGrid recover_pilots(const ChannelGrid &grid, const RecoverySetup &setup, std::uint64_t noise_seed);

// Copies the true channel at the lattice points (no noise, no recovery).
EstimatedPilotGrid sample_at_pilots(const ChannelGrid &grid, const PilotPattern &pattern);

} // namespace csisr
