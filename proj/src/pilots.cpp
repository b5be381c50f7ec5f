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

#include "csisr/pilots.hpp"

#include "csisr/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace csisr
{

namespace
{

std::size_t lattice_count(std::size_t dim, std::size_t offset, std::size_t stride) noexcept
{
    if (stride == 0 || offset >= dim)
        return 0;
    return (dim - offset + stride - 1) / stride;
}

Eigen::MatrixXcd to_matrix(std::span<const std::complex<float>> block, std::size_t n_r, std::size_t n_t)
{
    Eigen::MatrixXcd h(static_cast<Eigen::Index>(n_r), static_cast<Eigen::Index>(n_t));
    for (std::size_t a = 0; a < n_r; ++a)
        for (std::size_t b = 0; b < n_t; ++b)
        {
            const auto v = block[a * n_t + b];
            h(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = {v.real(), v.imag()};
        }
    return h;
}

EstimatedPilotGrid empty_estimate(const PilotObservationSet &obs, RecoveryMethod method)
{
    EstimatedPilotGrid est;
    est.pattern = obs.pattern;
    est.grid_dims = obs.grid_dims;
    est.method = method;
    est.values = GridEstimate({obs.pattern.freq_count(obs.grid_dims.n_sc), obs.pattern.time_count(obs.grid_dims.n_s),
                               obs.grid_dims.n_r, obs.grid_dims.n_t});
    return est;
}

void store(GridEstimate &values, std::size_t k, const Eigen::MatrixXcd &h)
{
    const auto n_pt = values.dims().n_s;
    auto block = values.matrix(k / n_pt, k % n_pt);
    const auto n_t = static_cast<std::size_t>(h.cols());
    for (Eigen::Index a = 0; a < h.rows(); ++a)
        for (Eigen::Index b = 0; b < h.cols(); ++b)
            block[static_cast<std::size_t>(a) * n_t + static_cast<std::size_t>(b)] = h(a, b);
}

Eigen::MatrixXcd checked_gram_inverse(const PilotSymbols &symbols)
{
    const Eigen::MatrixXcd gram = symbols.x * symbols.x.adjoint();
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(gram);
    if (!lu.isInvertible())
        throw std::logic_error("pilot recovery: X X^H is singular; pilots must be an orthogonal design");
    return lu.inverse();
}

} // namespace

std::size_t PilotPattern::freq_count(std::size_t n_sc) const noexcept
{
    return lattice_count(n_sc, freq_offset, freq_stride);
}

std::size_t PilotPattern::time_count(std::size_t n_s) const noexcept
{
    return lattice_count(n_s, time_offset, time_stride);
}

void PilotPattern::validate(std::size_t n_sc, std::size_t n_s) const
{
    if (freq_stride < 1 || time_stride < 1)
        throw std::invalid_argument("pilot pattern: strides must be >= 1");
    if (freq_offset >= freq_stride || time_offset >= time_stride)
        throw std::invalid_argument("pilot pattern: offsets must be smaller than strides");
    if (freq_offset >= n_sc || time_offset >= n_s)
        throw std::invalid_argument("pilot pattern: lattice exceeds the " + std::to_string(n_sc) + "x" +
                                    std::to_string(n_s) + " grid");
}

std::vector<PilotPosition> pilot_positions(const PilotPattern &pattern, std::size_t n_sc, std::size_t n_s)
{
    pattern.validate(n_sc, n_s);
    std::vector<PilotPosition> out;
    out.reserve(pattern.freq_count(n_sc) * pattern.time_count(n_s));
    for (std::size_t u = 0; u < pattern.freq_count(n_sc); ++u)
        for (std::size_t v = 0; v < pattern.time_count(n_s); ++v)
            out.push_back({pattern.freq_index(u), pattern.time_index(v)});
    return out;
}

PilotSymbols PilotSymbols::orthogonal(std::size_t n_t, double power)
{
    const auto n = static_cast<Eigen::Index>(n_t);
    PilotSymbols s;
    s.power = power;
    s.x.resize(n, n);
    const double amplitude = std::sqrt(power / static_cast<double>(n_t));
    for (Eigen::Index b = 0; b < n; ++b)
        for (Eigen::Index k = 0; k < n; ++k)
            s.x(b, k) = std::polar(amplitude, -2.0 * std::numbers::pi * static_cast<double>(b * k) /
                                                  static_cast<double>(n_t));
    return s;
}

void PilotSymbols::validate() const
{
    if (x.rows() == 0 || x.rows() != x.cols())
        throw std::invalid_argument("pilot symbols: X must be a non-empty square n_t x n_t block");
    const Eigen::MatrixXcd gram = x * x.adjoint();
    const Eigen::MatrixXcd expected = power * Eigen::MatrixXcd::Identity(x.rows(), x.cols());
    if ((gram - expected).cwiseAbs().maxCoeff() > 1e-9 * std::max(1.0, power))
        throw std::invalid_argument("pilot symbols: X X^H differs from power * I");
}

double pilot_power_for_snr(double snr_db) noexcept
{
    if (std::isinf(snr_db) && snr_db > 0)
        return 1.0;
    return std::pow(10.0, snr_db / 10.0);
}

std::string_view to_string(RecoveryMethod method) noexcept
{
    return method == RecoveryMethod::Mmse ? "mmse" : "ls";
}

RecoveryMethod parse_recovery_method(std::string_view name)
{
    if (name == "ls")
        return RecoveryMethod::LeastSquares;
    if (name == "mmse")
        return RecoveryMethod::Mmse;
    throw std::invalid_argument("unknown recovery method '" + std::string(name) + "' (expected ls|mmse)");
}

ReceiveCorrelation ReceiveCorrelation::checked(Eigen::MatrixXcd r)
{
    if (r.rows() == 0 || r.rows() != r.cols())
        throw std::invalid_argument("receive correlation: R_H must be square and non-empty");
    if ((r - r.adjoint()).cwiseAbs().maxCoeff() > 1e-9)
        throw std::invalid_argument("receive correlation: R_H is not Hermitian");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(r);
    if (eig.eigenvalues().minCoeff() < -1e-9)
        throw std::invalid_argument("receive correlation: R_H is not positive semidefinite");
    return ReceiveCorrelation(std::move(r));
}

PilotObservationSet observe_pilots(const ChannelGrid &grid, const PilotPattern &pattern,
                                   const PilotSymbols &symbols, double snr_db, std::uint64_t seed)
{
    const auto dims = grid.dims();
    pattern.validate(dims.n_sc, dims.n_s);
    symbols.validate();
    if (static_cast<std::size_t>(symbols.x.rows()) != dims.n_t)
        throw std::invalid_argument("observe_pilots: pilot block size does not match n_t");

    PilotObservationSet obs;
    obs.pattern = pattern;
    obs.grid_dims = dims;
    obs.snr_db = snr_db;
    obs.seed = seed;
    obs.noise_variance = (std::isinf(snr_db) && snr_db > 0) ? 0.0 : symbols.power / std::pow(10.0, snr_db / 10.0);

    const auto positions = pilot_positions(pattern, dims.n_sc, dims.n_s);
    obs.y.resize(positions.size());
    for (std::size_t k = 0; k < positions.size(); ++k)
    {
        const auto [i, t] = positions[k];
        Eigen::MatrixXcd y = to_matrix(grid.matrix(i, t), dims.n_r, dims.n_t) * symbols.x;
        if (obs.noise_variance > 0.0)
        {
            Rng rng(derive_seed(seed, k));
            for (Eigen::Index a = 0; a < y.rows(); ++a)
                for (Eigen::Index u = 0; u < y.cols(); ++u)
                    y(a, u) += complex_gaussian(rng, obs.noise_variance);
        }
        obs.y[k] = std::move(y);
    }
    return obs;
}

EstimatedPilotGrid ls_estimate(const PilotObservationSet &obs, const PilotSymbols &symbols)
{
    const Eigen::MatrixXcd projector = symbols.x.adjoint() * checked_gram_inverse(symbols);
    auto est = empty_estimate(obs, RecoveryMethod::LeastSquares);
    for (std::size_t k = 0; k < obs.y.size(); ++k)
        store(est.values, k, obs.y[k] * projector);
    return est;
}

EstimatedPilotGrid mmse_estimate(const PilotObservationSet &obs, const PilotSymbols &symbols,
                                 const ReceiveCorrelation &r_h)
{
    const auto &r = r_h.matrix();
    if (static_cast<std::size_t>(r.rows()) != obs.grid_dims.n_r)
        throw std::invalid_argument("mmse_estimate: R_H must be n_r x n_r");
    const Eigen::MatrixXcd gram_inv = checked_gram_inverse(symbols);
    auto est = ls_estimate(obs, symbols);
    est.method = RecoveryMethod::Mmse;
    if (obs.noise_variance == 0.0)
        return est;

    // X X^H = power * I, so (X X^H)^-1 is the scalar mean of its diagonal
    // times the identity; writing it that way lets n_r differ from n_t.
    const double inv_power = gram_inv.diagonal().real().mean();
    const auto n_r = r.rows();
    const Eigen::MatrixXcd regularized = r + (obs.noise_variance * inv_power) * Eigen::MatrixXcd::Identity(n_r, n_r);
    const Eigen::MatrixXcd filter = r * regularized.inverse();

    const auto dims = est.values.dims();
    for (std::size_t u = 0; u < dims.n_sc; ++u)
        for (std::size_t v = 0; v < dims.n_s; ++v)
        {
            auto block = est.values.matrix(u, v);
            Eigen::Map<Eigen::Matrix<std::complex<double>, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> h(
                block.data(), static_cast<Eigen::Index>(dims.n_r), static_cast<Eigen::Index>(dims.n_t));
            h = (filter * h).eval();
        }
    return est;
}

ReceiveCorrelation estimate_receive_correlation(std::span<const ChannelGrid> frames)
{
    if (frames.empty())
        throw std::invalid_argument("estimate_receive_correlation: no frames");
    require_uniform_dims(frames, "estimate_receive_correlation");
    const auto dims = frames.front().dims();
    const auto n_r = static_cast<Eigen::Index>(dims.n_r);
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(n_r, n_r);
    for (const auto &frame : frames)
        for (std::size_t i = 0; i < dims.n_sc; ++i)
            for (std::size_t t = 0; t < dims.n_s; ++t)
            {
                const Eigen::MatrixXcd h = to_matrix(frame.matrix(i, t), dims.n_r, dims.n_t);
                acc.noalias() += h * h.adjoint();
            }
    acc /= static_cast<double>(frames.size() * dims.points());
    const Eigen::MatrixXcd hermitian = 0.5 * (acc + acc.adjoint());
    return ReceiveCorrelation::checked(hermitian);
}

EstimatedPilotGrid recover_pilots(const ChannelGrid &grid, const RecoverySetup &setup, std::uint64_t noise_seed)
{
    const auto symbols = PilotSymbols::orthogonal(grid.dims().n_t, pilot_power_for_snr(setup.snr_db));
    const auto obs = observe_pilots(grid, setup.pattern, symbols, setup.snr_db, noise_seed);
    EstimatedPilotGrid est;
    if (setup.method == RecoveryMethod::Mmse)
    {
        if (setup.r_h == nullptr)
            throw std::invalid_argument("recover_pilots: MMSE recovery needs a receive correlation");
        est = mmse_estimate(obs, symbols, *setup.r_h);
    }
    else
    {
        est = ls_estimate(obs, symbols);
    }
    est.values.set_frame_id(grid.frame_id());
    return est;
}

EstimatedPilotGrid sample_at_pilots(const ChannelGrid &grid, const PilotPattern &pattern)
{
    const auto dims = grid.dims();
    pattern.validate(dims.n_sc, dims.n_s);
    EstimatedPilotGrid est;
    est.pattern = pattern;
    est.grid_dims = dims;
    est.values = GridEstimate({pattern.freq_count(dims.n_sc), pattern.time_count(dims.n_s), dims.n_r, dims.n_t},
                              grid.frame_id());
    for (std::size_t u = 0; u < est.freq_count(); ++u)
        for (std::size_t v = 0; v < est.time_count(); ++v)
        {
            auto dst = est.values.matrix(u, v);
            auto src = grid.matrix(pattern.freq_index(u), pattern.time_index(v));
            for (std::size_t k = 0; k < dst.size(); ++k)
                dst[k] = {src[k].real(), src[k].imag()};
        }
    return est;
}

} // namespace csisr
