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

// Supervised training of the SR networks on (recovered pilots, true grid)
// pairs.

#include "csisr/networks.hpp"

#include <optional>
#include <stdexcept>
#include <utility>

namespace csisr::sr
{

enum class LossKind
{
    Mse,
    L1,
};

std::string_view to_string(LossKind loss) noexcept;
LossKind parse_loss_kind(std::string_view name);

// MSE for SR-CNN, L1 for EDSR.
LossKind default_loss(Architecture arch) noexcept;

struct TrainConfig
{
    std::size_t epochs = 30;
    std::size_t batch_size = 8;
    double lr = 1e-3;
    std::optional<LossKind> loss;  // architecture default when empty
    std::uint64_t seed = 1;
    double val_split = 0.2;
    // Restore the parameters of the epoch with the lowest validation loss.
    bool keep_best = true;

    void validate() const;
};

// epoch 0 holds the losses of the untrained model.
struct EpochRecord
{
    std::size_t epoch = 0;
    double train_loss = 0.0;
    double val_loss = 0.0;
    double best_val_loss = 0.0;

    bool operator==(const EpochRecord &) const = default;
};

using LossHistory = std::vector<EpochRecord>;

// Trailing round(val_split * n) frames become the validation set; both
// parts must be non-empty.
std::pair<std::vector<ChannelGrid>, std::vector<ChannelGrid>> split_frames(std::span<const ChannelGrid> frames,
                                                                           double val_split);

// Recovered pilot grid for every frame; frame j uses noise seed
// derive_seed(noise_seed, j).
std::vector<EstimatedPilotGrid> recover_frames(std::span<const ChannelGrid> frames, const RecoverySetup &setup,
                                               std::uint64_t noise_seed);

class DivergenceError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

struct TrainResult
{
    Checkpoint checkpoint;
    LossHistory history;
};

// Fits `model` in place. The normalization scale is taken from the training
// targets. Training and validation noise use separate streams derived from
// config.seed, so a frame's input is the same in every epoch.
// Throws std::invalid_argument on empty sets or incompatible geometry and
// DivergenceError when a loss becomes non-finite.
TrainResult train(SrModel &model, std::span<const ChannelGrid> train_frames, std::span<const ChannelGrid> val_frames,
                  const RecoverySetup &setup, const TrainConfig &config);

} // namespace csisr::sr
