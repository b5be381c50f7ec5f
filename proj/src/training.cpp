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

#include "csisr/training.hpp"

#include "csisr/adam.hpp"
#include "csisr/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace csisr::sr
{

std::string_view to_string(LossKind loss) noexcept
{
    return loss == LossKind::Mse ? "mse" : "l1";
}

LossKind parse_loss_kind(std::string_view name)
{
    if (name == "mse")
        return LossKind::Mse;
    if (name == "l1")
        return LossKind::L1;
    throw std::invalid_argument("unknown loss '" + std::string(name) + "' (expected mse or l1)");
}

LossKind default_loss(Architecture arch) noexcept
{
    return arch == Architecture::Edsr ? LossKind::L1 : LossKind::Mse;
}

void TrainConfig::validate() const
{
    if (batch_size == 0)
        throw std::invalid_argument("train: batch size must be positive");
    if (!(lr > 0.0) || !std::isfinite(lr))
        throw std::invalid_argument("train: learning rate must be finite and > 0");
    if (!(val_split > 0.0 && val_split < 1.0))
        throw std::invalid_argument("train: validation split must lie in (0, 1)");
}

std::pair<std::vector<ChannelGrid>, std::vector<ChannelGrid>> split_frames(std::span<const ChannelGrid> frames,
                                                                           double val_split)
{
    if (!(val_split > 0.0 && val_split < 1.0))
        throw std::invalid_argument("split_frames: validation split must lie in (0, 1)");
    const auto n_val = static_cast<std::size_t>(std::llround(val_split * static_cast<double>(frames.size())));
    if (n_val == 0 || n_val >= frames.size())
        throw std::invalid_argument("split_frames: " + std::to_string(frames.size()) +
                                    " frames cannot be split into two non-empty sets");
    const auto cut = frames.begin() + static_cast<std::ptrdiff_t>(frames.size() - n_val);
    return {std::vector<ChannelGrid>(frames.begin(), cut), std::vector<ChannelGrid>(cut, frames.end())};
}

std::vector<EstimatedPilotGrid> recover_frames(std::span<const ChannelGrid> frames, const RecoverySetup &setup,
                                               std::uint64_t noise_seed)
{
    std::vector<EstimatedPilotGrid> out(frames.size());
    parallel_for(frames.size(),
                 [&](std::size_t j) { out[j] = recover_pilots(frames[j], setup, derive_seed(noise_seed, j)); });
    return out;
}

namespace
{

constexpr std::uint64_t kTrainNoiseStream = 1;
constexpr std::uint64_t kValNoiseStream = 2;
constexpr std::uint64_t kShuffleStream = 3;
constexpr std::size_t kEncodeChunk = 16;

// Network inputs and targets of a whole split, flattened sample by sample.
struct Samples
{
    autograd::Shape input_shape;   // per sample [C, H, W]
    autograd::Shape target_shape;
    std::vector<float> inputs;
    std::vector<float> targets;
    std::size_t count = 0;
};

void append(std::vector<float> &pool, autograd::Shape &shape, const Tensor &batch)
{
    autograd::Shape per(batch.shape().begin() + 1, batch.shape().end());
    if (shape.empty())
        shape = per;
    pool.insert(pool.end(), batch.data().begin(), batch.data().end());
}

Samples encode(const SrModel &model, std::span<const ChannelGrid> frames, const RecoverySetup &setup,
               const NormalizationStats &stats, std::uint64_t noise_seed)
{
    const auto pilots = recover_frames(frames, setup, noise_seed);
    Samples s;
    s.count = frames.size();
    for (std::size_t first = 0; first < frames.size(); first += kEncodeChunk)
    {
        const std::size_t n = std::min(kEncodeChunk, frames.size() - first);
        append(s.inputs, s.input_shape, prepare_input(model, std::span(pilots).subspan(first, n), stats));
        append(s.targets, s.target_shape, to_channel_image<float>(frames.subspan(first, n), stats));
    }
    return s;
}

Tensor gather(const std::vector<float> &pool, const autograd::Shape &per, std::span<const std::size_t> index)
{
    const std::size_t size = autograd::element_count(per);
    autograd::Shape shape{index.size()};
    shape.insert(shape.end(), per.begin(), per.end());
    std::vector<float> values(index.size() * size);
    for (std::size_t k = 0; k < index.size(); ++k)
        std::copy_n(pool.begin() + static_cast<std::ptrdiff_t>(index[k] * size), size,
                    values.begin() + static_cast<std::ptrdiff_t>(k * size));
    return Tensor(std::move(shape), std::move(values));
}

Tensor loss_of(Tape &tape, const Tensor &pred, const Tensor &target, LossKind kind)
{
    return kind == LossKind::Mse ? autograd::mse_loss(tape, pred, target) : autograd::l1_loss(tape, pred, target);
}

void require_finite(double loss, const char *what, std::size_t epoch)
{
    if (!std::isfinite(loss))
        throw DivergenceError(std::string("training diverged: non-finite ") + what + " loss in epoch " +
                              std::to_string(epoch) + "; lower the learning rate");
}

// Sample-weighted mean loss over the split without recording.
double evaluate(const SrModel &model, const Samples &s, std::size_t batch, LossKind kind)
{
    std::vector<std::size_t> order(s.count);
    std::iota(order.begin(), order.end(), std::size_t{0});
    double sum = 0.0;
    for (std::size_t first = 0; first < s.count; first += batch)
    {
        const auto idx = std::span(order).subspan(first, std::min(batch, s.count - first));
        auto tape = Tape::inference();
        const auto pred = model.forward(tape, gather(s.inputs, s.input_shape, idx));
        sum += static_cast<double>(loss_of(tape, pred, gather(s.targets, s.target_shape, idx), kind).item()) *
               static_cast<double>(idx.size());
    }
    return sum / static_cast<double>(s.count);
}

std::vector<std::vector<float>> snapshot(const std::vector<Tensor> &params)
{
    std::vector<std::vector<float>> out;
    for (const auto &p : params)
        out.emplace_back(p.data().begin(), p.data().end());
    return out;
}

} // namespace

TrainResult train(SrModel &model, std::span<const ChannelGrid> train_frames, std::span<const ChannelGrid> val_frames,
                  const RecoverySetup &setup, const TrainConfig &config)
{
    config.validate();
    if (train_frames.empty() || val_frames.empty())
        throw std::invalid_argument("train: training and validation sets must both be non-empty");
    require_uniform_dims(train_frames, "train: training frames");
    require_uniform_dims(val_frames, "train: validation frames");
    if (!(train_frames.front().dims() == val_frames.front().dims()))
        throw std::invalid_argument("train: training and validation frames have different dimensions");

    const LossKind kind = config.loss.value_or(default_loss(model.architecture()));
    const auto stats = NormalizationStats::from_frames(train_frames);
    const auto train_set = encode(model, train_frames, setup, stats, derive_seed(config.seed, kTrainNoiseStream));
    const auto val_set = encode(model, val_frames, setup, stats, derive_seed(config.seed, kValNoiseStream));

    auto params = model.parameters();
    autograd::Adam optimizer(params, {.lr = config.lr});

    LossHistory history;
    EpochRecord initial{0, evaluate(model, train_set, config.batch_size, kind),
                        evaluate(model, val_set, config.batch_size, kind), 0.0};
    require_finite(initial.train_loss, "training", 0);
    require_finite(initial.val_loss, "validation", 0);
    initial.best_val_loss = initial.val_loss;
    history.push_back(initial);
    auto best = snapshot(params);

    std::vector<std::size_t> order(train_set.count);
    for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch)
    {
        std::iota(order.begin(), order.end(), std::size_t{0});
        Rng rng(derive_seed(derive_seed(config.seed, kShuffleStream), epoch));
        std::shuffle(order.begin(), order.end(), rng);

        double sum = 0.0;
        for (std::size_t first = 0; first < order.size(); first += config.batch_size)
        {
            const auto idx = std::span(order).subspan(first, std::min(config.batch_size, order.size() - first));
            optimizer.zero_grad();
            Tape tape;
            const auto pred = model.forward(tape, gather(train_set.inputs, train_set.input_shape, idx));
            const auto loss = loss_of(tape, pred, gather(train_set.targets, train_set.target_shape, idx), kind);
            require_finite(loss.item(), "training", epoch);
            tape.backward(loss);
            optimizer.step();
            sum += static_cast<double>(loss.item()) * static_cast<double>(idx.size());
        }

        EpochRecord rec{epoch, sum / static_cast<double>(train_set.count),
                        evaluate(model, val_set, config.batch_size, kind), history.back().best_val_loss};
        require_finite(rec.val_loss, "validation", epoch);
        if (rec.val_loss < rec.best_val_loss)
        {
            rec.best_val_loss = rec.val_loss;
            best = snapshot(params);
        }
        history.push_back(rec);
    }

    if (config.keep_best)
        for (std::size_t k = 0; k < params.size(); ++k)
            std::copy(best[k].begin(), best[k].end(), params[k].data().begin());

    TrainingMetadata meta;
    meta.epochs = config.epochs;
    meta.final_train_loss = history.back().train_loss;
    meta.final_val_loss = history.back().val_loss;
    meta.best_val_loss = history.back().best_val_loss;
    meta.seed = config.seed;
    meta.loss = std::string(to_string(kind));
    meta.recovery = std::string(csisr::to_string(setup.method));
    meta.snr_db = setup.snr_db;
    return {make_checkpoint(model, stats, meta), std::move(history)};
}

} // namespace csisr::sr
