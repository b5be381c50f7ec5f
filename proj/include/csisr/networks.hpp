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

// SR-CNN and EDSR style super-resolution networks over channel images,
// their checkpoints, and the inference pipelines that turn a recovered pilot
// grid into a full resource-block estimate.

#include "csisr/channel_image.hpp"
#include "csisr/interpolation.hpp"
#include "csisr/ops.hpp"
#include "csisr/pilots.hpp"
#include "csisr/rng.hpp"

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace csisr::sr
{

using autograd::Tape;
using autograd::Tensor;

enum class Architecture : std::uint32_t
{
    Srcnn = 1,
    Edsr = 2,
};

std::string_view to_string(Architecture arch) noexcept;
Architecture parse_architecture(std::string_view name);

template <typename T>
struct BasicNamedTensor
{
    std::string name;
    autograd::BasicTensor<T> tensor;
};

// Same-padded convolution layer; weights [out, in, k, k], bias [out].
template <typename T>
struct BasicConv2d
{
    autograd::BasicTensor<T> weight;
    autograd::BasicTensor<T> bias;

    // Fan-in scaled Gaussian weights (std sqrt(2 / (in * k * k))), zero bias.
    static BasicConv2d kaiming(std::size_t in, std::size_t out, std::size_t kernel, Rng &rng);

    autograd::BasicTensor<T> operator()(autograd::BasicTape<T> &tape, const autograd::BasicTensor<T> &x) const
    {
        return autograd::conv2d(tape, x, weight, bias);
    }
};

using NamedTensor = BasicNamedTensor<float>;
using Conv2d = BasicConv2d<float>;

struct SrcnnSpec
{
    std::size_t channels = 18;
    std::array<std::size_t, 3> kernels{9, 5, 5};
    std::array<std::size_t, 2> widths{64, 32};
    // Expansion of the LR lattice to HR before the network.
    InterpMode pre_interp = InterpMode::PaperLinear;

    std::string serialize() const;
    static SrcnnSpec parse(std::string_view text);
    void validate() const;
};

struct EdsrSpec
{
    std::size_t channels = 18;
    std::size_t blocks = 8;
    std::size_t features = 64;
    float res_scale = 0.1f;
    // Power of two; realized as log2(upscale) conv + x2 pixel-shuffle stages.
    std::size_t upscale = 4;

    std::string serialize() const;
    static EdsrSpec parse(std::string_view text);
    void validate() const;
};

// Models are instantiated in float for training and inference, and in
// double for finite-difference checks.
template <typename T>
class BasicSrModel
{
public:
    using Tensor = autograd::BasicTensor<T>;
    using Tape = autograd::BasicTape<T>;
    using NamedTensor = BasicNamedTensor<T>;

    virtual ~BasicSrModel() = default;

    virtual Architecture architecture() const noexcept = 0;
    virtual Tensor forward(Tape &tape, const Tensor &input) const = 0;
    virtual std::vector<NamedTensor> named_parameters() const = 0;
    virtual std::string spec_text() const = 0;
    virtual std::size_t channels() const noexcept = 0;
    // Spatial magnification from input to output.
    virtual std::size_t upscale() const noexcept = 0;

    std::vector<Tensor> parameters() const;
    std::size_t parameter_count() const;
};

// conv(k0) -> relu -> conv(k1) -> relu -> conv(k2); spatial dims preserved.
template <typename T>
class BasicSrcnn final : public BasicSrModel<T>
{
public:
    using typename BasicSrModel<T>::Tensor;
    using typename BasicSrModel<T>::Tape;
    using typename BasicSrModel<T>::NamedTensor;

    BasicSrcnn(const SrcnnSpec &spec, std::uint64_t seed);

    const SrcnnSpec &spec() const noexcept { return spec_; }

    Architecture architecture() const noexcept override { return Architecture::Srcnn; }
    Tensor forward(Tape &tape, const Tensor &input) const override;
    std::vector<NamedTensor> named_parameters() const override;
    std::string spec_text() const override { return spec_.serialize(); }
    std::size_t channels() const noexcept override { return spec_.channels; }
    std::size_t upscale() const noexcept override { return 1; }

private:
    SrcnnSpec spec_;
    std::array<BasicConv2d<T>, 3> layers_;
};

// head -> B x [conv-relu-conv, scaled residual] -> body conv + global skip
// -> (conv, x2 shuffle) stages -> output conv.
template <typename T>
class BasicEdsr final : public BasicSrModel<T>
{
public:
    using typename BasicSrModel<T>::Tensor;
    using typename BasicSrModel<T>::Tape;
    using typename BasicSrModel<T>::NamedTensor;

    BasicEdsr(const EdsrSpec &spec, std::uint64_t seed);

    const EdsrSpec &spec() const noexcept { return spec_; }

    Architecture architecture() const noexcept override { return Architecture::Edsr; }
    Tensor forward(Tape &tape, const Tensor &input) const override;
    std::vector<NamedTensor> named_parameters() const override;
    std::string spec_text() const override { return spec_.serialize(); }
    std::size_t channels() const noexcept override { return spec_.channels; }
    std::size_t upscale() const noexcept override { return spec_.upscale; }

private:
    struct ResidualBlock
    {
        BasicConv2d<T> first;
        BasicConv2d<T> second;
    };

    EdsrSpec spec_;
    BasicConv2d<T> head_;
    std::vector<ResidualBlock> blocks_;
    BasicConv2d<T> body_;
    std::vector<BasicConv2d<T>> upsample_;
    BasicConv2d<T> output_;
};

extern template class BasicSrModel<float>;
extern template class BasicSrModel<double>;
extern template class BasicSrcnn<float>;
extern template class BasicSrcnn<double>;
extern template class BasicEdsr<float>;
extern template class BasicEdsr<double>;

using SrModel = BasicSrModel<float>;
using Srcnn = BasicSrcnn<float>;
using Edsr = BasicEdsr<float>;

template <typename T = float>
std::unique_ptr<BasicSrModel<T>> build_model(Architecture arch, std::string_view spec_text, std::uint64_t seed);

// Same architecture and parameter values in another precision.
template <typename To, typename From>
std::unique_ptr<BasicSrModel<To>> convert_model(const BasicSrModel<From> &model);

struct TrainingMetadata
{
    std::size_t epochs = 0;
    double final_train_loss = 0.0;
    double final_val_loss = 0.0;
    double best_val_loss = 0.0;
    std::uint64_t seed = 0;
    std::string loss;
    std::string recovery;
    double snr_db = 0.0;
};

struct Checkpoint
{
    Architecture architecture = Architecture::Srcnn;
    std::string spec;
    NormalizationStats stats;
    std::vector<NamedTensor> tensors;
    TrainingMetadata meta;
};

// Deep copy of the model's parameters.
Checkpoint make_checkpoint(const SrModel &model, const NormalizationStats &stats, const TrainingMetadata &meta);

// Rebuilds the model described by the checkpoint and loads its tensors.
// Throws std::invalid_argument when names, count or shapes disagree with
// the spec.
std::unique_ptr<SrModel> instantiate(const Checkpoint &checkpoint);

// Copies values between models built from the same spec.
void copy_parameters(const std::vector<NamedTensor> &from, const SrModel &to);

// The network input for a batch of recovered pilot grids: the HR
// pre-interpolation for SR-CNN, the LR lattice itself for EDSR.
Tensor prepare_input(const SrModel &model, std::span<const EstimatedPilotGrid> pilots,
                     const NormalizationStats &stats);

// Throws std::invalid_argument unless the model can map this lattice to the
// full grid.
void check_compatible(const SrModel &model, const EstimatedPilotGrid &pilots);

// Loaded checkpoint ready for inference; safe to share across threads.
class SrEstimator
{
public:
    explicit SrEstimator(const Checkpoint &checkpoint);

    Architecture architecture() const noexcept { return model_->architecture(); }
    const SrModel &model() const noexcept { return *model_; }
    const NormalizationStats &stats() const noexcept { return stats_; }

    GridEstimate estimate(const EstimatedPilotGrid &pilots) const;
    std::vector<GridEstimate> estimate(std::span<const EstimatedPilotGrid> pilots, std::size_t batch = 8) const;

private:
    std::unique_ptr<SrModel> model_;
    NormalizationStats stats_;
};

// Pre-interpolate, run the network, decode. Rejects non-SR-CNN checkpoints.
GridEstimate srcnn_pipeline(const EstimatedPilotGrid &pilots, const Checkpoint &checkpoint);

// LR lattice straight through the network. Rejects non-EDSR checkpoints.
GridEstimate edsr_pipeline(const EstimatedPilotGrid &pilots, const Checkpoint &checkpoint);

} // namespace csisr::sr
