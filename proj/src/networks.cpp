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

#include "csisr/networks.hpp"

#include "csisr/parallel.hpp"
#include "csisr/text.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <stdexcept>

namespace csisr::sr
{

std::string_view to_string(Architecture arch) noexcept
{
    switch (arch)
    {
    case Architecture::Srcnn:
        return "srcnn";
    case Architecture::Edsr:
        return "edsr";
    }
    return "unknown";
}

Architecture parse_architecture(std::string_view name)
{
    if (name == "srcnn")
        return Architecture::Srcnn;
    if (name == "edsr")
        return Architecture::Edsr;
    throw std::invalid_argument("unknown architecture '" + std::string(name) + "' (expected srcnn or edsr)");
}

template <typename T>
BasicConv2d<T> BasicConv2d<T>::kaiming(std::size_t in, std::size_t out, std::size_t kernel, Rng &rng)
{
    BasicConv2d layer;
    layer.weight = autograd::BasicTensor<T>({out, in, kernel, kernel}, true);
    layer.bias = autograd::BasicTensor<T>({out}, true);
    std::normal_distribution<double> normal(0.0, std::sqrt(2.0 / static_cast<double>(in * kernel * kernel)));
    for (auto &w : layer.weight.data())
        w = static_cast<T>(static_cast<float>(normal(rng)));
    return layer;
}

namespace
{

std::map<std::string, std::string> spec_fields(std::string_view text, std::initializer_list<const char *> keys,
                                               const char *what)
{
    auto kv = text::parse_key_values(text, what);
    for (const char *k : keys)
        if (!kv.count(k))
            throw std::invalid_argument(std::string(what) + ": missing '" + k + "'");
    if (kv.size() != keys.size())
        for (const auto &[k, v] : kv)
            if (std::find_if(keys.begin(), keys.end(), [&](const char *e) { return k == e; }) == keys.end())
                throw std::invalid_argument(std::string(what) + ": unknown key '" + k + "'");
    return kv;
}

bool is_power_of_two(std::size_t v) noexcept { return v != 0 && (v & (v - 1)) == 0; }

template <typename T>
void push_conv(std::vector<BasicNamedTensor<T>> &out, const std::string &prefix, const BasicConv2d<T> &c)
{
    out.push_back({prefix + ".weight", c.weight});
    out.push_back({prefix + ".bias", c.bias});
}

} // namespace

std::string SrcnnSpec::serialize() const
{
    return "channels=" + std::to_string(channels) + "\nkernels=" + std::to_string(kernels[0]) + "," +
           std::to_string(kernels[1]) + "," + std::to_string(kernels[2]) + "\nwidths=" + std::to_string(widths[0]) +
           "," + std::to_string(widths[1]) + "\npre_interp=" + std::string(csisr::to_string(pre_interp)) + "\n";
}

SrcnnSpec SrcnnSpec::parse(std::string_view body)
{
    const auto kv = spec_fields(body, {"channels", "kernels", "widths", "pre_interp"}, "srcnn spec");
    SrcnnSpec spec;
    spec.channels = text::parse_size(kv.at("channels"), "channels");
    const auto k = text::parse_size_list(kv.at("kernels"), "kernels");
    const auto w = text::parse_size_list(kv.at("widths"), "widths");
    if (k.size() != 3 || w.size() != 2)
        throw std::invalid_argument("srcnn spec: expected 3 kernels and 2 widths");
    spec.kernels = {k[0], k[1], k[2]};
    spec.widths = {w[0], w[1]};
    spec.pre_interp = parse_interp_mode(kv.at("pre_interp"));
    spec.validate();
    return spec;
}

void SrcnnSpec::validate() const
{
    if (channels == 0 || widths[0] == 0 || widths[1] == 0)
        throw std::invalid_argument("srcnn spec: channel counts must be positive");
    for (auto k : kernels)
        if (k % 2 == 0)
            throw std::invalid_argument("srcnn spec: kernel sizes must be odd");
}

std::string EdsrSpec::serialize() const
{
    return "channels=" + std::to_string(channels) + "\nblocks=" + std::to_string(blocks) +
           "\nfeatures=" + std::to_string(features) + "\nres_scale=" + text::format_double(res_scale) +
           "\nupscale=" + std::to_string(upscale) + "\n";
}

EdsrSpec EdsrSpec::parse(std::string_view body)
{
    const auto kv = spec_fields(body, {"channels", "blocks", "features", "res_scale", "upscale"}, "edsr spec");
    EdsrSpec spec;
    spec.channels = text::parse_size(kv.at("channels"), "channels");
    spec.blocks = text::parse_size(kv.at("blocks"), "blocks");
    spec.features = text::parse_size(kv.at("features"), "features");
    spec.res_scale = static_cast<float>(text::parse_double(kv.at("res_scale"), "res_scale"));
    spec.upscale = text::parse_size(kv.at("upscale"), "upscale");
    spec.validate();
    return spec;
}

void EdsrSpec::validate() const
{
    if (channels == 0 || features == 0)
        throw std::invalid_argument("edsr spec: channel counts must be positive");
    if (!std::isfinite(res_scale))
        throw std::invalid_argument("edsr spec: residual scale must be finite");
    if (upscale < 2 || !is_power_of_two(upscale))
        throw std::invalid_argument("edsr spec: upscale must be a power of two >= 2, got " + std::to_string(upscale));
}

template <typename T>
std::vector<autograd::BasicTensor<T>> BasicSrModel<T>::parameters() const
{
    std::vector<Tensor> out;
    for (auto &p : named_parameters())
        out.push_back(p.tensor);
    return out;
}

template <typename T>
std::size_t BasicSrModel<T>::parameter_count() const
{
    std::size_t n = 0;
    for (const auto &p : named_parameters())
        n += p.tensor.numel();
    return n;
}

template <typename T>
BasicSrcnn<T>::BasicSrcnn(const SrcnnSpec &spec, std::uint64_t seed) : spec_(spec)
{
    spec_.validate();
    Rng rng(seed);
    using Conv = BasicConv2d<T>;
    layers_[0] = Conv::kaiming(spec_.channels, spec_.widths[0], spec_.kernels[0], rng);
    layers_[1] = Conv::kaiming(spec_.widths[0], spec_.widths[1], spec_.kernels[1], rng);
    layers_[2] = Conv::kaiming(spec_.widths[1], spec_.channels, spec_.kernels[2], rng);
}

template <typename T>
auto BasicSrcnn<T>::forward(Tape &tape, const Tensor &input) const -> Tensor
{
    auto h = autograd::relu(tape, layers_[0](tape, input));
    h = autograd::relu(tape, layers_[1](tape, h));
    return layers_[2](tape, h);
}

template <typename T>
auto BasicSrcnn<T>::named_parameters() const -> std::vector<NamedTensor>
{
    std::vector<NamedTensor> out;
    for (std::size_t l = 0; l < layers_.size(); ++l)
        push_conv(out, "conv" + std::to_string(l + 1), layers_[l]);
    return out;
}

template <typename T>
BasicEdsr<T>::BasicEdsr(const EdsrSpec &spec, std::uint64_t seed) : spec_(spec)
{
    spec_.validate();
    Rng rng(seed);
    using Conv2d = BasicConv2d<T>;
    const std::size_t f = spec_.features;
    head_ = Conv2d::kaiming(spec_.channels, f, 3, rng);
    for (std::size_t b = 0; b < spec_.blocks; ++b)
    {
        auto first = Conv2d::kaiming(f, f, 3, rng);
        auto second = Conv2d::kaiming(f, f, 3, rng);
        blocks_.push_back({std::move(first), std::move(second)});
    }
    body_ = Conv2d::kaiming(f, f, 3, rng);
    for (std::size_t r = spec_.upscale; r > 1; r /= 2)
        upsample_.push_back(Conv2d::kaiming(f, 4 * f, 3, rng));
    output_ = Conv2d::kaiming(f, spec_.channels, 3, rng);
}

template <typename T>
auto BasicEdsr<T>::forward(Tape &tape, const Tensor &input) const -> Tensor
{
    const auto head = head_(tape, input);
    auto h = head;
    for (const auto &block : blocks_)
    {
        auto t = autograd::relu(tape, block.first(tape, h));
        t = block.second(tape, t);
        h = autograd::add(tape, h, autograd::scale(tape, t, static_cast<T>(spec_.res_scale)));
    }
    h = autograd::add(tape, body_(tape, h), head);
    for (const auto &up : upsample_)
        h = autograd::pixel_shuffle(tape, up(tape, h), 2);
    return output_(tape, h);
}

template <typename T>
auto BasicEdsr<T>::named_parameters() const -> std::vector<NamedTensor>
{
    std::vector<NamedTensor> out;
    push_conv(out, "head", head_);
    for (std::size_t b = 0; b < blocks_.size(); ++b)
    {
        const std::string prefix = "blocks." + std::to_string(b);
        push_conv(out, prefix + ".conv1", blocks_[b].first);
        push_conv(out, prefix + ".conv2", blocks_[b].second);
    }
    push_conv(out, "body", body_);
    for (std::size_t u = 0; u < upsample_.size(); ++u)
        push_conv(out, "upsample." + std::to_string(u), upsample_[u]);
    push_conv(out, "output", output_);
    return out;
}

template class BasicSrModel<float>;
template class BasicSrModel<double>;
template class BasicSrcnn<float>;
template class BasicSrcnn<double>;
template class BasicEdsr<float>;
template class BasicEdsr<double>;

template <typename T>
std::unique_ptr<BasicSrModel<T>> build_model(Architecture arch, std::string_view spec_text, std::uint64_t seed)
{
    switch (arch)
    {
    case Architecture::Srcnn:
        return std::make_unique<BasicSrcnn<T>>(SrcnnSpec::parse(spec_text), seed);
    case Architecture::Edsr:
        return std::make_unique<BasicEdsr<T>>(EdsrSpec::parse(spec_text), seed);
    }
    throw std::invalid_argument("unknown architecture id " + std::to_string(static_cast<std::uint32_t>(arch)));
}

template std::unique_ptr<BasicSrModel<float>> build_model<float>(Architecture, std::string_view, std::uint64_t);
template std::unique_ptr<BasicSrModel<double>> build_model<double>(Architecture, std::string_view, std::uint64_t);

template <typename To, typename From>
std::unique_ptr<BasicSrModel<To>> convert_model(const BasicSrModel<From> &model)
{
    auto out = build_model<To>(model.architecture(), model.spec_text(), 0);
    const auto src = model.named_parameters();
    auto dst = out->named_parameters();
    for (std::size_t k = 0; k < src.size(); ++k)
        std::copy(src[k].tensor.data().begin(), src[k].tensor.data().end(), dst[k].tensor.data().begin());
    return out;
}

template std::unique_ptr<BasicSrModel<double>> convert_model<double, float>(const BasicSrModel<float> &);

Checkpoint make_checkpoint(const SrModel &model, const NormalizationStats &stats, const TrainingMetadata &meta)
{
    Checkpoint ck;
    ck.architecture = model.architecture();
    ck.spec = model.spec_text();
    ck.stats = stats;
    ck.meta = meta;
    for (auto &p : model.named_parameters())
        ck.tensors.push_back({p.name, p.tensor.clone()});
    return ck;
}

void copy_parameters(const std::vector<NamedTensor> &from, const SrModel &to)
{
    auto targets = to.named_parameters();
    if (from.size() != targets.size())
        throw std::invalid_argument("parameter count mismatch: got " + std::to_string(from.size()) +
                                    " tensors, model has " + std::to_string(targets.size()));
    for (std::size_t k = 0; k < targets.size(); ++k)
    {
        if (from[k].name != targets[k].name)
            throw std::invalid_argument("parameter name mismatch at index " + std::to_string(k) + ": '" +
                                        from[k].name + "' vs '" + targets[k].name + "'");
        if (from[k].tensor.shape() != targets[k].tensor.shape())
            throw std::invalid_argument("parameter shape mismatch for '" + targets[k].name + "': " +
                                        autograd::to_string(from[k].tensor.shape()) + " vs " +
                                        autograd::to_string(targets[k].tensor.shape()));
        auto src = from[k].tensor.data();
        std::copy(src.begin(), src.end(), targets[k].tensor.data().begin());
    }
}

std::unique_ptr<SrModel> instantiate(const Checkpoint &checkpoint)
{
    checkpoint.stats.validate();
    auto model = build_model(checkpoint.architecture, checkpoint.spec, 0);
    copy_parameters(checkpoint.tensors, *model);
    return model;
}

void check_compatible(const SrModel &model, const EstimatedPilotGrid &pilots)
{
    const auto &g = pilots.grid_dims;
    if (model.channels() != image_channels(g.n_r, g.n_t))
        throw std::invalid_argument("model expects " + std::to_string(model.channels()) + " channels, grid " +
                                    to_string(g) + " gives " + std::to_string(image_channels(g.n_r, g.n_t)));
    if (model.architecture() != Architecture::Edsr)
        return;
    const std::size_t r = model.upscale();
    const auto &p = pilots.pattern;
    if (p.freq_stride != r || p.time_stride != r || pilots.freq_count() * r != g.n_sc ||
        pilots.time_count() * r != g.n_s)
        throw std::invalid_argument("edsr upscale " + std::to_string(r) + " does not map a " +
                                    std::to_string(pilots.freq_count()) + "x" + std::to_string(pilots.time_count()) +
                                    " lattice (strides " + std::to_string(p.freq_stride) + "/" +
                                    std::to_string(p.time_stride) + ") onto " + to_string(g));
}

Tensor prepare_input(const SrModel &model, std::span<const EstimatedPilotGrid> pilots,
                     const NormalizationStats &stats)
{
    if (pilots.empty())
        throw std::invalid_argument("prepare_input: empty batch");
    for (const auto &p : pilots)
    {
        if (!(p.grid_dims == pilots.front().grid_dims) || !(p.pattern == pilots.front().pattern))
            throw std::invalid_argument("prepare_input: mixed grid dimensions or pilot patterns in batch");
        check_compatible(model, p);
    }
    std::vector<GridEstimate> images(pilots.size());
    if (model.architecture() == Architecture::Srcnn)
    {
        const auto mode = static_cast<const Srcnn &>(model).spec().pre_interp;
        parallel_for(pilots.size(), [&](std::size_t k) { images[k] = interpolate(pilots[k], mode); });
    }
    else
    {
        for (std::size_t k = 0; k < pilots.size(); ++k)
            images[k] = pilots[k].values;
    }
    return to_channel_image<double>(images, stats);
}

SrEstimator::SrEstimator(const Checkpoint &checkpoint) : model_(instantiate(checkpoint)), stats_(checkpoint.stats)
{
}

GridEstimate SrEstimator::estimate(const EstimatedPilotGrid &pilots) const
{
    return std::move(estimate(std::span(&pilots, 1)).front());
}

std::vector<GridEstimate> SrEstimator::estimate(std::span<const EstimatedPilotGrid> pilots, std::size_t batch) const
{
    if (batch == 0)
        throw std::invalid_argument("estimate: batch size must be positive");
    std::vector<GridEstimate> out(pilots.size());
    const std::size_t chunks = (pilots.size() + batch - 1) / batch;
    parallel_for(chunks, [&](std::size_t c) {
        const std::size_t first = c * batch;
        const auto slice = pilots.subspan(first, std::min(batch, pilots.size() - first));
        auto tape = Tape::inference();
        const auto y = model_->forward(tape, prepare_input(*model_, slice, stats_));
        auto grids = from_channel_image<double>(y, stats_, slice.front().grid_dims.n_r, slice.front().grid_dims.n_t);
        for (std::size_t k = 0; k < slice.size(); ++k)
        {
            grids[k].set_frame_id(slice[k].values.frame_id());
            out[first + k] = std::move(grids[k]);
        }
    });
    return out;
}

GridEstimate srcnn_pipeline(const EstimatedPilotGrid &pilots, const Checkpoint &checkpoint)
{
    if (checkpoint.architecture != Architecture::Srcnn)
        throw std::invalid_argument("srcnn_pipeline: checkpoint holds an " +
                                    std::string(to_string(checkpoint.architecture)) + " model");
    return SrEstimator(checkpoint).estimate(pilots);
}

GridEstimate edsr_pipeline(const EstimatedPilotGrid &pilots, const Checkpoint &checkpoint)
{
    if (checkpoint.architecture != Architecture::Edsr)
        throw std::invalid_argument("edsr_pipeline: checkpoint holds an " +
                                    std::string(to_string(checkpoint.architecture)) + " model");
    return SrEstimator(checkpoint).estimate(pilots);
}

} // namespace csisr::sr
