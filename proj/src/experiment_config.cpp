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

#include "csisr/experiment_config.hpp"

#include "csisr/text.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace csisr::cli
{

namespace
{

const std::map<std::string, std::string> &defaults()
{
    static const std::map<std::string, std::string> d = [] {
        const ChannelModelConfig ch;
        const sr::TrainConfig tr;
        const sr::SrcnnSpec sc;
        const sr::EdsrSpec ed;
        return std::map<std::string, std::string>{
            {"seed", "1"},
            {"output", "."},
            {"channel.carrier_freq", text::format_double(ch.carrier_freq)},
            {"channel.bandwidth", text::format_double(ch.bandwidth)},
            {"channel.n_sc", std::to_string(ch.n_sc)},
            {"channel.n_s", std::to_string(ch.n_s)},
            {"channel.n_r", std::to_string(ch.n_r)},
            {"channel.n_t", std::to_string(ch.n_t)},
            {"channel.subcarrier_spacing", text::format_double(ch.subcarrier_spacing)},
            {"channel.slot_duration", text::format_double(ch.slot_duration)},
            {"channel.n_paths", std::to_string(ch.n_paths)},
            {"channel.rms_delay_spread", text::format_double(ch.rms_delay_spread)},
            {"channel.max_doppler", text::format_double(ch.max_doppler)},
            {"channel.rician_k_db", text::format_double(ch.rician_k_db)},
            {"channel.rx_corr", text::format_double(ch.rx_corr)},
            {"channel.tx_corr", text::format_double(ch.tx_corr)},
            {"pilot.stride", "4"},
            {"pilot.offset", "0"},
            {"pilot.freq_stride", ""},
            {"pilot.time_stride", ""},
            {"pilot.freq_offset", ""},
            {"pilot.time_offset", ""},
            {"snr_db", "20"},
            {"recovery", "ls"},
            {"interp", "srcnn"},
            {"train.epochs", std::to_string(tr.epochs)},
            {"train.batch_size", std::to_string(tr.batch_size)},
            {"train.lr", text::format_double(tr.lr)},
            {"train.loss", "auto"},
            {"train.seed", ""},
            {"train.val_split", text::format_double(tr.val_split)},
            {"train.keep_best", tr.keep_best ? "true" : "false"},
            {"srcnn.kernels", "9,5,5"},
            {"srcnn.widths", "64,32"},
            {"srcnn.pre_interp", std::string(to_string(sc.pre_interp))},
            {"edsr.blocks", std::to_string(ed.blocks)},
            {"edsr.features", std::to_string(ed.features)},
            {"edsr.res_scale", text::format_float(ed.res_scale)},
            {"dataset.train", "train.csid"},
            {"dataset.val", "val.csid"},
            {"dataset.train_frames", "200"},
            {"dataset.val_frames", "50"},
            {"checkpoint", ""},
            {"evaluate.methods", "paper_linear,paper_gaussian,srcnn,edsr"},
            {"evaluate.recoveries", "ls,mmse"},
            {"evaluate.report", "report.csv"},
            {"metrics.nmse", "per_frame"},
            {"metrics.peak", "auto"},
        };
    }();
    return d;
}

// checkpoint.<srcnn|edsr> or checkpoint.<srcnn|edsr>.<ls|mmse>
bool is_checkpoint_key(const std::string &key)
{
    const auto parts = text::split(key, '.');
    if (parts.size() < 2 || parts.size() > 3 || parts[0] != "checkpoint")
        return false;
    if (parts[1] != "srcnn" && parts[1] != "edsr")
        return false;
    return parts.size() == 2 || parts[2] == "ls" || parts[2] == "mmse";
}

template <typename Fn>
auto convert(const std::string &key, Fn &&fn)
{
    try
    {
        return fn();
    }
    catch (const ConfigError &)
    {
        throw;
    }
    catch (const std::exception &e)
    {
        throw ConfigError(key + ": " + e.what());
    }
}

bool parse_bool(const std::string &key, const std::string &v)
{
    if (v == "true" || v == "1" || v == "yes")
        return true;
    if (v == "false" || v == "0" || v == "no")
        return false;
    throw ConfigError(key + ": expected true or false, got '" + v + "'");
}

std::filesystem::path under(const std::filesystem::path &output, const std::string &p)
{
    const std::filesystem::path path(p);
    return path.is_absolute() ? path : output / path;
}

} // namespace

Method Method::parse(std::string_view name)
{
    Method m;
    if (name == "srcnn" || name == "edsr")
        m.network = sr::parse_architecture(name);
    else
        m.interp = parse_interp_mode(name);
    return m;
}

std::string Method::name() const
{
    return network ? std::string(sr::to_string(*network)) : std::string(to_string(*interp));
}

std::filesystem::path ResolvedConfig::checkpoint(sr::Architecture arch, RecoveryMethod rec) const
{
    const std::string a(sr::to_string(arch));
    const std::string r(to_string(rec));
    for (const auto &key : {"checkpoint." + a + "." + r, "checkpoint." + a})
        if (auto it = checkpoint_keys.find(key); it != checkpoint_keys.end() && !it->second.empty())
            return under(output, it->second);
    if (auto it = checkpoint_keys.find("checkpoint");
        it != checkpoint_keys.end() && !it->second.empty() && method.network == arch && recovery == rec)
        return under(output, it->second);
    return output / (a + "_" + r + ".csck");
}

ExperimentConfig::ExperimentConfig() : values_(defaults()) {}

ExperimentConfig ExperimentConfig::from_text(std::string_view text)
{
    ExperimentConfig cfg;
    std::map<std::string, std::string> kv;
    try
    {
        kv = text::parse_key_values(text, "config");
    }
    catch (const std::invalid_argument &e)
    {
        throw ConfigError(e.what());
    }
    for (const auto &[k, v] : kv)
        cfg.set(k, v);
    return cfg;
}

ExperimentConfig ExperimentConfig::from_file(const std::filesystem::path &path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot read config file '" + path.string() + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return from_text(ss.str());
}

void ExperimentConfig::set(const std::string &key, const std::string &value)
{
    if (!defaults().count(key) && !is_checkpoint_key(key))
        throw ConfigError("unknown config key '" + key + "'");
    values_[key] = std::string(text::trim(value));
}

void ExperimentConfig::apply_override(std::string_view assignment)
{
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos)
        throw ConfigError("override '" + std::string(assignment) + "' is not of the form key=value");
    set(std::string(text::trim(assignment.substr(0, eq))), std::string(assignment.substr(eq + 1)));
}

const std::string &ExperimentConfig::get(const std::string &key) const
{
    const auto it = values_.find(key);
    if (it == values_.end())
        throw ConfigError("unknown config key '" + key + "'");
    return it->second;
}

std::string ExperimentConfig::echo(std::string_view prefix) const
{
    std::string out;
    for (const auto &[k, v] : values_)
        out.append(prefix).append(k).append(" = ").append(v).append("\n");
    return out;
}

ResolvedConfig ExperimentConfig::resolve() const
{
    auto size = [&](const std::string &k) { return convert(k, [&] { return text::parse_size(get(k), k); }); };
    auto real = [&](const std::string &k) { return convert(k, [&] { return text::parse_double(get(k), k); }); };
    auto size_or = [&](const std::string &k, std::size_t fallback) { return get(k).empty() ? fallback : size(k); };

    ResolvedConfig r;
    r.seed = convert("seed", [&] { return text::parse_u64(get("seed"), "seed"); });
    r.output = get("output").empty() ? std::filesystem::path(".") : std::filesystem::path(get("output"));

    auto &ch = r.channel;
    ch.carrier_freq = real("channel.carrier_freq");
    ch.bandwidth = real("channel.bandwidth");
    ch.n_sc = size("channel.n_sc");
    ch.n_s = size("channel.n_s");
    ch.n_r = size("channel.n_r");
    ch.n_t = size("channel.n_t");
    ch.subcarrier_spacing = real("channel.subcarrier_spacing");
    ch.slot_duration = real("channel.slot_duration");
    ch.n_paths = size("channel.n_paths");
    ch.rms_delay_spread = real("channel.rms_delay_spread");
    ch.max_doppler = real("channel.max_doppler");
    ch.rician_k_db = real("channel.rician_k_db");
    ch.rx_corr = real("channel.rx_corr");
    ch.tx_corr = real("channel.tx_corr");
    convert("channel", [&] { ch.validate(); return 0; });

    const auto stride = size("pilot.stride");
    const auto offset = size("pilot.offset");
    r.pilots = {size_or("pilot.freq_offset", offset), size_or("pilot.freq_stride", stride),
                size_or("pilot.time_offset", offset), size_or("pilot.time_stride", stride)};
    convert("pilot", [&] { r.pilots.validate(ch.n_sc, ch.n_s); return 0; });

    r.snr_db = real("snr_db");
    if (std::isnan(r.snr_db) || r.snr_db == -std::numeric_limits<double>::infinity())
        throw ConfigError("snr_db: must be a number or inf");
    r.recovery = convert("recovery", [&] { return parse_recovery_method(get("recovery")); });
    r.method = convert("interp", [&] { return Method::parse(get("interp")); });

    auto &tr = r.train;
    tr.epochs = size("train.epochs");
    tr.batch_size = size("train.batch_size");
    tr.lr = real("train.lr");
    if (get("train.loss") != "auto")
        tr.loss = convert("train.loss", [&] { return sr::parse_loss_kind(get("train.loss")); });
    tr.seed = get("train.seed").empty()
                  ? r.seed
                  : convert("train.seed", [&] { return text::parse_u64(get("train.seed"), "train.seed"); });
    tr.val_split = real("train.val_split");
    tr.keep_best = parse_bool("train.keep_best", get("train.keep_best"));
    convert("train", [&] { tr.validate(); return 0; });

    const auto channels = sr::image_channels(ch.n_r, ch.n_t);
    r.srcnn.channels = channels;
    const auto kernels = convert("srcnn.kernels", [&] { return text::parse_size_list(get("srcnn.kernels"), "srcnn.kernels"); });
    const auto widths = convert("srcnn.widths", [&] { return text::parse_size_list(get("srcnn.widths"), "srcnn.widths"); });
    if (kernels.size() != 3 || widths.size() != 2)
        throw ConfigError("srcnn.kernels needs 3 entries and srcnn.widths 2");
    r.srcnn.kernels = {kernels[0], kernels[1], kernels[2]};
    r.srcnn.widths = {widths[0], widths[1]};
    r.srcnn.pre_interp = convert("srcnn.pre_interp", [&] { return parse_interp_mode(get("srcnn.pre_interp")); });
    convert("srcnn", [&] { r.srcnn.validate(); return 0; });

    r.edsr.channels = channels;
    r.edsr.blocks = size("edsr.blocks");
    r.edsr.features = size("edsr.features");
    r.edsr.res_scale = static_cast<float>(real("edsr.res_scale"));
    // The network magnifies the lattice back to the grid, so r = stride.
    r.edsr.upscale = r.pilots.freq_stride;
    if (r.method.network == sr::Architecture::Edsr)
    {
        if (r.pilots.freq_stride != r.pilots.time_stride)
            throw ConfigError("edsr requires equal pilot strides along frequency and time");
        convert("edsr", [&] { r.edsr.validate(); return 0; });
    }

    r.train_dataset = under(r.output, get("dataset.train"));
    r.val_dataset = under(r.output, get("dataset.val"));
    r.train_frames = size("dataset.train_frames");
    r.val_frames = size("dataset.val_frames");

    for (const auto &m : text::split(get("evaluate.methods"), ','))
        r.eval_methods.push_back(convert("evaluate.methods", [&] { return Method::parse(m); }));
    for (const auto &m : text::split(get("evaluate.recoveries"), ','))
        r.eval_recoveries.push_back(convert("evaluate.recoveries", [&] { return parse_recovery_method(m); }));
    r.report = under(r.output, get("evaluate.report"));
    r.nmse = convert("metrics.nmse", [&] { return metrics::parse_nmse_averaging(get("metrics.nmse")); });
    if (get("metrics.peak") != "auto")
    {
        r.peak = real("metrics.peak");
        if (!(*r.peak > 0.0) || !std::isfinite(*r.peak))
            throw ConfigError("metrics.peak: must be auto or a finite value > 0");
    }

    for (const auto &[k, v] : values_)
        if (k == "checkpoint" || k.starts_with("checkpoint."))
            r.checkpoint_keys[k] = v;
    return r;
}

} // namespace csisr::cli
