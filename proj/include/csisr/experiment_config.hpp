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

// Flat key = value experiment configuration shared by every subcommand.
//
// Each key has a default; files and --override assignments replace values
// and unknown keys are rejected. resolve() turns the text into typed
// settings and validates them. Relative file paths are taken relative to
// `output`.

#include "csisr/fading_channel.hpp"
#include "csisr/interpolation.hpp"
#include "csisr/metrics.hpp"
#include "csisr/training.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace csisr::cli
{

// Problems with the configuration or the command line (exit code 1).
class ConfigError : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

// An estimation method as named in configs and reports: one of the
// interpolation modes or an SR architecture.
struct Method
{
    std::optional<InterpMode> interp;
    std::optional<sr::Architecture> network;

    static Method parse(std::string_view name);
    std::string name() const;
    bool operator==(const Method &) const = default;
};

struct ResolvedConfig
{
    std::uint64_t seed = 1;
    std::filesystem::path output;
    ChannelModelConfig channel;
    PilotPattern pilots;
    double snr_db = 20.0;
    RecoveryMethod recovery = RecoveryMethod::LeastSquares;
    Method method;
    sr::TrainConfig train;
    sr::SrcnnSpec srcnn;
    sr::EdsrSpec edsr;
    std::filesystem::path train_dataset;
    std::filesystem::path val_dataset;
    std::size_t train_frames = 0;
    std::size_t val_frames = 0;
    std::vector<Method> eval_methods;
    std::vector<RecoveryMethod> eval_recoveries;
    std::filesystem::path report;
    metrics::NmseAveraging nmse = metrics::NmseAveraging::PerFrame;
    std::optional<double> peak;  // evaluation-set max-abs when empty

    // Checkpoint for a network trained with the given recovery.
    std::filesystem::path checkpoint(sr::Architecture arch, RecoveryMethod recovery) const;

    std::map<std::string, std::string> checkpoint_keys;  // raw checkpoint* assignments
};

class ExperimentConfig
{
public:
    ExperimentConfig();

    // Parses a config document of "key = value" lines; lines starting with '#' are comments.
    static ExperimentConfig from_text(std::string_view text);
    static ExperimentConfig from_file(const std::filesystem::path &path);

    void set(const std::string &key, const std::string &value);
    // "key=value"
    void apply_override(std::string_view assignment);
    const std::string &get(const std::string &key) const;

    // Every key with its current value, sorted by key.
    const std::map<std::string, std::string> &values() const noexcept { return values_; }
    // The "# key = value" block echoed into outputs.
    std::string echo(std::string_view prefix = "# ") const;

    ResolvedConfig resolve() const;

private:
    std::map<std::string, std::string> values_;
};

} // namespace csisr::cli
