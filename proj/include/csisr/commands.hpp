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

// The four subcommands of the csisr tool as library calls, plus the
// argument-parsing entry point used by the executable.

#include "csisr/experiment_config.hpp"
#include "csisr/metrics.hpp"

#include <filesystem>
#include <ostream>
#include <vector>

namespace csisr::cli
{

// Seed streams derived from the experiment seed.
inline constexpr std::uint64_t kTrainFramesStream = 1;
inline constexpr std::uint64_t kValFramesStream = 2;
inline constexpr std::uint64_t kModelInitStream = 4;
inline constexpr std::uint64_t kEvalNoiseStream = 5;

std::string pilots_label(const PilotPattern &pattern, const GridDims &dims);
std::string scenario_label(const ChannelModelConfig &channel);

struct GenerateSummary
{
    std::filesystem::path train_path;
    std::filesystem::path val_path;
    std::size_t train_frames = 0;
    std::size_t val_frames = 0;
    GridDims dims;
};

// Writes dataset.train and dataset.val.
GenerateSummary cmd_generate(const ExperimentConfig &config, std::ostream &log);

struct TrainSummary
{
    std::filesystem::path checkpoint;
    std::filesystem::path history_path;
    sr::LossHistory history;
};

// Trains the network named by `interp` on dataset.train, holding out
// train.val_split of it for validation. Writes the checkpoint and a
// <checkpoint stem>_history.csv loss table.
TrainSummary cmd_train(const ExperimentConfig &config, std::ostream &log);

struct EvaluateSummary
{
    std::filesystem::path report;
    std::vector<metrics::MetricReport> rows;
};

// One row per (evaluate.methods x evaluate.recoveries) on dataset.val.
EvaluateSummary cmd_evaluate(const ExperimentConfig &config, std::ostream &log);

struct ReportSummary
{
    std::filesystem::path table;
    std::vector<std::filesystem::path> series;
    std::vector<metrics::MetricReport> rows;
};

// Rows of evaluate CSVs in file order; '#' lines are skipped.
std::vector<metrics::MetricReport> read_report_csv(const std::filesystem::path &path);

// Stable sort by (scenario, pilots, method); pilots compare numerically.
void sort_reports(std::vector<metrics::MetricReport> &rows);

// Merges the CSVs into <out_dir>/merged.csv and writes one
// series_<scenario>_<snr>dB_<recovery>.csv per group.
ReportSummary cmd_report(const std::vector<std::filesystem::path> &csvs, const std::filesystem::path &out_dir,
                         std::ostream &log);

// Exit status: 0 success, 1 usage or configuration error, 2 runtime error.
int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

} // namespace csisr::cli
