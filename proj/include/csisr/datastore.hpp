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

// Binary persistence for frame datasets (CSID) and checkpoints (CSCK).
// Every integer is little-endian regardless of the host; floats are IEEE
// binary32 (payloads) or binary64 (the normalization scale).
//
// CSID: "CSID" | version | frames | n_sc | n_s | n_r | n_t | flags  (u32 each)
//       then float32 (re, im) pairs ordered [frame][subcarrier][slot][rx][tx].
// CSCK: "CSCK" | version | architecture | spec length | spec text | scale (f64)
//       | tensor count | per tensor: name length, name, rank, extents, data.
//       The spec text carries the model spec followed by meta.* lines.

#include "csisr/networks.hpp"

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <vector>

namespace csisr::store
{

constexpr std::uint32_t kDatasetVersion = 1;
constexpr std::uint32_t kCheckpointVersion = 1;
constexpr std::size_t kDatasetHeaderBytes = 32;

enum class ErrorKind
{
    Io,
    BadMagic,
    VersionMismatch,
    Truncated,
    Malformed,
    UnknownArchitecture,
    TensorMismatch,
};

std::string_view to_string(ErrorKind kind) noexcept;

class FormatError : public std::runtime_error
{
public:
    FormatError(ErrorKind kind, const std::string &detail);
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

std::vector<std::uint8_t> encode_dataset(std::span<const ChannelGrid> frames);
// Frame ids become 0..frames-1.
std::vector<ChannelGrid> decode_dataset(std::span<const std::uint8_t> bytes);

void write_dataset(std::span<const ChannelGrid> frames, const std::filesystem::path &path);
std::vector<ChannelGrid> read_dataset(const std::filesystem::path &path);

// Header-only inspection: dims of one frame and the frame count.
struct DatasetInfo
{
    GridDims dims;
    std::size_t frames = 0;
};
DatasetInfo read_dataset_info(const std::filesystem::path &path);

std::vector<std::uint8_t> encode_checkpoint(const sr::Checkpoint &checkpoint);
// Validates tensor names, count and shapes against the architecture spec.
sr::Checkpoint decode_checkpoint(std::span<const std::uint8_t> bytes);

void write_checkpoint(const sr::Checkpoint &checkpoint, const std::filesystem::path &path);
sr::Checkpoint read_checkpoint(const std::filesystem::path &path);

std::vector<std::uint8_t> read_file(const std::filesystem::path &path);
void write_file(const std::filesystem::path &path, std::span<const std::uint8_t> bytes);

} // namespace csisr::store
