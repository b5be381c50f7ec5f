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

#include "csisr/datastore.hpp"

#include "csisr/text.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

namespace csisr::store
{

std::string_view to_string(ErrorKind kind) noexcept
{
    switch (kind)
    {
    case ErrorKind::Io:
        return "I/O error";
    case ErrorKind::BadMagic:
        return "bad magic";
    case ErrorKind::VersionMismatch:
        return "version mismatch";
    case ErrorKind::Truncated:
        return "truncated file";
    case ErrorKind::Malformed:
        return "malformed file";
    case ErrorKind::UnknownArchitecture:
        return "unknown architecture";
    case ErrorKind::TensorMismatch:
        return "tensor mismatch";
    }
    return "error";
}

FormatError::FormatError(ErrorKind kind, const std::string &detail)
    : std::runtime_error(std::string(to_string(kind)) + ": " + detail), kind_(kind)
{
}

namespace
{

constexpr char kDatasetMagic[4] = {'C', 'S', 'I', 'D'};
constexpr char kCheckpointMagic[4] = {'C', 'S', 'C', 'K'};

class Writer
{
public:
    void bytes(const void *p, std::size_t n)
    {
        const auto *b = static_cast<const std::uint8_t *>(p);
        out_.insert(out_.end(), b, b + n);
    }
    void u32(std::uint32_t v)
    {
        for (int k = 0; k < 4; ++k)
            out_.push_back(static_cast<std::uint8_t>(v >> (8 * k)));
    }
    void u64(std::uint64_t v)
    {
        for (int k = 0; k < 8; ++k)
            out_.push_back(static_cast<std::uint8_t>(v >> (8 * k)));
    }
    void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }
    void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
    void size32(std::size_t v, const char *what)
    {
        if (v > 0xffffffffu)
            throw FormatError(ErrorKind::Malformed, std::string(what) + " does not fit in 32 bits");
        u32(static_cast<std::uint32_t>(v));
    }

    std::vector<std::uint8_t> take() { return std::move(out_); }
    void reserve(std::size_t n) { out_.reserve(n); }

private:
    std::vector<std::uint8_t> out_;
};

class Reader
{
public:
    Reader(std::span<const std::uint8_t> in, const char *what) : in_(in), what_(what) {}

    std::span<const std::uint8_t> take(std::size_t n)
    {
        if (in_.size() - pos_ < n)
            throw FormatError(ErrorKind::Truncated, std::string(what_) + ": needed " + std::to_string(n) +
                                                        " more bytes at offset " + std::to_string(pos_) + ", " +
                                                        std::to_string(in_.size() - pos_) + " left");
        auto s = in_.subspan(pos_, n);
        pos_ += n;
        return s;
    }
    std::uint32_t u32()
    {
        const auto b = take(4);
        std::uint32_t v = 0;
        for (int k = 0; k < 4; ++k)
            v |= static_cast<std::uint32_t>(b[k]) << (8 * k);
        return v;
    }
    std::uint64_t u64()
    {
        const auto b = take(8);
        std::uint64_t v = 0;
        for (int k = 0; k < 8; ++k)
            v |= static_cast<std::uint64_t>(b[k]) << (8 * k);
        return v;
    }
    float f32() { return std::bit_cast<float>(u32()); }
    double f64() { return std::bit_cast<double>(u64()); }
    std::size_t remaining() const noexcept { return in_.size() - pos_; }

    void magic(const char (&expected)[4])
    {
        const auto b = take(4);
        if (std::memcmp(b.data(), expected, 4) != 0)
            throw FormatError(ErrorKind::BadMagic, std::string(what_) + ": expected \"" +
                                                       std::string(expected, 4) + "\", found \"" +
                                                       std::string(reinterpret_cast<const char *>(b.data()), 4) +
                                                       "\"");
    }
    void version(std::uint32_t expected)
    {
        const auto v = u32();
        if (v != expected)
            throw FormatError(ErrorKind::VersionMismatch, std::string(what_) + ": file version " +
                                                              std::to_string(v) + ", supported " +
                                                              std::to_string(expected));
    }
    void finish()
    {
        if (remaining() != 0)
            throw FormatError(ErrorKind::Malformed,
                              std::string(what_) + ": " + std::to_string(remaining()) + " trailing bytes");
    }

private:
    std::span<const std::uint8_t> in_;
    std::size_t pos_ = 0;
    const char *what_;
};

struct DatasetHeader
{
    std::size_t frames = 0;
    GridDims dims;
};

DatasetHeader read_header(Reader &r)
{
    r.magic(kDatasetMagic);
    r.version(kDatasetVersion);
    DatasetHeader h;
    h.frames = r.u32();
    h.dims.n_sc = r.u32();
    h.dims.n_s = r.u32();
    h.dims.n_r = r.u32();
    h.dims.n_t = r.u32();
    r.u32();  // flags, reserved
    return h;
}

const char *const kMetaPrefix = "meta.";

std::string spec_with_meta(const sr::Checkpoint &ck)
{
    const auto &m = ck.meta;
    std::string s = ck.spec;
    if (!s.empty() && s.back() != '\n')
        s += '\n';
    s += "meta.epochs=" + std::to_string(m.epochs) + "\n";
    s += "meta.final_train_loss=" + text::format_double(m.final_train_loss) + "\n";
    s += "meta.final_val_loss=" + text::format_double(m.final_val_loss) + "\n";
    s += "meta.best_val_loss=" + text::format_double(m.best_val_loss) + "\n";
    s += "meta.seed=" + std::to_string(m.seed) + "\n";
    s += "meta.loss=" + m.loss + "\n";
    s += "meta.recovery=" + m.recovery + "\n";
    s += "meta.snr_db=" + text::format_double(m.snr_db) + "\n";
    return s;
}

// Splits the stored text back into the model spec and metadata.
void split_spec(std::string_view stored, sr::Checkpoint &ck)
{
    std::string spec;
    std::string meta;
    std::size_t start = 0;
    while (start < stored.size())
    {
        auto end = stored.find('\n', start);
        if (end == std::string_view::npos)
            end = stored.size();
        const auto line = stored.substr(start, end - start);
        (text::trim(line).starts_with(kMetaPrefix) ? meta : spec).append(line).append("\n");
        start = end + 1;
    }
    ck.spec = spec;
    for (const auto &[key, value] : text::parse_key_values(meta, "checkpoint metadata"))
    {
        auto &m = ck.meta;
        if (key == "meta.epochs")
            m.epochs = text::parse_size(value, key);
        else if (key == "meta.final_train_loss")
            m.final_train_loss = text::parse_double(value, key);
        else if (key == "meta.final_val_loss")
            m.final_val_loss = text::parse_double(value, key);
        else if (key == "meta.best_val_loss")
            m.best_val_loss = text::parse_double(value, key);
        else if (key == "meta.seed")
            m.seed = text::parse_u64(value, key);
        else if (key == "meta.loss")
            m.loss = value;
        else if (key == "meta.recovery")
            m.recovery = value;
        else if (key == "meta.snr_db")
            m.snr_db = text::parse_double(value, key);
        else
            throw std::invalid_argument("unknown metadata key '" + key + "'");
    }
}

} // namespace

std::vector<std::uint8_t> encode_dataset(std::span<const ChannelGrid> frames)
{
    require_uniform_dims(frames, "write_dataset");
    const auto d = frames.front().dims();
    Writer w;
    w.reserve(kDatasetHeaderBytes + frames.size() * d.size() * 8);
    w.bytes(kDatasetMagic, 4);
    w.u32(kDatasetVersion);
    w.size32(frames.size(), "frame count");
    w.size32(d.n_sc, "n_sc");
    w.size32(d.n_s, "n_s");
    w.size32(d.n_r, "n_r");
    w.size32(d.n_t, "n_t");
    w.u32(0);
    for (const auto &f : frames)
        for (const auto &v : f.values())
        {
            w.f32(v.real());
            w.f32(v.imag());
        }
    return w.take();
}

std::vector<ChannelGrid> decode_dataset(std::span<const std::uint8_t> bytes)
{
    Reader r(bytes, "dataset");
    const auto h = read_header(r);
    const auto payload = static_cast<unsigned __int128>(h.frames) * h.dims.size() * 8;
    if (payload > r.remaining())
        throw FormatError(ErrorKind::Truncated, "dataset: header announces " + std::to_string(h.frames) +
                                                    " frames of " + to_string(h.dims) + " but only " +
                                                    std::to_string(r.remaining()) + " payload bytes follow");
    std::vector<ChannelGrid> frames;
    frames.reserve(h.frames);
    for (std::size_t j = 0; j < h.frames; ++j)
    {
        ChannelGrid g(h.dims, static_cast<std::int64_t>(j));
        for (auto &v : g.values())
        {
            const float re = r.f32();
            v = {re, r.f32()};
        }
        frames.push_back(std::move(g));
    }
    r.finish();
    return frames;
}

std::vector<std::uint8_t> read_file(const std::filesystem::path &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw FormatError(ErrorKind::Io, "cannot open '" + path.string() + "' for reading");
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad())
        throw FormatError(ErrorKind::Io, "failed reading '" + path.string() + "'");
    return bytes;
}

void write_file(const std::filesystem::path &path, std::span<const std::uint8_t> bytes)
{
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw FormatError(ErrorKind::Io, "cannot open '" + path.string() + "' for writing");
    out.write(reinterpret_cast<const char *>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    out.close();
    if (!out)
        throw FormatError(ErrorKind::Io, "failed writing '" + path.string() + "'");
}

void write_dataset(std::span<const ChannelGrid> frames, const std::filesystem::path &path)
{
    write_file(path, encode_dataset(frames));
}

std::vector<ChannelGrid> read_dataset(const std::filesystem::path &path)
{
    return decode_dataset(read_file(path));
}

DatasetInfo read_dataset_info(const std::filesystem::path &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw FormatError(ErrorKind::Io, "cannot open '" + path.string() + "' for reading");
    std::vector<std::uint8_t> head(kDatasetHeaderBytes);
    in.read(reinterpret_cast<char *>(head.data()), static_cast<std::streamsize>(head.size()));
    head.resize(static_cast<std::size_t>(in.gcount()));
    Reader r(head, "dataset");
    const auto h = read_header(r);
    return {h.dims, h.frames};
}

std::vector<std::uint8_t> encode_checkpoint(const sr::Checkpoint &ck)
{
    ck.stats.validate();
    Writer w;
    w.bytes(kCheckpointMagic, 4);
    w.u32(kCheckpointVersion);
    w.u32(static_cast<std::uint32_t>(ck.architecture));
    const auto spec = spec_with_meta(ck);
    w.size32(spec.size(), "spec length");
    w.bytes(spec.data(), spec.size());
    w.f64(ck.stats.scale);
    w.size32(ck.tensors.size(), "tensor count");
    for (const auto &t : ck.tensors)
    {
        w.size32(t.name.size(), "tensor name length");
        w.bytes(t.name.data(), t.name.size());
        w.size32(t.tensor.rank(), "tensor rank");
        for (auto e : t.tensor.shape())
            w.size32(e, "tensor extent");
        for (float v : t.tensor.data())
            w.f32(v);
    }
    return w.take();
}

sr::Checkpoint decode_checkpoint(std::span<const std::uint8_t> bytes)
{
    Reader r(bytes, "checkpoint");
    r.magic(kCheckpointMagic);
    r.version(kCheckpointVersion);
    sr::Checkpoint ck;
    const auto arch = r.u32();
    if (arch != static_cast<std::uint32_t>(sr::Architecture::Srcnn) &&
        arch != static_cast<std::uint32_t>(sr::Architecture::Edsr))
        throw FormatError(ErrorKind::UnknownArchitecture, "checkpoint: architecture id " + std::to_string(arch));
    ck.architecture = static_cast<sr::Architecture>(arch);

    const auto spec_len = r.u32();
    const auto spec_bytes = r.take(spec_len);
    try
    {
        split_spec(std::string_view(reinterpret_cast<const char *>(spec_bytes.data()), spec_bytes.size()), ck);
    }
    catch (const std::invalid_argument &e)
    {
        throw FormatError(ErrorKind::Malformed, std::string("checkpoint spec: ") + e.what());
    }

    ck.stats.scale = r.f64();
    if (!std::isfinite(ck.stats.scale) || ck.stats.scale <= 0.0)
        throw FormatError(ErrorKind::Malformed, "checkpoint: normalization scale must be finite and > 0");

    const auto count = r.u32();
    for (std::uint32_t k = 0; k < count; ++k)
    {
        const auto name_len = r.u32();
        const auto name = r.take(name_len);
        const auto rank = r.u32();
        autograd::Shape shape(rank);
        for (auto &e : shape)
            e = r.u32();
        const auto n = autograd::element_count(shape);
        if (static_cast<unsigned __int128>(n) * 4 > r.remaining())
            throw FormatError(ErrorKind::Truncated, "checkpoint: tensor payload of " + autograd::to_string(shape) +
                                                        " exceeds the remaining " + std::to_string(r.remaining()) +
                                                        " bytes");
        std::vector<float> values(n);
        for (auto &v : values)
            v = r.f32();
        ck.tensors.push_back({std::string(reinterpret_cast<const char *>(name.data()), name.size()),
                              autograd::Tensor(std::move(shape), std::move(values))});
    }
    r.finish();

    std::unique_ptr<sr::SrModel> model;
    try
    {
        model = sr::build_model(ck.architecture, ck.spec, 0);
    }
    catch (const std::invalid_argument &e)
    {
        throw FormatError(ErrorKind::Malformed, std::string("checkpoint spec: ") + e.what());
    }
    try
    {
        sr::copy_parameters(ck.tensors, *model);
    }
    catch (const std::invalid_argument &e)
    {
        throw FormatError(ErrorKind::TensorMismatch, std::string("checkpoint: ") + e.what());
    }
    return ck;
}

void write_checkpoint(const sr::Checkpoint &checkpoint, const std::filesystem::path &path)
{
    write_file(path, encode_checkpoint(checkpoint));
}

sr::Checkpoint read_checkpoint(const std::filesystem::path &path)
{
    return decode_checkpoint(read_file(path));
}

} // namespace csisr::store
