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

#include "csisr/ops.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <stdexcept>

namespace csisr::autograd
{

namespace
{

template <typename T>
using RowMatrix = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename T>
using MatrixView = Eigen::Map<RowMatrix<T>>;
template <typename T>
using ConstMatrixView = Eigen::Map<const RowMatrix<T>>;
template <typename T>
using ConstVectorView = Eigen::Map<const Eigen::Matrix<T, Eigen::Dynamic, 1>>;

template <typename T>
bool tracks(const BasicTape<T> &tape, std::initializer_list<const BasicTensor<T> *> inputs)
{
    if (!tape.recording())
        return false;
    return std::any_of(inputs.begin(), inputs.end(), [](const BasicTensor<T> *t) { return t->requires_grad(); });
}

template <typename T>
void require_same_shape(const BasicTensor<T> &a, const BasicTensor<T> &b, const char *op)
{
    if (a.shape() != b.shape())
        throw std::invalid_argument(std::string(op) + ": shape mismatch " + to_string(a.shape()) + " vs " +
                                    to_string(b.shape()));
}

struct ConvGeometry
{
    std::size_t batch, cin, height, width, cout, kh, kw, pad_h, pad_w;

    std::size_t patch() const noexcept { return cin * kh * kw; }
    std::size_t pixels() const noexcept { return height * width; }
    bool pointwise() const noexcept { return kh == 1 && kw == 1; }
};

// Unfolds one [cin, H, W] image into a [cin*kh*kw, H*W] patch matrix.
template <typename T>
void im2col(const T *image, const ConvGeometry &g, T *col)
{
    const auto H = static_cast<long>(g.height);
    const auto W = static_cast<long>(g.width);
    for (std::size_t c = 0; c < g.cin; ++c)
    {
        const T *plane = image + c * g.pixels();
        for (std::size_t ky = 0; ky < g.kh; ++ky)
        {
            const long dy = static_cast<long>(ky) - static_cast<long>(g.pad_h);
            for (std::size_t kx = 0; kx < g.kw; ++kx)
            {
                const long dx = static_cast<long>(kx) - static_cast<long>(g.pad_w);
                T *row = col + ((c * g.kh + ky) * g.kw + kx) * g.pixels();
                const long x_lo = std::clamp(-dx, 0L, W);
                const long x_hi = std::clamp(W - dx, 0L, W);
                for (long y = 0; y < H; ++y)
                {
                    T *dst = row + y * W;
                    const long iy = y + dy;
                    if (iy < 0 || iy >= H || x_lo >= x_hi)
                    {
                        std::fill(dst, dst + W, T(0));
                        continue;
                    }
                    std::fill(dst, dst + x_lo, T(0));
                    std::memcpy(dst + x_lo, plane + iy * W + x_lo + dx, sizeof(T) * static_cast<std::size_t>(x_hi - x_lo));
                    std::fill(dst + x_hi, dst + W, T(0));
                }
            }
        }
    }
}

// Adjoint of im2col: scatters patch-matrix gradients back onto the image.
template <typename T>
void col2im_add(const T *col, const ConvGeometry &g, T *image)
{
    const auto H = static_cast<long>(g.height);
    const auto W = static_cast<long>(g.width);
    for (std::size_t c = 0; c < g.cin; ++c)
    {
        T *plane = image + c * g.pixels();
        for (std::size_t ky = 0; ky < g.kh; ++ky)
        {
            const long dy = static_cast<long>(ky) - static_cast<long>(g.pad_h);
            for (std::size_t kx = 0; kx < g.kw; ++kx)
            {
                const long dx = static_cast<long>(kx) - static_cast<long>(g.pad_w);
                const T *row = col + ((c * g.kh + ky) * g.kw + kx) * g.pixels();
                const long x_lo = std::clamp(-dx, 0L, W);
                const long x_hi = std::clamp(W - dx, 0L, W);
                for (long y = 0; y < H; ++y)
                {
                    const long iy = y + dy;
                    if (iy < 0 || iy >= H)
                        continue;
                    const T *src = row + y * W;
                    T *dst = plane + iy * W + dx;
                    for (long x = x_lo; x < x_hi; ++x)
                        dst[x] += src[x];
                }
            }
        }
    }
}

template <typename T>
ConvGeometry conv_geometry(const BasicTensor<T> &input, const BasicTensor<T> &kernel, const BasicTensor<T> &bias)
{
    if (input.rank() != 4 || kernel.rank() != 4 || bias.rank() != 1)
        throw std::invalid_argument("conv2d: expected input [B,C,H,W], kernel [O,C,kh,kw], bias [O]; got " +
                                    to_string(input.shape()) + ", " + to_string(kernel.shape()) + ", " +
                                    to_string(bias.shape()));
    ConvGeometry g{input.dim(0), input.dim(1), input.dim(2), input.dim(3),
                   kernel.dim(0), kernel.dim(2), kernel.dim(3), 0, 0};
    if (kernel.dim(1) != g.cin)
        throw std::invalid_argument("conv2d: kernel expects " + std::to_string(kernel.dim(1)) +
                                    " input channels, input has " + std::to_string(g.cin));
    if (bias.dim(0) != g.cout)
        throw std::invalid_argument("conv2d: bias extent does not match output channels");
    if (g.kh % 2 == 0 || g.kw % 2 == 0)
        throw std::invalid_argument("conv2d: kernel extents must be odd for same padding");
    g.pad_h = (g.kh - 1) / 2;
    g.pad_w = (g.kw - 1) / 2;
    return g;
}

} // namespace

template <typename T>
BasicTensor<T> conv2d(BasicTape<T> &tape, const BasicTensor<T> &input, const BasicTensor<T> &kernel, const BasicTensor<T> &bias)
{
    using Tensor = BasicTensor<T>;
    const auto g = conv_geometry(input, kernel, bias);
    const auto K = static_cast<Eigen::Index>(g.patch());
    const auto P = static_cast<Eigen::Index>(g.pixels());
    const auto O = static_cast<Eigen::Index>(g.cout);

    Tensor out({g.batch, g.cout, g.height, g.width});
    std::vector<T> col(g.pointwise() ? 0 : g.patch() * g.pixels());
    const ConstMatrixView<T> weights(kernel.data().data(), O, K);
    const ConstVectorView<T> b(bias.data().data(), O);

    for (std::size_t n = 0; n < g.batch; ++n)
    {
        const T *x = input.data().data() + n * g.cin * g.pixels();
        if (!g.pointwise())
            im2col(x, g, col.data());
        const ConstMatrixView<T> patches(g.pointwise() ? x : col.data(), K, P);
        MatrixView<T> y(out.data().data() + n * g.cout * g.pixels(), O, P);
        y.noalias() = weights * patches;
        y.colwise() += b;
    }

    if (tracks(tape, {&input, &kernel, &bias}))
    {
        tape.record(out, [input = Tensor(input), kernel = Tensor(kernel), bias = Tensor(bias), out, g]() mutable {
            const auto K = static_cast<Eigen::Index>(g.patch());
            const auto P = static_cast<Eigen::Index>(g.pixels());
            const auto O = static_cast<Eigen::Index>(g.cout);
            const ConstMatrixView<T> weights(kernel.data().data(), O, K);
            std::vector<T> col(g.pointwise() ? 0 : g.patch() * g.pixels());
            std::vector<T> dcol(g.pointwise() ? 0 : g.patch() * g.pixels());

            for (std::size_t n = 0; n < g.batch; ++n)
            {
                const ConstMatrixView<T> gy(out.grad().data() + n * g.cout * g.pixels(), O, P);
                const T *x = input.data().data() + n * g.cin * g.pixels();
                if (kernel.requires_grad())
                {
                    if (!g.pointwise())
                        im2col(x, g, col.data());
                    const ConstMatrixView<T> patches(g.pointwise() ? x : col.data(), K, P);
                    MatrixView<T> dw(kernel.grad().data(), O, K);
                    dw.noalias() += gy * patches.transpose();
                }
                if (bias.requires_grad())
                {
                    // Plain loop: Eigen's vectorized reductions sum in an
                    // alignment-dependent order, which breaks run-to-run determinism.
                    const T *g_out = out.grad().data() + n * g.cout * g.pixels();
                    for (std::size_t o = 0; o < g.cout; ++o)
                    {
                        T acc = 0;
                        for (std::size_t p = 0; p < g.pixels(); ++p)
                            acc += g_out[o * g.pixels() + p];
                        bias.grad()[o] += acc;
                    }
                }
                if (input.requires_grad())
                {
                    T *dx = input.grad().data() + n * g.cin * g.pixels();
                    if (g.pointwise())
                    {
                        MatrixView<T> dxm(dx, K, P);
                        dxm.noalias() += weights.transpose() * gy;
                    }
                    else
                    {
                        MatrixView<T> dc(dcol.data(), K, P);
                        dc.noalias() = weights.transpose() * gy;
                        col2im_add(dcol.data(), g, dx);
                    }
                }
            }
        });
    }
    return out;
}

template <typename T>
BasicTensor<T> relu(BasicTape<T> &tape, const BasicTensor<T> &input)
{
    using Tensor = BasicTensor<T>;
    Tensor out(input.shape());
    auto x = input.data();
    auto y = out.data();
    for (std::size_t k = 0; k < x.size(); ++k)
        y[k] = x[k] > T(0) ? x[k] : T(0);
    if (tracks(tape, {&input}))
    {
        tape.record(out, [input = Tensor(input), out]() mutable {
            auto x = input.data();
            auto gy = out.grad();
            auto gx = input.grad();
            for (std::size_t k = 0; k < x.size(); ++k)
                if (x[k] > T(0))
                    gx[k] += gy[k];
        });
    }
    return out;
}

template <typename T>
BasicTensor<T> pixel_shuffle(BasicTape<T> &tape, const BasicTensor<T> &input, std::size_t r)
{
    using Tensor = BasicTensor<T>;
    if (input.rank() != 4 || r == 0 || input.dim(1) % (r * r) != 0)
        throw std::invalid_argument("pixel_shuffle: channel count of " + to_string(input.shape()) +
                                    " is not divisible by r^2 = " + std::to_string(r * r));
    const std::size_t B = input.dim(0), Cin = input.dim(1), H = input.dim(2), W = input.dim(3);
    const std::size_t C = Cin / (r * r);
    Tensor out({B, C, H * r, W * r});

    // Visits every (input, output) index pair once.
    auto for_each_pair = [=](auto &&visit) {
        for (std::size_t b = 0; b < B; ++b)
            for (std::size_t c = 0; c < C; ++c)
                for (std::size_t dy = 0; dy < r; ++dy)
                    for (std::size_t dx = 0; dx < r; ++dx)
                    {
                        const std::size_t src_plane = (b * Cin + c * r * r + dy * r + dx) * H * W;
                        const std::size_t dst_plane = (b * C + c) * H * r * W * r;
                        for (std::size_t h = 0; h < H; ++h)
                            for (std::size_t w = 0; w < W; ++w)
                                visit(src_plane + h * W + w, dst_plane + (h * r + dy) * W * r + w * r + dx);
                    }
    };

    auto x = input.data();
    auto y = out.data();
    for_each_pair([&](std::size_t src, std::size_t dst) { y[dst] = x[src]; });
    if (tracks(tape, {&input}))
    {
        tape.record(out, [input = Tensor(input), out, for_each_pair]() mutable {
            auto gx = input.grad();
            auto gy = out.grad();
            for_each_pair([&](std::size_t src, std::size_t dst) { gx[src] += gy[dst]; });
        });
    }
    return out;
}

template <typename T>
BasicTensor<T> add(BasicTape<T> &tape, const BasicTensor<T> &a, const BasicTensor<T> &b)
{
    using Tensor = BasicTensor<T>;
    require_same_shape(a, b, "add");
    Tensor out(a.shape());
    auto y = out.data();
    for (std::size_t k = 0; k < y.size(); ++k)
        y[k] = a.data()[k] + b.data()[k];
    if (tracks(tape, {&a, &b}))
    {
        tape.record(out, [a = Tensor(a), b = Tensor(b), out]() mutable {
            auto gy = out.grad();
            if (a.requires_grad())
                for (std::size_t k = 0; k < gy.size(); ++k)
                    a.grad()[k] += gy[k];
            if (b.requires_grad())
                for (std::size_t k = 0; k < gy.size(); ++k)
                    b.grad()[k] += gy[k];
        });
    }
    return out;
}

template <typename T>
BasicTensor<T> sub(BasicTape<T> &tape, const BasicTensor<T> &a, const BasicTensor<T> &b)
{
    using Tensor = BasicTensor<T>;
    require_same_shape(a, b, "sub");
    Tensor out(a.shape());
    auto y = out.data();
    for (std::size_t k = 0; k < y.size(); ++k)
        y[k] = a.data()[k] - b.data()[k];
    if (tracks(tape, {&a, &b}))
    {
        tape.record(out, [a = Tensor(a), b = Tensor(b), out]() mutable {
            auto gy = out.grad();
            if (a.requires_grad())
                for (std::size_t k = 0; k < gy.size(); ++k)
                    a.grad()[k] += gy[k];
            if (b.requires_grad())
                for (std::size_t k = 0; k < gy.size(); ++k)
                    b.grad()[k] -= gy[k];
        });
    }
    return out;
}

template <typename T>
BasicTensor<T> scale(BasicTape<T> &tape, const BasicTensor<T> &a, std::type_identity_t<T> factor)
{
    using Tensor = BasicTensor<T>;
    Tensor out(a.shape());
    auto y = out.data();
    for (std::size_t k = 0; k < y.size(); ++k)
        y[k] = a.data()[k] * factor;
    if (tracks(tape, {&a}))
    {
        tape.record(out, [a = Tensor(a), out, factor]() mutable {
            auto gy = out.grad();
            auto gx = a.grad();
            for (std::size_t k = 0; k < gy.size(); ++k)
                gx[k] += gy[k] * factor;
        });
    }
    return out;
}

template <typename T>
BasicTensor<T> mse_loss(BasicTape<T> &tape, const BasicTensor<T> &pred, const BasicTensor<T> &target)
{
    using Tensor = BasicTensor<T>;
    require_same_shape(pred, target, "mse_loss");
    const auto p = pred.data();
    const auto t = target.data();
    double sum = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k)
    {
        const double d = static_cast<double>(p[k]) - static_cast<double>(t[k]);
        sum += d * d;
    }
    const double n = static_cast<double>(p.size());
    Tensor out = Tensor::scalar(static_cast<T>(sum / n));
    if (tracks(tape, {&pred, &target}))
    {
        tape.record(out, [pred = Tensor(pred), target = Tensor(target), out, n]() mutable {
            const double g = out.grad()[0];
            const auto p = pred.data();
            const auto t = target.data();
            for (std::size_t k = 0; k < p.size(); ++k)
            {
                const auto d = static_cast<T>(2.0 * (static_cast<double>(p[k]) - static_cast<double>(t[k])) * g / n);
                if (pred.requires_grad())
                    pred.grad()[k] += d;
                if (target.requires_grad())
                    target.grad()[k] -= d;
            }
        });
    }
    return out;
}

template <typename T>
BasicTensor<T> l1_loss(BasicTape<T> &tape, const BasicTensor<T> &pred, const BasicTensor<T> &target)
{
    using Tensor = BasicTensor<T>;
    require_same_shape(pred, target, "l1_loss");
    const auto p = pred.data();
    const auto t = target.data();
    double sum = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k)
        sum += std::abs(static_cast<double>(p[k]) - static_cast<double>(t[k]));
    const double n = static_cast<double>(p.size());
    Tensor out = Tensor::scalar(static_cast<T>(sum / n));
    if (tracks(tape, {&pred, &target}))
    {
        tape.record(out, [pred = Tensor(pred), target = Tensor(target), out, n]() mutable {
            const auto step = static_cast<T>(static_cast<double>(out.grad()[0]) / n);
            const auto p = pred.data();
            const auto t = target.data();
            for (std::size_t k = 0; k < p.size(); ++k)
            {
                const T d = p[k] > t[k] ? step : (p[k] < t[k] ? -step : T(0));
                if (pred.requires_grad())
                    pred.grad()[k] += d;
                if (target.requires_grad())
                    target.grad()[k] -= d;
            }
        });
    }
    return out;
}

#define CSISR_INSTANTIATE_OPS(T)                                                                                \
    template BasicTensor<T> conv2d(BasicTape<T> &, const BasicTensor<T> &, const BasicTensor<T> &,                 \
                                   const BasicTensor<T> &);                                                        \
    template BasicTensor<T> relu(BasicTape<T> &, const BasicTensor<T> &);                                          \
    template BasicTensor<T> pixel_shuffle(BasicTape<T> &, const BasicTensor<T> &, std::size_t);                    \
    template BasicTensor<T> add(BasicTape<T> &, const BasicTensor<T> &, const BasicTensor<T> &);                   \
    template BasicTensor<T> sub(BasicTape<T> &, const BasicTensor<T> &, const BasicTensor<T> &);                   \
    template BasicTensor<T> scale(BasicTape<T> &, const BasicTensor<T> &, T);                                      \
    template BasicTensor<T> mse_loss(BasicTape<T> &, const BasicTensor<T> &, const BasicTensor<T> &);              \
    template BasicTensor<T> l1_loss(BasicTape<T> &, const BasicTensor<T> &, const BasicTensor<T> &);

CSISR_INSTANTIATE_OPS(float)
CSISR_INSTANTIATE_OPS(double)

} // namespace csisr::autograd
