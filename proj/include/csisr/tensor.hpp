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

// Dense tensors with reverse-mode differentiation. Models run in float;
// the double instantiation backs finite-difference checks.
//
// A Tensor is a shared handle: copies alias the same storage. Operations in
// ops.hpp append one node per call to a Tape when recording is on and any
// input requires a gradient; Tape::backward replays the nodes in exact
// reverse order.

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace csisr::autograd
{

using Shape = std::vector<std::size_t>;

std::size_t element_count(const Shape &shape) noexcept;
std::string to_string(const Shape &shape);

template <typename T>
class BasicTensor
{
public:
    using value_type = T;

    BasicTensor() = default;
    // Zero-filled.
    explicit BasicTensor(Shape shape, bool requires_grad = false);
    BasicTensor(Shape shape, std::vector<T> values, bool requires_grad = false);

    static BasicTensor scalar(T value, bool requires_grad = false);

    bool defined() const noexcept { return static_cast<bool>(storage_); }
    const Shape &shape() const;
    std::size_t dim(std::size_t axis) const { return shape().at(axis); }
    std::size_t rank() const { return shape().size(); }
    std::size_t numel() const noexcept { return storage_ ? storage_->values.size() : 0; }

    std::span<T> data() noexcept { return storage_->values; }
    std::span<const T> data() const noexcept { return storage_->values; }

    // Same extent as data(); empty unless requires_grad().
    std::span<T> grad() noexcept { return storage_->grad; }
    std::span<const T> grad() const noexcept { return storage_->grad; }

    bool requires_grad() const noexcept { return storage_ && storage_->requires_grad; }
    void set_requires_grad(bool on);
    void zero_grad() noexcept;

    // Value of a one-element tensor.
    T item() const;

    // Independent copy of the values (no gradient tracking).
    BasicTensor clone() const;

    bool shares_storage(const BasicTensor &other) const noexcept { return storage_ == other.storage_; }

private:
    struct Storage
    {
        Shape shape;
        std::vector<T> values;
        std::vector<T> grad;
        bool requires_grad = false;
    };
    std::shared_ptr<Storage> storage_;
};

template <typename T>
class BasicTape
{
public:
    using Tensor = BasicTensor<T>;

    BasicTape() = default;
    // A tape that never records; for inference.
    static BasicTape inference()
    {
        BasicTape t;
        t.recording_ = false;
        return t;
    }

    bool recording() const noexcept { return recording_; }

    // Called by operations. `output` receives a zeroed gradient buffer.
    void record(Tensor output, std::function<void()> backward);

    // Seeds d(loss)/d(loss) = 1 and runs every recorded adjoint, newest
    // first. Intermediate gradients are reset at the start of each call,
    // while gradients of leaf tensors (parameters, inputs) accumulate:
    // calling backward twice without zero_grad() doubles them.
    void backward(const Tensor &loss);

    // Vector-Jacobian product: like backward() but seeds root's gradient
    // with `cotangent` (same extent as root), so root may be non-scalar.
    void backward(const Tensor &root, std::span<const T> cotangent);

    std::size_t size() const noexcept { return nodes_.size(); }
    void clear() noexcept { nodes_.clear(); }

private:
    struct Node
    {
        Tensor output;
        std::function<void()> backward;
    };
    std::vector<Node> nodes_;
    bool recording_ = true;
};

// Copies values into another precision.
template <typename To, typename From>
BasicTensor<To> tensor_cast(const BasicTensor<From> &src, bool requires_grad = false)
{
    std::vector<To> values(src.data().begin(), src.data().end());
    return BasicTensor<To>(src.shape(), std::move(values), requires_grad);
}

extern template class BasicTensor<float>;
extern template class BasicTensor<double>;
extern template class BasicTape<float>;
extern template class BasicTape<double>;

using Tensor = BasicTensor<float>;
using Tape = BasicTape<float>;
using Tensor64 = BasicTensor<double>;
using Tape64 = BasicTape<double>;

} // namespace csisr::autograd
