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

#include "csisr/tensor.hpp"

#include <algorithm>
#include <stdexcept>

namespace csisr::autograd
{

std::size_t element_count(const Shape &shape) noexcept
{
    std::size_t n = 1;
    for (auto e : shape)
        n *= e;
    return n;
}

std::string to_string(const Shape &shape)
{
    std::string s = "[";
    for (std::size_t k = 0; k < shape.size(); ++k)
    {
        if (k > 0)
            s += ", ";
        s += std::to_string(shape[k]);
    }
    return s + "]";
}

template <typename T>
BasicTensor<T>::BasicTensor(Shape shape, bool requires_grad) : storage_(std::make_shared<Storage>())
{
    storage_->values.assign(element_count(shape), T(0));
    storage_->shape = std::move(shape);
    set_requires_grad(requires_grad);
}

template <typename T>
BasicTensor<T>::BasicTensor(Shape shape, std::vector<T> values, bool requires_grad) : storage_(std::make_shared<Storage>())
{
    if (values.size() != element_count(shape))
        throw std::invalid_argument("tensor: " + std::to_string(values.size()) + " values for shape " +
                                    to_string(shape));
    storage_->shape = std::move(shape);
    storage_->values = std::move(values);
    set_requires_grad(requires_grad);
}

template <typename T>
BasicTensor<T> BasicTensor<T>::scalar(T value, bool requires_grad)
{
    return BasicTensor(Shape{}, std::vector<T>{value}, requires_grad);
}

template <typename T>
const Shape &BasicTensor<T>::shape() const
{
    if (!storage_)
        throw std::logic_error("tensor: use of an undefined tensor");
    return storage_->shape;
}

template <typename T>
void BasicTensor<T>::set_requires_grad(bool on)
{
    storage_->requires_grad = on;
    if (on)
        storage_->grad.assign(storage_->values.size(), T(0));
    else
        storage_->grad.clear();
}

template <typename T>
void BasicTensor<T>::zero_grad() noexcept
{
    if (storage_)
        std::fill(storage_->grad.begin(), storage_->grad.end(), T(0));
}

template <typename T>
T BasicTensor<T>::item() const
{
    if (numel() != 1)
        throw std::invalid_argument("tensor: item() on a tensor of shape " + to_string(shape()));
    return storage_->values.front();
}

template <typename T>
BasicTensor<T> BasicTensor<T>::clone() const
{
    return BasicTensor(shape(), storage_->values, false);
}

template <typename T>
void BasicTape<T>::record(Tensor output, std::function<void()> backward)
{
    output.set_requires_grad(true);
    nodes_.push_back({std::move(output), std::move(backward)});
}

template <typename T>
void BasicTape<T>::backward(const Tensor &loss)
{
    if (!loss.defined() || loss.numel() != 1)
        throw std::invalid_argument("backward: root must be a scalar, got shape " +
                                    (loss.defined() ? to_string(loss.shape()) : std::string("<undefined>")));
    const T one = 1;
    backward(loss, std::span<const T>(&one, 1));
}

template <typename T>
void BasicTape<T>::backward(const Tensor &root, std::span<const T> cotangent)
{
    if (!root.defined() || !root.requires_grad())
        throw std::invalid_argument("backward: root was not produced by tracked operations");
    if (cotangent.size() != root.numel())
        throw std::invalid_argument("backward: cotangent extent does not match the root");
    for (auto &node : nodes_)
        node.output.zero_grad();

    Tensor seeded = root;
    auto root_grad = seeded.grad();
    for (std::size_t k = 0; k < cotangent.size(); ++k)
        root_grad[k] += cotangent[k];
    for (auto it = nodes_.rbegin(); it != nodes_.rend(); ++it)
        it->backward();
}

template class BasicTensor<float>;
template class BasicTensor<double>;
template class BasicTape<float>;
template class BasicTape<double>;

} // namespace csisr::autograd
