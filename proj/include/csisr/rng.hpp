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

#include <complex>
#include <cstdint>
#include <random>

namespace csisr
{

using Rng = std::mt19937_64;

// SplitMix64 finalizer. Used to derive independent stream seeds.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

// Seed for the index-th member of a family rooted at base. Stable across
// platforms and independent of evaluation order.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) noexcept;

// Circularly-symmetric complex Gaussian with E|z|^2 = variance.
std::complex<double> complex_gaussian(Rng &rng, double variance = 1.0);

} // namespace csisr
