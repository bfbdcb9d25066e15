// SPDX-License-Identifier: Apache-2.0
//
// canyon-sounder: simulation and processing toolkit for directional
// correlation channel sounding in street canyons
// Copyright (C) 2026 The canyon-sounder Authors
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

#include <vector>

#include "canyon/util.hpp"

namespace canyon::fft {

/// Unnormalized forward DFT, any length >= 1 (FFTW backend, plans cached).
/// Thread-safe.
std::vector<cdouble> forward(const std::vector<cdouble> &x);

/// Inverse DFT normalized by 1/N, so inverse(forward(x)) == x.
std::vector<cdouble> inverse(const std::vector<cdouble> &x);

/// Signed integer frequency of DFT bin k for length n: 0, 1, ..., then
/// negative frequencies. For even n the bin n/2 is returned as +n/2.
long signed_bin(std::size_t k, std::size_t n);

} // namespace canyon::fft
