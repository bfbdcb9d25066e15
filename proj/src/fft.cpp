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

#include "canyon/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>

namespace canyon::fft {

namespace {

// FFTW planning is not thread-safe; execution with the new-array interface
// is. One cached plan per (length, direction), guarded by a single mutex.
std::mutex plan_mutex;

fftw_plan get_plan(std::size_t n, int sign) {
    static std::map<std::pair<std::size_t, int>, fftw_plan> cache;
    std::lock_guard<std::mutex> lock(plan_mutex);
    auto key = std::make_pair(n, sign);
    auto it = cache.find(key);
    if (it != cache.end())
        return it->second;
    // FFTW_UNALIGNED lets the plan execute on std::vector storage whose
    // alignment FFTW did not choose.
    std::vector<cdouble> dummy(n);
    fftw_plan plan = fftw_plan_dft_1d(
        static_cast<int>(n), reinterpret_cast<fftw_complex *>(dummy.data()),
        reinterpret_cast<fftw_complex *>(dummy.data()), sign,
        FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (plan == nullptr)
        throw std::runtime_error("fft: planning failed");
    cache.emplace(key, plan);
    return plan;
}

std::vector<cdouble> execute(const std::vector<cdouble> &x, int sign) {
    if (x.empty())
        throw std::invalid_argument("fft: empty input");
    fftw_plan plan = get_plan(x.size(), sign);
    std::vector<cdouble> in(x);
    std::vector<cdouble> out(x.size());
    fftw_execute_dft(plan, reinterpret_cast<fftw_complex *>(in.data()),
                     reinterpret_cast<fftw_complex *>(out.data()));
    return out;
}

} // namespace

std::vector<cdouble> forward(const std::vector<cdouble> &x) {
    return execute(x, FFTW_FORWARD);
}

std::vector<cdouble> inverse(const std::vector<cdouble> &x) {
    std::vector<cdouble> out = execute(x, FFTW_BACKWARD);
    const double scale = 1.0 / static_cast<double>(out.size());
    for (cdouble &v : out)
        v *= scale;
    return out;
}

long signed_bin(std::size_t k, std::size_t n) {
    const long b = static_cast<long>(k);
    const long ln = static_cast<long>(n);
    return (2 * b <= ln) ? b : b - ln;
}

} // namespace canyon::fft
