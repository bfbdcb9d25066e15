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

#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "canyon/dsp.hpp"
#include "canyon/fft.hpp"
#include "canyon/util.hpp"

using canyon::cdouble;
using canyon::pi;

namespace {

std::vector<cdouble> random_block(std::size_t n, std::uint64_t seed) {
    canyon::Rng rng(seed);
    std::vector<cdouble> x(n);
    for (auto &v : x)
        v = rng.complex_normal();
    return x;
}

double max_abs_diff(const std::vector<cdouble> &a,
                    const std::vector<cdouble> &b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        worst = std::max(worst, std::abs(a[i] - b[i]));
    return worst;
}

} // namespace

TEST_CASE("circular_delay by a whole number of samples is an exact rotation") {
    const std::vector<cdouble> x = random_block(17, 42);
    const std::vector<cdouble> y = canyon::circular_delay(x, 5.0);
    for (std::size_t i = 0; i < x.size(); ++i)
        CHECK(std::abs(y[(i + 5) % x.size()] - x[i]) == doctest::Approx(0.0));

    // Negative and longer-than-period delays wrap.
    const std::vector<cdouble> z = canyon::circular_delay(x, -3.0);
    const std::vector<cdouble> w = canyon::circular_delay(x, 17.0 * 4 - 3.0);
    CHECK(max_abs_diff(z, w) < 1.0e-12);
}

TEST_CASE("fractional circular_delay round-trips to the original block") {
    // Odd length: every DFT bin gets a pure phase ramp, so the delay is
    // exactly invertible.
    const std::vector<cdouble> x = random_block(63, 7);
    const std::vector<cdouble> y = canyon::circular_delay(x, 0.37);
    const std::vector<cdouble> back = canyon::circular_delay(y, -0.37);
    CHECK(max_abs_diff(back, x) < 1.0e-12);

    // Even length: the Nyquist bin is mapped to a cosine (the average of the
    // +N/2 and -N/2 ramps), so only signals without Nyquist energy round-trip
    // exactly.
    std::vector<cdouble> tone(64);
    for (std::size_t i = 0; i < tone.size(); ++i)
        tone[i] = std::exp(cdouble(0.0, 2.0 * pi * 9.0 * i / 64.0));
    const std::vector<cdouble> tone_back =
        canyon::circular_delay(canyon::circular_delay(tone, 0.37), -0.37);
    CHECK(max_abs_diff(tone_back, tone) < 1.0e-12);
}

TEST_CASE("circular_delay shifts a complex tone by the exact phase") {
    const std::size_t n = 48;
    const double tau = 2.71; // samples
    const long tone = 5;     // cycles per block
    std::vector<cdouble> x(n);
    for (std::size_t i = 0; i < n; ++i)
        x[i] = std::exp(cdouble(
            0.0, 2.0 * pi * tone * static_cast<double>(i) / n));
    const std::vector<cdouble> y = canyon::circular_delay(x, tau);
    const cdouble expected_rotation =
        std::exp(cdouble(0.0, -2.0 * pi * tone * tau / n));
    for (std::size_t i = 0; i < n; ++i)
        CHECK(std::abs(y[i] - x[i] * expected_rotation) < 1.0e-12);
}

TEST_CASE("a fractionally delayed impulse is the periodic sinc kernel") {
    const std::size_t n = 101; // odd block: plain Dirichlet kernel
    const double tau = 20.3;
    std::vector<cdouble> x(n, cdouble{0.0, 0.0});
    x[0] = 1.0;
    const std::vector<cdouble> y = canyon::circular_delay(x, tau);
    const double nd = static_cast<double>(n);
    for (std::size_t i = 0; i < n; i += 7) {
        const double d = static_cast<double>(i) - tau;
        const double denom = nd * std::sin(pi * d / nd);
        const double expected =
            std::abs(denom) < 1.0e-12 ? 1.0 : std::sin(pi * d) / denom;
        CHECK(std::abs(y[i] - cdouble{expected, 0.0}) < 1.0e-12);
    }
}

TEST_CASE("interpolate_bandlimited reproduces the samples at integer points") {
    const std::vector<cdouble> x = random_block(33, 3);
    const std::vector<cdouble> spectrum = canyon::fft::forward(x);
    for (std::size_t i = 0; i < x.size(); i += 5)
        CHECK(std::abs(canyon::interpolate_bandlimited(
                  spectrum, static_cast<double>(i)) -
                       x[i]) < 1.0e-12);
}

TEST_CASE("interpolate_bandlimited agrees with circular_delay between samples") {
    const std::vector<cdouble> x = random_block(40, 11);
    const std::vector<cdouble> spectrum = canyon::fft::forward(x);
    // Delaying by -t moves the value at fractional index t to index 0.
    for (const double t : {0.25, 3.8, 17.5, 39.01}) {
        const cdouble via_delay = canyon::circular_delay(x, -t)[0];
        const cdouble via_interp = canyon::interpolate_bandlimited(spectrum, t);
        CHECK(std::abs(via_delay - via_interp) < 1.0e-12);
    }
}

TEST_CASE("refine_peak_position locates an off-grid kernel peak exactly") {
    const std::size_t n = 255; // odd: a delayed tap is the pure kernel
    for (const double tau : {100.0, 100.27, 100.5, 101.93}) {
        std::vector<cdouble> x(n, cdouble{0.0, 0.0});
        x[0] = cdouble{0.6, -0.8}; // unit-magnitude complex amplitude
        const std::vector<cdouble> y = canyon::circular_delay(x, tau);
        const std::vector<cdouble> spectrum = canyon::fft::forward(y);
        std::size_t arg = 0;
        for (std::size_t i = 1; i < n; ++i)
            if (std::norm(y[i]) > std::norm(y[arg]))
                arg = i;
        const double t =
            canyon::refine_peak_position(spectrum, static_cast<double>(arg));
        CHECK(std::abs(t - tau) < 1.0e-6);
        CHECK(std::abs(canyon::interpolate_bandlimited(spectrum, t) -
                       cdouble{0.6, -0.8}) < 1.0e-9);
    }
}
