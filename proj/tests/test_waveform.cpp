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
#include <stdexcept>
#include <vector>

#include "canyon/fft.hpp"
#include "canyon/util.hpp"
#include "canyon/waveform.hpp"

using canyon::cdouble;

namespace {

/// Periodic autocorrelation r[l] = sum_n c[n] * conj(c[n-l]).
std::vector<cdouble> periodic_autocorrelation(const std::vector<cdouble> &c) {
    const std::size_t n = c.size();
    std::vector<cdouble> r(n, cdouble{0.0, 0.0});
    for (std::size_t l = 0; l < n; ++l)
        for (std::size_t i = 0; i < n; ++i)
            r[l] += c[i] * std::conj(c[(i + n - l) % n]);
    return r;
}

} // namespace

TEST_CASE("is_prime and nearest_prime behave on known values") {
    CHECK(canyon::is_prime(2));
    CHECK(canyon::is_prime(3));
    CHECK(canyon::is_prime(2503));
    CHECK(canyon::is_prime(199999));
    CHECK_FALSE(canyon::is_prime(1));
    CHECK_FALSE(canyon::is_prime(0));
    CHECK_FALSE(canyon::is_prime(-7));
    CHECK_FALSE(canyon::is_prime(2501)); // 41 * 61
    CHECK_FALSE(canyon::is_prime(2500));

    CHECK(canyon::nearest_prime(2500) == 2503);   // desk-scale chip count
    CHECK(canyon::nearest_prime(200000) == 199999); // full-scale chip count
    CHECK(canyon::nearest_prime(9) == 7);  // tie 7/11 resolves downward
    CHECK(canyon::nearest_prime(2) == 2);
    CHECK(canyon::nearest_prime(3) == 3);
    CHECK_THROWS_AS(canyon::nearest_prime(1), std::invalid_argument);
}

TEST_CASE("generate_cazac produces unit-magnitude chips with a delta "
          "autocorrelation") {
    const auto seq = canyon::generate_cazac(13, 3, 200.0e6);
    REQUIRE(seq.chips.size() == 13);
    CHECK(seq.root == 3);
    CHECK(seq.chip_rate_hz == 200.0e6);
    CHECK(seq.duration_s() == doctest::Approx(13.0 / 200.0e6));
    for (const auto &c : seq.chips)
        CHECK(std::abs(c) == doctest::Approx(1.0).epsilon(1e-12));

    const auto r = periodic_autocorrelation(seq.chips);
    CHECK(std::abs(r[0] - cdouble{13.0, 0.0}) < 1.0e-9);
    for (std::size_t l = 1; l < r.size(); ++l)
        CHECK(std::abs(r[l]) < 1.0e-9);
}

TEST_CASE("the desk-scale sequence keeps the delta property at length 2503") {
    const auto seq = canyon::generate_cazac(2503, 5, 200.0e6);
    // Autocorrelation via FFT: |C[k]|^2 back-transformed.
    auto spectrum = canyon::fft::forward(seq.chips);
    for (auto &v : spectrum)
        v = cdouble{std::norm(v), 0.0};
    const auto r = canyon::fft::inverse(spectrum);
    CHECK(std::abs(r[0] - cdouble{2503.0, 0.0}) < 1.0e-6);
    double worst = 0.0;
    for (std::size_t l = 1; l < r.size(); ++l)
        worst = std::max(worst, std::abs(r[l]));
    CHECK(worst < 1.0e-6);
}

TEST_CASE("generate_cazac rejects invalid lengths and roots") {
    CHECK_THROWS_AS(canyon::generate_cazac(12, 5, 200.0e6),
                    std::invalid_argument); // composite length
    CHECK_THROWS_AS(canyon::generate_cazac(13, 13, 200.0e6),
                    std::invalid_argument); // root not coprime
    CHECK_THROWS_AS(canyon::generate_cazac(13, 0, 200.0e6),
                    std::invalid_argument);
    CHECK_THROWS_AS(canyon::generate_cazac(13, 3, 0.0),
                    std::invalid_argument);
}

TEST_CASE("synthesize_baseband oversamples without changing the chips") {
    const auto seq = canyon::generate_cazac(251, 7, 200.0e6);
    const auto wave = canyon::synthesize_baseband(seq, 2);
    REQUIRE(wave.samples.size() == 502);
    CHECK(wave.sample_rate_hz == doctest::Approx(400.0e6));

    // Unit mean power.
    double power = 0.0;
    for (const auto &s : wave.samples)
        power += std::norm(s);
    power /= static_cast<double>(wave.samples.size());
    CHECK(power == doctest::Approx(1.0).epsilon(1e-12));

    // Chip passthrough at even indices.
    for (std::size_t i = 0; i < seq.chips.size(); i += 17)
        CHECK(std::abs(wave.samples[2 * i] - seq.chips[i]) < 1.0e-9);

    // All energy inside +-chip_rate/2: upper half of the DFT is empty except
    // the band edges.
    const auto spectrum = canyon::fft::forward(wave.samples);
    const std::size_t n = spectrum.size();
    double out_of_band = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const long f = canyon::fft::signed_bin(k, n);
        if (std::abs(f) > 126) // beyond the 251-chip one-sided band
            out_of_band += std::norm(spectrum[k]);
    }
    CHECK(out_of_band < 1.0e-18);

    CHECK_THROWS_AS(canyon::synthesize_baseband(seq, 0),
                    std::invalid_argument);
}

TEST_CASE("make_b2b_reference carries the chain model alongside the samples") {
    const auto seq = canyon::generate_cazac(251, 7, 200.0e6);
    const cdouble chain_gain{0.5, 0.25};
    const auto ref = canyon::make_b2b_reference(seq, 2, chain_gain, 30.0e-9);
    CHECK(ref.samples.size() == 502);
    CHECK(ref.sample_rate_hz == doctest::Approx(400.0e6));
    CHECK(std::abs(ref.chain_gain - chain_gain) < 1.0e-15);
    CHECK(ref.chain_delay_s == doctest::Approx(30.0e-9));
    // 0 dB reference level: the unit-power transmit waveform as seen through
    // the chain, i.e. |chain_gain|^2.
    CHECK(ref.reference_power ==
          doctest::Approx(std::norm(chain_gain)).epsilon(1e-12));

    // The record is the transmit waveform through the chain alone: scaled by
    // the chain gain and circularly delayed by the chain delay.
    const auto wave = canyon::synthesize_baseband(seq, 2);
    const double delay_samples = 30.0e-9 * 400.0e6;
    double mean_power = 0.0;
    for (const auto &s : ref.samples)
        mean_power += std::norm(s);
    mean_power /= static_cast<double>(ref.samples.size());
    CHECK(mean_power ==
          doctest::Approx(std::norm(chain_gain)).epsilon(1e-9));
    // Spot-check the delay: sample at index round(delay) matches the scaled
    // waveform start when the delay is a whole number of samples.
    CHECK(delay_samples == doctest::Approx(12.0));
    CHECK(std::abs(ref.samples[12] - chain_gain * wave.samples[0]) < 1.0e-9);
}
