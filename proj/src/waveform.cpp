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

#include "canyon/waveform.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "canyon/fft.hpp"

namespace canyon {

bool is_prime(std::int64_t n) {
    if (n < 2)
        return false;
    if (n < 4)
        return true;
    if (n % 2 == 0)
        return false;
    for (std::int64_t d = 3; d * d <= n; d += 2)
        if (n % d == 0)
            return false;
    return true;
}

std::int64_t nearest_prime(std::int64_t n) {
    if (n < 2)
        throw std::invalid_argument("nearest_prime: n must be >= 2");
    // Distance 0, then at each distance the smaller candidate first.
    for (std::int64_t k = 0;; ++k) {
        if (n - k >= 2 && is_prime(n - k))
            return n - k;
        if (is_prime(n + k))
            return n + k;
    }
}

SoundingSequence generate_cazac(std::int64_t length, int root,
                                double chip_rate_hz) {
    if (!is_prime(length))
        throw std::invalid_argument("generate_cazac: length must be prime");
    if (root <= 0 || root % length == 0)
        throw std::invalid_argument(
            "generate_cazac: root must be positive and coprime to the length");
    if (!(chip_rate_hz > 0.0))
        throw std::invalid_argument("generate_cazac: chip rate must be > 0");

    SoundingSequence seq;
    seq.chip_rate_hz = chip_rate_hz;
    seq.root = root;
    seq.chips.resize(static_cast<std::size_t>(length));
    // chips[n] = exp(-i*pi*root*n*(n+1)/length). The exponent is periodic in
    // root*n*(n+1) modulo 2*length; reducing there keeps the phase argument
    // small, so the sequence stays numerically exact for 2e5-chip lengths.
    const std::int64_t two_n = 2 * length;
    for (std::int64_t n = 0; n < length; ++n) {
        const std::int64_t quad = (n % two_n) * ((n + 1) % two_n) % two_n;
        const std::int64_t m = (static_cast<std::int64_t>(root) % two_n) *
                               quad % two_n;
        const double phase =
            -pi * static_cast<double>(m) / static_cast<double>(length);
        seq.chips[static_cast<std::size_t>(n)] =
            cdouble(std::cos(phase), std::sin(phase));
    }
    return seq;
}

BasebandWaveform synthesize_baseband(const SoundingSequence &sequence,
                                     int oversampling) {
    if (sequence.chips.empty())
        throw std::invalid_argument("synthesize_baseband: empty sequence");
    if (oversampling < 1)
        throw std::invalid_argument(
            "synthesize_baseband: oversampling must be >= 1");

    BasebandWaveform wf;
    wf.sample_rate_hz = sequence.chip_rate_hz * oversampling;
    const std::size_t n = sequence.chips.size();
    if (oversampling == 1) {
        wf.samples = sequence.chips;
        return wf;
    }
    // Spectral zero-padding: the periodic band-limited interpolant of the
    // chip impulses on the finer grid. The chip energy stays confined to
    // +-chip_rate/2 and the integer-grid samples reproduce the chips.
    const std::size_t m = n * static_cast<std::size_t>(oversampling);
    std::vector<cdouble> spectrum = fft::forward(sequence.chips);
    std::vector<cdouble> padded(m, cdouble{0.0, 0.0});
    for (std::size_t k = 0; k < n; ++k) {
        const long f = fft::signed_bin(k, n);
        if (n % 2 == 0 && 2 * f == static_cast<long>(n)) {
            padded[static_cast<std::size_t>(f)] += 0.5 * spectrum[k];
            padded[m - static_cast<std::size_t>(f)] += 0.5 * spectrum[k];
        } else {
            const std::size_t idx =
                f >= 0 ? static_cast<std::size_t>(f)
                       : m - static_cast<std::size_t>(-f);
            padded[idx] = spectrum[k];
        }
    }
    wf.samples = fft::inverse(padded);
    const double scale = static_cast<double>(m) / static_cast<double>(n);
    for (cdouble &v : wf.samples)
        v *= scale;
    return wf;
}

ReferenceRecord make_b2b_reference(const SoundingSequence &sequence,
                                   int oversampling, cdouble chain_gain,
                                   double chain_delay_s) {
    BasebandWaveform wf = synthesize_baseband(sequence, oversampling);
    ReferenceRecord ref;
    ref.sample_rate_hz = wf.sample_rate_hz;
    ref.chain_gain = chain_gain;
    ref.chain_delay_s = chain_delay_s;

    // The chain is a linear time-invariant block: complex gain plus group
    // delay, applied exactly as a spectral phase ramp over the period.
    const std::size_t m = wf.samples.size();
    std::vector<cdouble> spectrum = fft::forward(wf.samples);
    for (std::size_t k = 0; k < m; ++k) {
        const double f_hz = static_cast<double>(fft::signed_bin(k, m)) *
                            wf.sample_rate_hz / static_cast<double>(m);
        spectrum[k] *= chain_gain *
                       std::exp(cdouble(0.0, -2.0 * pi * f_hz * chain_delay_s));
    }
    ref.samples = fft::inverse(spectrum);

    double power = 0.0;
    for (const cdouble &v : ref.samples)
        power += std::norm(v);
    ref.reference_power = power / static_cast<double>(m);
    return ref;
}

} // namespace canyon
