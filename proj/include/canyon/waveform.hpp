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

#include <cstdint>
#include <vector>

#include "canyon/util.hpp"

namespace canyon {

bool is_prime(std::int64_t n);

/// Prime closest to n (ties resolved toward the smaller prime). n >= 2.
std::int64_t nearest_prime(std::int64_t n);

/// One period of a constant-amplitude zero-autocorrelation chip sequence.
struct SoundingSequence {
    std::vector<cdouble> chips; // unit magnitude
    double chip_rate_hz = 0.0;
    int root = 0;
    double duration_s() const {
        return static_cast<double>(chips.size()) / chip_rate_hz;
    }
};

/// Polyphase chirp sequence chips[n] = exp(-i*pi*root*n*(n+1)/length) for a
/// prime length and a root coprime to it. Its periodic autocorrelation is an
/// exact delta, which is what makes the circular correlation of the receiver
/// pipeline sidelobe-free. Throws std::invalid_argument for non-prime
/// lengths or roots not coprime with the length.
SoundingSequence generate_cazac(std::int64_t length, int root,
                                double chip_rate_hz);

struct BasebandWaveform {
    std::vector<cdouble> samples;
    double sample_rate_hz = 0.0;
};

/// Oversample one sequence period onto a grid of oversampling samples per
/// chip by band-limited (Fourier) interpolation of the periodic sequence.
/// The result has unit mean power to machine precision, passes through the
/// chips at integer positions, and keeps all of its energy inside
/// +-chip_rate/2 (a hardware generator's DAC plus reconstruction filter).
BasebandWaveform synthesize_baseband(const SoundingSequence &sequence,
                                     int oversampling);

/// Back-to-back calibration record: the transmit waveform passed through the
/// measurement chain alone (complex chain gain, chain group delay, no
/// channel). reference_power is the mean transmit waveform power that the
/// calibrated impulse response's 0 dB refers to.
struct ReferenceRecord {
    std::vector<cdouble> samples;
    double sample_rate_hz = 0.0;
    cdouble chain_gain{1.0, 0.0};
    double chain_delay_s = 0.0;
    double reference_power = 1.0;
};

ReferenceRecord make_b2b_reference(const SoundingSequence &sequence,
                                   int oversampling, cdouble chain_gain,
                                   double chain_delay_s);

} // namespace canyon
