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

#include "canyon/sounder.hpp"
#include "canyon/waveform.hpp"

namespace canyon {

/// Band-limited sample-rate conversion of one periodic block (spectral
/// zero-padding / truncation). The rate ratio must map the block length to
/// an integer output length. Amplitudes are preserved; content outside the
/// output Nyquist band is removed exactly.
std::vector<cdouble> resample(const std::vector<cdouble> &x, double in_rate_hz,
                              double out_rate_hz);

/// Brick-wall low-pass over one periodic block: keeps bins with
/// |f| <= bandwidth/2, zeroes the rest. bandwidth <= sample_rate.
std::vector<cdouble> bandlimit(const std::vector<cdouble> &x,
                               double sample_rate_hz, double bandwidth_hz);

/// Common phase of each snapshot relative to the first, from the argument
/// of the inner product <snapshot_k, snapshot_0>, unwrapped along k so that
/// consecutive estimates never jump by more than pi. First entry is 0.
/// Throws std::invalid_argument if fewer than two snapshots are given or an
/// inner product vanishes (nothing to lock onto).
std::vector<double> estimate_phase_drift(
    const std::vector<std::vector<cdouble>> &snapshots);

/// Mean of snapshots after removing the estimated per-snapshot phases;
/// coherent averaging of N snapshots lowers the noise floor by 10*log10(N).
std::vector<cdouble> compensate_and_average(
    const std::vector<std::vector<cdouble>> &snapshots,
    const std::vector<double> &phases_rad);

/// Calibrated complex impulse response for one receiver pointing. The delay
/// axis is a uniform grid anchored at absolute time of flight zero
/// (synchronized transmitter and receiver clocks); amplitudes are channel
/// gains including antennas, 0 dB = transmitted reference power.
struct CalibratedCir {
    int angle_bin = -1;
    double pointing_azimuth_rad = 0.0;
    double delay_start_s = 0.0;
    double delay_step_s = 0.0;
    double delay_resolution_s = 0.0; // 1/bandwidth; >= delay_step
    std::vector<cdouble> amplitude;

    std::size_t size() const { return amplitude.size(); }
    double delay_at(std::size_t i) const {
        return delay_start_s + static_cast<double>(i) * delay_step_s;
    }
};

/// Circular cross-correlation of the averaged snapshot against the
/// back-to-back reference, normalized by the reference energy. Because the
/// measurement passed through the same chain the reference holds, the chain
/// gain and group delay cancel: a single-tap channel of complex gain g
/// yields a peak of amplitude g at the tap's absolute delay, and the
/// reference correlated against itself gives exactly 0 dB at delay zero.
/// The averaged block must be sampled at the reference rate and have the
/// reference length.
CalibratedCir correlate_calibrate(const std::vector<cdouble> &averaged,
                                  const ReferenceRecord &reference,
                                  double bandwidth_hz);

/// Full per-capture chain: resample every snapshot to the critical rate
/// (one sample per chip), band-limit, estimate and remove the common phase
/// drift, average coherently, and correlate against the reference (itself
/// resampled through the same path). At the critical rate the sequence's
/// periodic autocorrelation is an exact delta, so the correlation adds no
/// sidelobes of its own.
CalibratedCir process_capture(const RawCapture &capture,
                              const ReferenceRecord &reference,
                              double bandwidth_hz);

} // namespace canyon
