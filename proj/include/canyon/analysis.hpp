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

#include <limits>
#include <utility>
#include <vector>

#include "canyon/pipeline.hpp"

namespace canyon {

/// Direction-agnostic power delay profile assembled from all directional
/// impulse responses: per delay bin the maximum power over angle bins (not
/// the sum - the beams overlap), with the winning bin recorded.
struct OmniCir {
    double delay_start_s = 0.0;
    double delay_step_s = 0.0;
    double delay_resolution_s = 0.0;
    std::vector<double> power_db;
    std::vector<int> contributing_angle;
};

/// All inputs must share one delay axis. Throws std::invalid_argument on an
/// empty set or mismatched axes.
OmniCir pseudo_omni(const std::vector<CalibratedCir> &cirs);

/// Noise floor in dB from the trailing guard fraction of the delay window:
/// mean linear power over the guard bins, excluding every bin within 10
/// delay bins of a detected peak (any bin more than 10 dB above the guard
/// region's median). Returns -infinity when the guard power sits below the
/// numeric threshold (a noiseless input has no floor to estimate).
double estimate_noise_floor(const CalibratedCir &cir,
                            double guard_fraction = 0.1);

struct PathEstimate {
    double delay_s = 0.0;
    int angle_bin = 0;
    cdouble amplitude{0.0, 0.0};
    double power_db = 0.0;
};

/// Path search over the directional impulse responses by successive
/// cancellation on the joint (pointing, delay) plane. Each iteration takes
/// the strongest remaining sample at least margin_db above the noise
/// floor, refines its delay and complex amplitude on the band-limited
/// interpolant, then measures the same delay in every other pointing and
/// subtracts the arrival's interpolation kernel wherever the content is
/// decisively weaker than the detection - that is the receive pattern's
/// copy of the detected path (the beam is wider than the rotation step and
/// the sidelobe floor repeats strong arrivals everywhere). Content of
/// comparable strength (above half the detected amplitude) is left in
/// place for a later iteration, so a symmetric reflection pair yields both
/// members. Rays closer in delay than one resolution bin merge into one
/// detection; the single-kernel misfit against such a merged lobe is
/// deflated by further silent subtractions inside the claimed resolution
/// cell rather than reported as extra paths.
///
/// Cleanup rules run afterwards, strongest detection first: same-delay
/// detections in cyclically adjacent pointings collapse onto the stronger
/// (a path aimed midway between two pointings is seen equally by both); a
/// detection within five resolution bins of a >= 20 dB stronger detection
/// in the same or an adjacent pointing is discarded as the ringing misfit
/// of that cluster (the close-in dynamic-range mask); and a detection more
/// than same_delay_rejection_db below a stronger same-delay detection in
/// any pointing is discarded as pattern leakage that escaped subtraction.
/// Pass +infinity (the default) to disable the last rule. Result is sorted
/// by power descending. Same-delay arrivals whose strengths differ by more
/// than the comparable band but less than same_delay_rejection_db, and
/// close-in arrivals more than 20 dB apart, are the instrument's blind
/// spots: they are subtracted or pruned with the leakage.
std::vector<PathEstimate> extract_paths(
    const std::vector<CalibratedCir> &cirs, double noise_floor_db,
    double margin_db,
    double same_delay_rejection_db =
        std::numeric_limits<double>::infinity());

struct GainReport {
    double measured_gain_db = 0.0;
    double theoretical_gain_db = 0.0;
    double delta_db = 0.0;
};

/// Strongest extracted path versus the free-space expectation
/// -FSPL(d, f) + G_tx + G_rx for the line-of-sight distance.
GainReport strongest_path_report(const std::vector<PathEstimate> &estimates,
                                 double los_distance_m, double carrier_hz,
                                 double tx_antenna_gain_dbi,
                                 double rx_boresight_gain_dbi);

/// Angular power distribution for a rose plot: per angle bin the sum of its
/// paths' linear powers, normalized so the bins sum to exactly 1; each
/// path's own normalized power is kept as a dot in its bin.
struct RoseData {
    std::vector<double> bin_power_normalized;
    std::vector<std::pair<int, double>> path_dots; // (angle_bin, fraction)
};

RoseData rose_data(const std::vector<PathEstimate> &estimates,
                   int n_angle_bins);

} // namespace canyon
