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

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "canyon/scene.hpp"
#include "canyon/waveform.hpp"

namespace canyon {

/// Rotationally symmetric directional pattern: Gaussian main lobe
/// G(t) = G0 * exp(-4*ln2 * (t/hpbw)^2), clamped at a constant relative
/// sidelobe floor. Gains are linear power gains over isotropic.
struct AntennaPattern {
    double boresight_gain_dbi = 20.0;
    double hpbw_rad = 0.354;
    double sidelobe_floor_db = -30.0; // relative to boresight, <= 0

    /// Linear power gain at an azimuth offset from boresight (wrapped).
    double gain_at(double offset_rad) const;

    /// Pattern whose half-power beamwidth follows from the gain via the
    /// aperture approximation G ~= 41253 / hpbw_deg^2 (equal beamwidths).
    static AntennaPattern from_gain(double gain_dbi,
                                    double sidelobe_floor_db = -30.0);
};

/// Everything the capture simulation needs to know about the instrument.
/// The receiver steps its horn through n_angle_bins pointings of
/// 2*pi/n_angle_bins each and records n_snapshots sequence periods per
/// pointing. Transmit power enters only through the noise level: captures
/// are stored in channel-gain units where 0 dB is the transmitted reference
/// power, so the additive noise variance per complex sample is
/// kT * sample_rate * noise_figure / P_tx.
struct SounderConfig {
    double carrier_hz = 158.0e9;
    double bandwidth_hz = 200.0e6;       // chip rate
    double sequence_duration_s = 1.25e-5;
    int zc_root = 5;
    int oversampling = 2;                // capture samples per chip
    int n_angle_bins = 24;
    int n_snapshots = 150;
    double tx_power_dbm = 10.0;
    double tx_antenna_gain_dbi = 8.0;
    AntennaPattern rx_antenna = AntennaPattern::from_gain(20.0);
    double rx_noise_figure_db = 25.7;
    double phase_drift_std_rad = 0.05;   // random-walk step per snapshot
    bool noiseless = false;
    std::uint64_t seed = 1;

    double angle_step_rad() const;
    double sample_rate_hz() const { return bandwidth_hz * oversampling; }
    std::int64_t sequence_length() const;
    double noise_variance() const; // per complex sample, channel-gain units
    void validate() const;
};

struct CirTap {
    double delay_s = 0.0;
    cdouble amplitude{0.0, 0.0};
};

/// Channel taps seen by a receiver pointed at `pointing_azimuth_rad`: each
/// path's gain times sqrt of the transmit gain and of the receive pattern
/// gain at the path's azimuth offset. Order follows the input path order.
std::vector<CirTap> effective_cir(const std::vector<PropagationPath> &paths,
                                  double pointing_azimuth_rad,
                                  const AntennaPattern &rx_antenna,
                                  double tx_antenna_gain_dbi);

/// Raw IQ block for one receiver pointing: n_snapshots consecutive sequence
/// periods, stored snapshot-major as float32 I/Q exactly as the digitizer
/// and the on-disk format keep them.
struct RawCapture {
    int angle_bin = 0;
    double pointing_azimuth_rad = 0.0;
    std::uint32_t n_snapshots = 0;
    std::uint32_t samples_per_snapshot = 0;
    double sample_rate_hz = 0.0;
    double carrier_hz = 0.0;
    std::vector<std::complex<float>> iq;

    std::span<const std::complex<float>> snapshot(std::uint32_t i) const;
};

/// Simulate the capture for one angle bin: the antenna-weighted,
/// fractionally delayed waveform repeats with a common phase random walk
/// across snapshots plus white receiver noise. Path delays are applied
/// circularly (the sounding is periodic), so every delay must fit inside
/// one sequence period. Randomness comes from the per-bin substream
/// Rng::substream(config.seed, angle_bin); per snapshot the drift increment
/// is drawn first, then one complex normal per sample.
RawCapture simulate_capture(const SounderConfig &config,
                            const std::vector<PropagationPath> &paths,
                            const BasebandWaveform &waveform, int angle_bin);

/// All angle bins (parallelized per bin; bit-identical to serial calls of
/// simulate_capture thanks to the per-bin substreams).
std::vector<RawCapture> simulate_rotation(
    const SounderConfig &config, const std::vector<PropagationPath> &paths,
    const BasebandWaveform &waveform);

} // namespace canyon
