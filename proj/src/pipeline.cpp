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

#include "canyon/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "canyon/fft.hpp"

namespace canyon {

std::vector<cdouble> resample(const std::vector<cdouble> &x, double in_rate_hz,
                              double out_rate_hz) {
    if (x.empty())
        throw std::invalid_argument("resample: empty input");
    if (!(in_rate_hz > 0.0) || !(out_rate_hz > 0.0))
        throw std::invalid_argument("resample: rates must be > 0");
    if (in_rate_hz == out_rate_hz)
        return x;
    const std::size_t n = x.size();
    const double out_len_d =
        static_cast<double>(n) * out_rate_hz / in_rate_hz;
    const double rounded = std::round(out_len_d);
    if (std::abs(out_len_d - rounded) > 1.0e-6 || rounded < 1.0)
        throw std::invalid_argument(
            "resample: rate ratio must give an integer output length");
    const std::size_t m = static_cast<std::size_t>(rounded);

    const std::vector<cdouble> spectrum = fft::forward(x);
    std::vector<cdouble> out_spectrum(m, cdouble{0.0, 0.0});
    if (m < n) {
        // Down: keep the output band. The output Nyquist bin (even m)
        // collects both input bins at +-m/2.
        for (std::size_t k = 0; k < m; ++k) {
            const long f = fft::signed_bin(k, m);
            if (m % 2 == 0 && 2 * f == static_cast<long>(m)) {
                out_spectrum[k] = spectrum[static_cast<std::size_t>(f)] +
                                  spectrum[n - static_cast<std::size_t>(f)];
            } else {
                const std::size_t src =
                    f >= 0 ? static_cast<std::size_t>(f)
                           : n - static_cast<std::size_t>(-f);
                out_spectrum[k] = spectrum[src];
            }
        }
    } else {
        // Up: zero-pad. The input Nyquist bin (even n) splits in half.
        for (std::size_t k = 0; k < n; ++k) {
            const long f = fft::signed_bin(k, n);
            if (n % 2 == 0 && 2 * f == static_cast<long>(n)) {
                out_spectrum[static_cast<std::size_t>(f)] += 0.5 * spectrum[k];
                out_spectrum[m - static_cast<std::size_t>(f)] +=
                    0.5 * spectrum[k];
            } else {
                const std::size_t dst =
                    f >= 0 ? static_cast<std::size_t>(f)
                           : m - static_cast<std::size_t>(-f);
                out_spectrum[dst] = spectrum[k];
            }
        }
    }
    std::vector<cdouble> out = fft::inverse(out_spectrum);
    const double scale = static_cast<double>(m) / static_cast<double>(n);
    for (cdouble &v : out)
        v *= scale;
    return out;
}

std::vector<cdouble> bandlimit(const std::vector<cdouble> &x,
                               double sample_rate_hz, double bandwidth_hz) {
    if (x.empty())
        throw std::invalid_argument("bandlimit: empty input");
    if (!(sample_rate_hz > 0.0))
        throw std::invalid_argument("bandlimit: sample rate must be > 0");
    if (!(bandwidth_hz > 0.0) || bandwidth_hz > sample_rate_hz)
        throw std::invalid_argument(
            "bandlimit: bandwidth must be in (0, sample_rate]");
    const std::size_t n = x.size();
    std::vector<cdouble> spectrum = fft::forward(x);
    const double bin_hz = sample_rate_hz / static_cast<double>(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double f_hz =
            static_cast<double>(fft::signed_bin(k, n)) * bin_hz;
        if (std::abs(f_hz) > 0.5 * bandwidth_hz + 1.0e-9 * sample_rate_hz)
            spectrum[k] = cdouble{0.0, 0.0};
    }
    return fft::inverse(spectrum);
}

std::vector<double> estimate_phase_drift(
    const std::vector<std::vector<cdouble>> &snapshots) {
    if (snapshots.size() < 2)
        throw std::invalid_argument(
            "estimate_phase_drift: need at least two snapshots");
    const std::size_t n = snapshots.front().size();
    for (const auto &snap : snapshots)
        if (snap.size() != n || n == 0)
            throw std::invalid_argument(
                "estimate_phase_drift: snapshots must share one length");

    std::vector<double> phases(snapshots.size(), 0.0);
    for (std::size_t k = 1; k < snapshots.size(); ++k) {
        cdouble inner{0.0, 0.0};
        for (std::size_t i = 0; i < n; ++i)
            inner += snapshots[k][i] * std::conj(snapshots[0][i]);
        if (std::abs(inner) <= 0.0)
            throw std::invalid_argument(
                "estimate_phase_drift: snapshots are orthogonal, no common "
                "phase to track");
        const double raw = std::arg(inner);
        // Unwrap onto the previous estimate so consecutive phases never
        // differ by more than pi (the drift is a slow random walk).
        const double prev = phases[k - 1];
        phases[k] =
            raw + 2.0 * pi * std::round((prev - raw) / (2.0 * pi));
    }
    return phases;
}

std::vector<cdouble> compensate_and_average(
    const std::vector<std::vector<cdouble>> &snapshots,
    const std::vector<double> &phases_rad) {
    if (snapshots.empty())
        throw std::invalid_argument("compensate_and_average: no snapshots");
    if (snapshots.size() != phases_rad.size())
        throw std::invalid_argument(
            "compensate_and_average: one phase per snapshot required");
    const std::size_t n = snapshots.front().size();
    std::vector<cdouble> avg(n, cdouble{0.0, 0.0});
    for (std::size_t k = 0; k < snapshots.size(); ++k) {
        if (snapshots[k].size() != n)
            throw std::invalid_argument(
                "compensate_and_average: snapshots must share one length");
        const cdouble rotator = std::polar(1.0, -phases_rad[k]);
        for (std::size_t i = 0; i < n; ++i)
            avg[i] += snapshots[k][i] * rotator;
    }
    const double scale = 1.0 / static_cast<double>(snapshots.size());
    for (cdouble &v : avg)
        v *= scale;
    return avg;
}

CalibratedCir correlate_calibrate(const std::vector<cdouble> &averaged,
                                  const ReferenceRecord &reference,
                                  double bandwidth_hz) {
    if (reference.samples.empty())
        throw std::invalid_argument("correlate_calibrate: empty reference");
    if (averaged.size() != reference.samples.size())
        throw std::invalid_argument(
            "correlate_calibrate: measurement and reference lengths differ");
    if (!(reference.sample_rate_hz > 0.0) || !(bandwidth_hz > 0.0))
        throw std::invalid_argument(
            "correlate_calibrate: rates must be > 0");

    double ref_energy = 0.0;
    for (const cdouble &v : reference.samples)
        ref_energy += std::norm(v);
    if (!(ref_energy > 0.0))
        throw std::invalid_argument(
            "correlate_calibrate: reference has no energy");

    // Circular cross-correlation via the DFT; conjugating the reference
    // spectrum aligns the measurement against the full chain response, so
    // chain gain and chain delay drop out of the result.
    const std::vector<cdouble> avg_spec = fft::forward(averaged);
    const std::vector<cdouble> ref_spec = fft::forward(reference.samples);
    std::vector<cdouble> cross(avg_spec.size());
    for (std::size_t k = 0; k < avg_spec.size(); ++k)
        cross[k] = avg_spec[k] * std::conj(ref_spec[k]);
    std::vector<cdouble> corr = fft::inverse(cross);
    // corr[m] now equals sum_n avg[n]*conj(ref[n-m]); dividing by the
    // reference energy makes a unit-gain single-tap channel peak at 1.
    const double scale = 1.0 / ref_energy;

    CalibratedCir cir;
    cir.delay_start_s = 0.0;
    cir.delay_step_s = 1.0 / reference.sample_rate_hz;
    cir.delay_resolution_s = 1.0 / bandwidth_hz;
    cir.amplitude.resize(corr.size());
    for (std::size_t i = 0; i < corr.size(); ++i)
        cir.amplitude[i] = corr[i] * scale;
    return cir;
}

CalibratedCir process_capture(const RawCapture &capture,
                              const ReferenceRecord &reference,
                              double bandwidth_hz) {
    if (capture.n_snapshots == 0 || capture.samples_per_snapshot == 0)
        throw std::invalid_argument("process_capture: empty capture");
    if (capture.iq.size() != static_cast<std::size_t>(capture.n_snapshots) *
                                 capture.samples_per_snapshot)
        throw std::invalid_argument(
            "process_capture: capture buffer size mismatch");
    if (!(bandwidth_hz > 0.0))
        throw std::invalid_argument("process_capture: bandwidth must be > 0");

    // Resample every snapshot to the critical rate of one sample per chip.
    // There the sounding sequence's periodic autocorrelation is an exact
    // delta, so the correlation step cannot add sidelobes of its own.
    std::vector<std::vector<cdouble>> snapshots(capture.n_snapshots);
    for (std::uint32_t s = 0; s < capture.n_snapshots; ++s) {
        const auto raw = capture.snapshot(s);
        std::vector<cdouble> wide(raw.size());
        for (std::size_t i = 0; i < raw.size(); ++i)
            wide[i] = cdouble(raw[i].real(), raw[i].imag());
        snapshots[s] = resample(wide, capture.sample_rate_hz, bandwidth_hz);
    }

    ReferenceRecord critical = reference;
    critical.samples =
        resample(reference.samples, reference.sample_rate_hz, bandwidth_hz);
    critical.sample_rate_hz = bandwidth_hz;
    const std::size_t n = critical.samples.size();
    if (snapshots.front().size() != n)
        throw std::invalid_argument(
            "process_capture: snapshot and reference lengths differ");

    double ref_energy = 0.0;
    for (const cdouble &v : critical.samples)
        ref_energy += std::norm(v);
    if (!(ref_energy > 0.0))
        throw std::invalid_argument(
            "process_capture: reference has no energy");

    // Matched-filter every snapshot before tracking the oscillator drift.
    // Tracking on raw samples breaks down once the per-sample SNR goes
    // negative (weak pointings see the channel through the antenna's
    // sidelobe floor); the correlation concentrates the whole sequence
    // energy into a few delay bins, so the strongest bin keeps a usable
    // SNR wherever there is any detectable path at all. Correlation is
    // linear, so compensating and averaging the correlated snapshots is
    // identical to correlating the compensated average.
    const std::vector<cdouble> ref_spec = fft::forward(critical.samples);
    std::vector<std::vector<cdouble>> correlated(snapshots.size());
    std::vector<double> sum_power(n, 0.0);
    for (std::size_t k = 0; k < snapshots.size(); ++k) {
        std::vector<cdouble> spec = fft::forward(snapshots[k]);
        for (std::size_t i = 0; i < n; ++i)
            spec[i] *= std::conj(ref_spec[i]);
        correlated[k] = fft::inverse(spec);
        for (std::size_t i = 0; i < n; ++i)
            sum_power[i] += std::norm(correlated[k][i]);
    }
    // The drift-immune noncoherent sum picks the tracking bin.
    std::size_t peak = 0;
    for (std::size_t i = 1; i < n; ++i)
        if (sum_power[i] > sum_power[peak])
            peak = i;

    // Track only when the peak clearly rises above the noise. The sum of
    // many per-snapshot powers concentrates tightly around its mean, so
    // noise-only captures have a peak within a dB of the median bin, while
    // any trackable echo sits far above it. Compensating against a noise
    // bin would be worse than not compensating: it phase-aligns that bin's
    // noise across snapshots, exempting it from the averaging suppression
    // and planting a spurious arrival at the single-snapshot noise level.
    // An uncompensated slow random-walk drift only costs a fraction of the
    // coherent-averaging gain, which a noise-only capture cannot miss, and
    // below roughly 10 dB per-snapshot SNR in the tracking bin the phase
    // estimates jitter more than the drift they would remove.
    std::vector<double> median_scratch(sum_power);
    std::nth_element(median_scratch.begin(),
                     median_scratch.begin() + median_scratch.size() / 2,
                     median_scratch.end());
    const double median_sum = median_scratch[median_scratch.size() / 2];
    const bool trackable = median_sum > 0.0
                               ? sum_power[peak] >= 10.0 * median_sum
                               : sum_power[peak] > 0.0;

    std::vector<double> phases(snapshots.size(), 0.0);
    if (snapshots.size() > 1 && trackable) {
        std::vector<std::vector<cdouble>> peak_series(snapshots.size());
        for (std::size_t k = 0; k < snapshots.size(); ++k)
            peak_series[k] = {correlated[k][peak]};
        phases = estimate_phase_drift(peak_series);
    }
    const std::vector<cdouble> averaged =
        compensate_and_average(correlated, phases);

    CalibratedCir cir;
    cir.delay_start_s = 0.0;
    cir.delay_step_s = 1.0 / critical.sample_rate_hz;
    cir.delay_resolution_s = 1.0 / bandwidth_hz;
    cir.amplitude.resize(n);
    const double scale = 1.0 / ref_energy;
    for (std::size_t i = 0; i < n; ++i)
        cir.amplitude[i] = averaged[i] * scale;
    cir.angle_bin = capture.angle_bin;
    cir.pointing_azimuth_rad = capture.pointing_azimuth_rad;
    return cir;
}

} // namespace canyon
