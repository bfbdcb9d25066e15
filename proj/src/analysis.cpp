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

#include "canyon/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "canyon/dsp.hpp"
#include "canyon/fft.hpp"
#include "canyon/scene.hpp"

namespace canyon {

namespace {

void require_shared_axis(const std::vector<CalibratedCir> &cirs) {
    if (cirs.empty())
        throw std::invalid_argument("analysis: no impulse responses given");
    const CalibratedCir &first = cirs.front();
    if (first.size() == 0)
        throw std::invalid_argument("analysis: empty impulse response");
    for (const CalibratedCir &cir : cirs) {
        const bool same = cir.size() == first.size() &&
                          cir.delay_start_s == first.delay_start_s &&
                          cir.delay_step_s == first.delay_step_s;
        if (!same)
            throw std::invalid_argument(
                "analysis: impulse responses must share one delay axis");
    }
}

} // namespace

OmniCir pseudo_omni(const std::vector<CalibratedCir> &cirs) {
    require_shared_axis(cirs);
    const std::size_t n = cirs.front().size();
    OmniCir omni;
    omni.delay_start_s = cirs.front().delay_start_s;
    omni.delay_step_s = cirs.front().delay_step_s;
    omni.delay_resolution_s = cirs.front().delay_resolution_s;
    omni.power_db.resize(n);
    omni.contributing_angle.resize(n);
    // The beams overlap, so summing power over pointings would double-count
    // energy; the max over pointings tracks each path at the pointing that
    // sees it best.
    for (std::size_t i = 0; i < n; ++i) {
        double best = -1.0;
        int best_bin = cirs.front().angle_bin;
        for (const CalibratedCir &cir : cirs) {
            const double p = std::norm(cir.amplitude[i]);
            if (p > best) {
                best = p;
                best_bin = cir.angle_bin;
            }
        }
        omni.power_db[i] = power_to_db(best);
        omni.contributing_angle[i] = best_bin;
    }
    return omni;
}

double estimate_noise_floor(const CalibratedCir &cir, double guard_fraction) {
    if (cir.size() == 0)
        throw std::invalid_argument("estimate_noise_floor: empty input");
    if (!(guard_fraction > 0.0) || !(guard_fraction <= 1.0))
        throw std::invalid_argument(
            "estimate_noise_floor: guard fraction must be in (0, 1]");
    const std::size_t n = cir.size();
    const std::size_t guard = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::floor(static_cast<double>(n) *
                                               guard_fraction)));
    const std::size_t begin = n - guard;

    std::vector<double> powers(guard);
    for (std::size_t i = 0; i < guard; ++i)
        powers[i] = std::norm(cir.amplitude[begin + i]);
    std::vector<double> sorted(powers);
    std::nth_element(sorted.begin(), sorted.begin() + guard / 2, sorted.end());
    const double median = sorted[guard / 2];
    if (median < 1.0e-30)
        return -std::numeric_limits<double>::infinity();

    // Bins more than 10 dB above the median are late echoes, not noise;
    // drop them and their 10-bin neighborhoods before averaging.
    const double peak_threshold = 10.0 * median;
    std::vector<bool> excluded(guard, false);
    for (std::size_t i = 0; i < guard; ++i) {
        if (powers[i] > peak_threshold) {
            const std::size_t lo = i >= 10 ? i - 10 : 0;
            const std::size_t hi = std::min(guard, i + 11);
            for (std::size_t j = lo; j < hi; ++j)
                excluded[j] = true;
        }
    }
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < guard; ++i) {
        if (!excluded[i]) {
            sum += powers[i];
            ++count;
        }
    }
    if (count == 0)
        return power_to_db(median);
    return power_to_db(sum / static_cast<double>(count));
}

std::vector<PathEstimate> extract_paths(const std::vector<CalibratedCir> &cirs,
                                        double noise_floor_db,
                                        double margin_db,
                                        double same_delay_rejection_db) {
    require_shared_axis(cirs);
    if (!(margin_db >= 0.0))
        throw std::invalid_argument("extract_paths: margin must be >= 0");
    if (!(same_delay_rejection_db > 0.0))
        throw std::invalid_argument(
            "extract_paths: same-delay rejection must be > 0 dB");
    const std::size_t n_bins = cirs.size();
    const std::size_t n = cirs.front().size();

    double threshold_db = noise_floor_db + margin_db;
    if (!std::isfinite(threshold_db)) {
        // Noiseless data has no measurable floor; fall back to a fixed
        // dynamic range below the strongest bin anywhere.
        double max_db = db_floor;
        for (const CalibratedCir &cir : cirs)
            for (const cdouble &a : cir.amplitude)
                max_db = std::max(max_db, power_to_db(std::norm(a)));
        threshold_db = max_db - 60.0;
    }
    const double threshold_pow = db_to_power(threshold_db);

    // Successive cancellation over the joint (pointing, delay) plane.
    // Strong arrivals dominate everything near them twice over: their
    // interpolation-kernel sidelobes spread across delay, and the receive
    // pattern repeats them into other pointings (the beam is wider than
    // the rotation step, and the sidelobe floor leaks them everywhere).
    // Peak-picking on raw profiles cannot separate a weak arrival from
    // that clutter, so each detected path is measured per pointing at its
    // refined delay and subtracted before the search continues.
    std::vector<std::vector<cdouble>> residual(n_bins);
    std::vector<std::vector<cdouble>> spectra(n_bins);
    for (std::size_t b = 0; b < n_bins; ++b) {
        residual[b] = cirs[b].amplitude;
        spectra[b] = fft::forward(residual[b]);
    }

    const double res_bins =
        cirs.front().delay_resolution_s / cirs.front().delay_step_s;
    std::vector<std::vector<double>> claimed(n_bins);
    auto near_claimed = [&](std::size_t b, double t) {
        for (const double c : claimed[b]) {
            double d = std::abs(t - c);
            d = std::min(d, static_cast<double>(n) - d);
            if (d < res_bins)
                return true;
        }
        return false;
    };

    struct Detection {
        PathEstimate est;
        double position = 0.0; // refined fractional grid index
    };
    std::vector<Detection> detections;
    const std::size_t max_iterations = 64 + 16 * n_bins;
    for (std::size_t iteration = 0; iteration < max_iterations;
         ++iteration) {
        std::size_t best_b = 0, best_i = 0;
        double best_p = -1.0;
        for (std::size_t b = 0; b < n_bins; ++b)
            for (std::size_t i = 0; i < n; ++i) {
                const double p = std::norm(residual[b][i]);
                if (p > best_p && p >= threshold_pow) {
                    best_p = p;
                    best_b = b;
                    best_i = i;
                }
            }
        if (best_p < threshold_pow)
            break;

        const double t = refine_peak_position(spectra[best_b],
                                              static_cast<double>(best_i));
        const cdouble amp = interpolate_bandlimited(spectra[best_b], t);
        // A merged multi-ray lobe is one detection: a single kernel cannot
        // fit it exactly, so later iterations keep finding leftovers inside
        // the claimed resolution cell. Those rounds subtract silently,
        // deflating the misfit without inventing extra paths.
        if (!near_claimed(best_b, t)) {
            Detection det;
            det.position = t;
            det.est.delay_s =
                cirs[best_b].delay_start_s + t * cirs[best_b].delay_step_s;
            det.est.angle_bin = cirs[best_b].angle_bin;
            det.est.amplitude = amp;
            det.est.power_db = power_to_db(std::norm(amp));
            detections.push_back(det);
            claimed[best_b].push_back(t);
        }

        // Remove this component from every pointing where the same-delay
        // content is decisively weaker - that is the pattern's copy of the
        // detected path. Comparable-strength content is someone else's
        // signal (e.g. the mirror arrival of a symmetric reflection pair)
        // and is left for a later iteration. Copies far below the detection
        // threshold can never be detected and are not worth subtracting.
        const double w = -2.0 * pi * t / static_cast<double>(n);
        const double negligible = 0.125 * std::sqrt(threshold_pow);
        for (std::size_t b = 0; b < n_bins; ++b) {
            const cdouble a_b = (b == best_b)
                                    ? amp
                                    : interpolate_bandlimited(spectra[b], t);
            if (b != best_b && (std::abs(a_b) > 0.5 * std::abs(amp) ||
                                std::abs(a_b) < negligible))
                continue;
            for (std::size_t k = 0; k < n; ++k) {
                const long f = fft::signed_bin(k, n);
                if (n % 2 == 0 && static_cast<std::size_t>(2 * f) == n)
                    spectra[b][k] -= a_b * std::cos(w * static_cast<double>(f));
                else
                    spectra[b][k] -=
                        a_b * std::exp(cdouble(0.0, w * static_cast<double>(f)));
            }
            residual[b] = fft::inverse(spectra[b]);
        }
    }

    std::sort(detections.begin(), detections.end(),
              [](const Detection &a, const Detection &b) {
                  return a.est.power_db > b.est.power_db;
              });

    // Cleanup, strongest detection first:
    //  - a path aimed midway between two pointings is seen equally by both
    //    and escapes subtraction in the second one; same-delay detections
    //    in adjacent pointings collapse onto the stronger;
    //  - the misfit of a single kernel against a merged multi-ray lobe
    //    rings a few bins to either side; a detection that close to a far
    //    stronger cluster in the same or an adjacent pointing is that
    //    residue, not a path (the instrument's close-in dynamic-range
    //    mask);
    //  - the pattern's sidelobe floor repeats strong arrivals in every
    //    pointing; a detection more than same_delay_rejection_db below a
    //    stronger same-delay one anywhere is that leakage.
    // Arrivals of comparable strength pass all three rules.
    const double res_s = cirs.front().delay_resolution_s;
    const double residue_mask_span_s = 5.0 * res_s;
    const double residue_mask_db = 20.0;
    const long nb = static_cast<long>(n_bins);
    std::vector<PathEstimate> estimates;
    for (const Detection &det : detections) {
        bool duplicate = false;
        for (const PathEstimate &stronger : estimates) {
            const double gap_s = std::abs(det.est.delay_s - stronger.delay_s);
            if (gap_s >= residue_mask_span_s)
                continue;
            const double gap_db = stronger.power_db - det.est.power_db;
            long d = std::abs(static_cast<long>(det.est.angle_bin) -
                              static_cast<long>(stronger.angle_bin));
            d = std::min(d, nb - d);
            if ((d <= 1 && gap_s < res_s) ||
                (d <= 1 && gap_db >= residue_mask_db) ||
                (gap_s < res_s && gap_db >= same_delay_rejection_db)) {
                duplicate = true;
                break;
            }
        }
        if (!duplicate)
            estimates.push_back(det.est);
    }
    return estimates;
}

GainReport strongest_path_report(const std::vector<PathEstimate> &estimates,
                                 double los_distance_m, double carrier_hz,
                                 double tx_antenna_gain_dbi,
                                 double rx_boresight_gain_dbi) {
    if (estimates.empty())
        throw std::invalid_argument(
            "strongest_path_report: no path estimates");
    const PathEstimate *strongest = &estimates.front();
    for (const PathEstimate &est : estimates)
        if (est.power_db > strongest->power_db)
            strongest = &est;
    GainReport report;
    report.measured_gain_db = strongest->power_db;
    report.theoretical_gain_db =
        -free_space_path_loss_db(los_distance_m, carrier_hz) +
        tx_antenna_gain_dbi + rx_boresight_gain_dbi;
    report.delta_db = report.measured_gain_db - report.theoretical_gain_db;
    return report;
}

RoseData rose_data(const std::vector<PathEstimate> &estimates,
                   int n_angle_bins) {
    if (n_angle_bins < 1)
        throw std::invalid_argument("rose_data: need at least one angle bin");
    RoseData rose;
    rose.bin_power_normalized.assign(static_cast<std::size_t>(n_angle_bins),
                                     0.0);
    double total = 0.0;
    for (const PathEstimate &est : estimates) {
        if (est.angle_bin < 0 || est.angle_bin >= n_angle_bins)
            throw std::invalid_argument("rose_data: angle bin out of range");
        total += db_to_power(est.power_db);
    }
    if (!(total > 0.0))
        return rose; // nothing detected: all-zero bins, no dots
    for (const PathEstimate &est : estimates) {
        const double fraction = db_to_power(est.power_db) / total;
        rose.bin_power_normalized[static_cast<std::size_t>(est.angle_bin)] +=
            fraction;
        rose.path_dots.emplace_back(est.angle_bin, fraction);
    }
    // Kill accumulated roundoff so the bins sum to 1 exactly.
    double sum = 0.0;
    for (const double v : rose.bin_power_normalized)
        sum += v;
    for (double &v : rose.bin_power_normalized)
        v /= sum;
    return rose;
}

} // namespace canyon
