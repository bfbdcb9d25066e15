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

#include "canyon/sounder.hpp"

#include <atomic>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "canyon/dsp.hpp"

namespace canyon {

double AntennaPattern::gain_at(double offset_rad) const {
    const double t = wrap_pm_pi(offset_rad);
    const double ratio = t / hpbw_rad;
    const double main_lobe = std::exp(-4.0 * std::log(2.0) * ratio * ratio);
    const double floor_lin = db_to_power(sidelobe_floor_db);
    return db_to_power(boresight_gain_dbi) * std::max(main_lobe, floor_lin);
}

AntennaPattern AntennaPattern::from_gain(double gain_dbi,
                                         double sidelobe_floor_db) {
    AntennaPattern p;
    p.boresight_gain_dbi = gain_dbi;
    // Aperture rule of thumb: gain ~= 41253 / (hpbw_az_deg * hpbw_el_deg)
    // with equal beamwidths in both planes.
    const double hpbw_deg = std::sqrt(41253.0 / db_to_power(gain_dbi));
    p.hpbw_rad = hpbw_deg * pi / 180.0;
    p.sidelobe_floor_db = sidelobe_floor_db;
    return p;
}

double SounderConfig::angle_step_rad() const {
    return 2.0 * pi / static_cast<double>(n_angle_bins);
}

std::int64_t SounderConfig::sequence_length() const {
    return nearest_prime(static_cast<std::int64_t>(
        std::llround(bandwidth_hz * sequence_duration_s)));
}

double SounderConfig::noise_variance() const {
    // Per complex capture sample, in channel-gain units (the transmitted
    // sounding waveform has unit mean power and stands for tx_power_dbm on
    // the air): kT * f_s * noise_figure / P_tx.
    const double tx_power_w = 1.0e-3 * db_to_power(tx_power_dbm);
    return boltzmann_j_per_k * reference_temperature_k * sample_rate_hz() *
           db_to_power(rx_noise_figure_db) / tx_power_w;
}

void SounderConfig::validate() const {
    if (!(carrier_hz > 0.0))
        throw std::invalid_argument("sounder: carrier must be > 0");
    if (!(bandwidth_hz > 0.0))
        throw std::invalid_argument("sounder: bandwidth must be > 0");
    if (!(sequence_duration_s > 0.0))
        throw std::invalid_argument("sounder: sequence duration must be > 0");
    if (zc_root <= 0)
        throw std::invalid_argument("sounder: sequence root must be > 0");
    if (oversampling < 1)
        throw std::invalid_argument("sounder: oversampling must be >= 1");
    if (n_angle_bins < 1)
        throw std::invalid_argument("sounder: angle bin count must be >= 1");
    if (n_snapshots < 2)
        throw std::invalid_argument("sounder: snapshot count must be >= 2");
    if (!(rx_antenna.hpbw_rad > 0.0))
        throw std::invalid_argument("sounder: beamwidth must be > 0");
    if (!(phase_drift_std_rad >= 0.0))
        throw std::invalid_argument("sounder: drift std must be >= 0");
    if (bandwidth_hz * sequence_duration_s < 2.0)
        throw std::invalid_argument(
            "sounder: sequence must span at least two chips");
}

std::vector<CirTap> effective_cir(const std::vector<PropagationPath> &paths,
                                  double pointing_azimuth_rad,
                                  const AntennaPattern &rx_antenna,
                                  double tx_antenna_gain_dbi) {
    const double tx_amp = db_to_amplitude(tx_antenna_gain_dbi);
    std::vector<CirTap> taps;
    taps.reserve(paths.size());
    for (const PropagationPath &path : paths) {
        const double offset = path.aoa_azimuth_rad - pointing_azimuth_rad;
        const double rx_amp = std::sqrt(rx_antenna.gain_at(offset));
        taps.push_back(CirTap{path.delay_s, path.gain * tx_amp * rx_amp});
    }
    return taps;
}

std::span<const std::complex<float>>
RawCapture::snapshot(std::uint32_t i) const {
    if (i >= n_snapshots)
        throw std::out_of_range("RawCapture::snapshot: index out of range");
    return {iq.data() + static_cast<std::size_t>(i) * samples_per_snapshot,
            samples_per_snapshot};
}

RawCapture simulate_capture(const SounderConfig &config,
                            const std::vector<PropagationPath> &paths,
                            const BasebandWaveform &waveform, int angle_bin) {
    config.validate();
    if (waveform.samples.empty())
        throw std::invalid_argument("simulate_capture: empty waveform");
    if (std::abs(waveform.sample_rate_hz - config.sample_rate_hz()) >
        1.0e-6 * config.sample_rate_hz())
        throw std::invalid_argument(
            "simulate_capture: waveform rate does not match the config");
    if (angle_bin < 0 || angle_bin >= config.n_angle_bins)
        throw std::invalid_argument("simulate_capture: angle bin out of range");

    const std::size_t m = waveform.samples.size();
    const double fs = config.sample_rate_hz();
    const double period_s = static_cast<double>(m) / fs;
    const double pointing =
        config.angle_step_rad() * static_cast<double>(angle_bin);

    // Sounding is periodic, so path delays wrap; a delay at or beyond one
    // period would alias onto a shorter one, which is a modeling error.
    for (const PropagationPath &path : paths) {
        if (!(path.delay_s >= 0.0))
            throw std::domain_error("simulate_capture: negative path delay");
        if (!(path.delay_s < period_s))
            throw std::domain_error(
                "simulate_capture: path delay exceeds the sequence period");
    }

    const std::vector<CirTap> taps =
        effective_cir(paths, pointing, config.rx_antenna,
                      config.tx_antenna_gain_dbi);
    std::vector<cdouble> clean(m, cdouble{0.0, 0.0});
    for (const CirTap &tap : taps) {
        const std::vector<cdouble> delayed =
            circular_delay(waveform.samples, tap.delay_s * fs);
        for (std::size_t i = 0; i < m; ++i)
            clean[i] += tap.amplitude * delayed[i];
    }

    RawCapture capture;
    capture.angle_bin = angle_bin;
    capture.pointing_azimuth_rad = pointing;
    capture.n_snapshots = static_cast<std::uint32_t>(config.n_snapshots);
    capture.samples_per_snapshot = static_cast<std::uint32_t>(m);
    capture.sample_rate_hz = fs;
    capture.carrier_hz = config.carrier_hz;
    capture.iq.resize(static_cast<std::size_t>(config.n_snapshots) * m);

    Rng rng = Rng::substream(config.seed, static_cast<std::uint64_t>(angle_bin));
    // complex_normal has E|z|^2 = 1, so scaling by sigma gives circularly
    // symmetric noise with E|n|^2 = noise_variance.
    const double sigma =
        config.noiseless ? 0.0 : std::sqrt(config.noise_variance());

    double drift_phase = 0.0;
    for (std::uint32_t snap = 0; snap < capture.n_snapshots; ++snap) {
        drift_phase += config.phase_drift_std_rad * rng.normal();
        const cdouble rotator = std::polar(1.0, drift_phase);
        std::complex<float> *out =
            capture.iq.data() + static_cast<std::size_t>(snap) * m;
        if (config.noiseless) {
            for (std::size_t i = 0; i < m; ++i) {
                const cdouble v = clean[i] * rotator;
                out[i] = std::complex<float>(static_cast<float>(v.real()),
                                             static_cast<float>(v.imag()));
            }
        } else {
            for (std::size_t i = 0; i < m; ++i) {
                const cdouble v =
                    clean[i] * rotator + sigma * rng.complex_normal();
                out[i] = std::complex<float>(static_cast<float>(v.real()),
                                             static_cast<float>(v.imag()));
            }
        }
    }
    return capture;
}

std::vector<RawCapture> simulate_rotation(
    const SounderConfig &config, const std::vector<PropagationPath> &paths,
    const BasebandWaveform &waveform) {
    config.validate();
    std::vector<RawCapture> captures(
        static_cast<std::size_t>(config.n_angle_bins));
    std::atomic<int> next{0};
    const unsigned n_threads = std::min<unsigned>(
        std::max(1u, std::thread::hardware_concurrency()),
        static_cast<unsigned>(config.n_angle_bins));
    std::vector<std::thread> workers;
    std::exception_ptr error;
    std::mutex error_mutex;
    workers.reserve(n_threads);
    for (unsigned t = 0; t < n_threads; ++t) {
        workers.emplace_back([&] {
            for (;;) {
                const int bin = next.fetch_add(1);
                if (bin >= config.n_angle_bins)
                    return;
                try {
                    captures[static_cast<std::size_t>(bin)] =
                        simulate_capture(config, paths, waveform, bin);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error)
                        error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (std::thread &worker : workers)
        worker.join();
    if (error)
        std::rethrow_exception(error);
    return captures;
}

} // namespace canyon
