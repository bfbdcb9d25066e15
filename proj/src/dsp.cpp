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

#include "canyon/dsp.hpp"

#include <cmath>
#include <stdexcept>

#include "canyon/fft.hpp"

namespace canyon {

std::vector<cdouble> circular_delay(const std::vector<cdouble> &x,
                                    double delay_samples) {
    if (x.empty())
        throw std::invalid_argument("circular_delay: empty input");
    const std::size_t n = x.size();

    // Whole-sample delays are plain rotations; keep that path lossless.
    const double rounded = std::round(delay_samples);
    if (delay_samples == rounded) {
        long rot = static_cast<long>(
            std::fmod(rounded, static_cast<double>(n)));
        if (rot < 0)
            rot += static_cast<long>(n);
        std::vector<cdouble> rotated(n);
        for (std::size_t i = 0; i < n; ++i)
            rotated[(i + static_cast<std::size_t>(rot)) % n] = x[i];
        return rotated;
    }

    // Fractional delays: exact phase ramp on the DFT, i.e. band-limited
    // interpolation of the periodic signal. A delayed tap then stays a
    // clean interpolation kernel; a short windowed-sinc filter would smear
    // an error skirt around every strong path, 20-30 dB above the kernel's
    // own sidelobes, masking weaker arrivals a few bins away.
    std::vector<cdouble> spectrum = fft::forward(x);
    const double w = -2.0 * pi * delay_samples / static_cast<double>(n);
    for (std::size_t k = 0; k < n; ++k) {
        const long f = fft::signed_bin(k, n);
        if (n % 2 == 0 && static_cast<std::size_t>(2 * f) == n) {
            // Nyquist: average of the +N/2 and -N/2 ramps = cosine.
            spectrum[k] *= std::cos(w * static_cast<double>(f));
        } else {
            spectrum[k] *=
                std::exp(cdouble(0.0, w * static_cast<double>(f)));
        }
    }
    return fft::inverse(spectrum);
}

cdouble interpolate_bandlimited(const std::vector<cdouble> &spectrum,
                                double t) {
    const std::size_t n = spectrum.size();
    if (n == 0)
        throw std::invalid_argument("interpolate_bandlimited: empty spectrum");
    // Trigonometric interpolant x(t) = (1/N) sum_k X[k] exp(2*pi*i*f_k*t/N)
    // with signed frequencies; for even N the Nyquist bin is split to keep
    // the interpolant real for real signals.
    cdouble acc{0.0, 0.0};
    const double w = 2.0 * pi * t / static_cast<double>(n);
    for (std::size_t k = 0; k < n; ++k) {
        const long f = fft::signed_bin(k, n);
        if (n % 2 == 0 && static_cast<std::size_t>(2 * f) == n) {
            // Nyquist: average of +N/2 and -N/2 rotations = cosine.
            acc += spectrum[k] * std::cos(w * static_cast<double>(f));
        } else {
            acc += spectrum[k] * std::exp(cdouble(0.0, w * static_cast<double>(f)));
        }
    }
    return acc / static_cast<double>(n);
}

double refine_peak_position(const std::vector<cdouble> &spectrum,
                            double center) {
    // Golden-section maximization of |x(t)| on (center-1, center+1). The
    // magnitude of a correlation peak is unimodal over a +-1 sample span.
    const double inv_phi = 0.6180339887498949;
    double a = center - 1.0;
    double b = center + 1.0;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = std::abs(interpolate_bandlimited(spectrum, c));
    double fd = std::abs(interpolate_bandlimited(spectrum, d));
    for (int iter = 0; iter < 80 && (b - a) > 1.0e-9; ++iter) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = std::abs(interpolate_bandlimited(spectrum, c));
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = std::abs(interpolate_bandlimited(spectrum, d));
        }
    }
    return 0.5 * (a + b);
}

} // namespace canyon
