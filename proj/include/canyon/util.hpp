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

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace canyon {

using cdouble = std::complex<double>;

inline constexpr double speed_of_light_mps = 299792458.0;
inline constexpr double boltzmann_j_per_k = 1.380649e-23;
inline constexpr double reference_temperature_k = 290.0;
inline constexpr double pi = 3.141592653589793238462643383279502884;

// Powers below this are reported as -400 dB instead of -inf so that report
// files stay finite; the noise-floor estimator has its own -inf sentinel.
inline constexpr double db_floor = -400.0;

inline double power_to_db(double power) {
    if (!(power > 1.0e-40))
        return db_floor;
    return 10.0 * std::log10(power);
}

inline double db_to_power(double db) { return std::pow(10.0, db / 10.0); }
inline double db_to_amplitude(double db) { return std::pow(10.0, db / 20.0); }
inline double amplitude_to_db(double a) { return power_to_db(a * a); }

/// Wrap an angle to (-pi, pi].
inline double wrap_pm_pi(double angle_rad) {
    double a = std::remainder(angle_rad, 2.0 * pi);
    if (a <= -pi)
        a += 2.0 * pi;
    return a;
}

/// Wrap an angle to [0, 2*pi).
inline double wrap_2pi(double angle_rad) {
    double a = std::fmod(angle_rad, 2.0 * pi);
    if (a < 0.0)
        a += 2.0 * pi;
    return a;
}

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Deterministic random stream: mt19937_64 with explicit Box-Muller normals,
/// so draws are reproducible bit-for-bit for a given seed and draw order.
/// Independent substreams (one per receiver angle bin) are derived with
/// substream(), which decorrelates the counter through splitmix64; serial
/// and parallel capture simulations therefore agree exactly.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(splitmix64(seed)) {}

    static Rng substream(std::uint64_t seed, std::uint64_t index) {
        Rng r(0);
        r.eng_.seed(splitmix64(seed + (index + 1) * 0x9E3779B97F4A7C15ULL));
        return r;
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() {
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }

    /// Standard normal. Box-Muller; the second value of each pair is cached.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = 0.0;
        do {
            u1 = uniform();
        } while (u1 <= 0.0);
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        spare_ = r * std::sin(2.0 * pi * u2);
        has_spare_ = true;
        return r * std::cos(2.0 * pi * u2);
    }

    /// Circularly symmetric complex normal with E|z|^2 = 1.
    cdouble complex_normal() {
        const double re = normal();
        const double im = normal();
        return {re * 0.7071067811865476, im * 0.7071067811865476};
    }

  private:
    std::mt19937_64 eng_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace canyon
