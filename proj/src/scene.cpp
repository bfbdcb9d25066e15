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

#include "canyon/scene.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace canyon {

const char *to_string(PathKind kind) {
    switch (kind) {
    case PathKind::Los:
        return "los";
    case PathKind::Ground:
        return "ground";
    case PathKind::Wall:
        return "wall";
    case PathKind::WallGround:
        return "wall_ground";
    }
    return "unknown";
}

cdouble friis_amplitude(double distance_m, double frequency_hz) {
    if (!(distance_m > 0.0))
        throw std::invalid_argument("friis_amplitude: distance must be > 0");
    if (!(frequency_hz > 0.0))
        throw std::invalid_argument("friis_amplitude: frequency must be > 0");
    const double lambda = speed_of_light_mps / frequency_hz;
    const double magnitude = lambda / (4.0 * pi * distance_m);
    const double phase = -2.0 * pi * distance_m / lambda;
    return std::polar(magnitude, phase);
}

double free_space_path_loss_db(double distance_m, double frequency_hz) {
    if (!(distance_m > 0.0))
        throw std::invalid_argument(
            "free_space_path_loss_db: distance must be > 0");
    if (!(frequency_hz > 0.0))
        throw std::invalid_argument(
            "free_space_path_loss_db: frequency must be > 0");
    return 20.0 *
           std::log10(4.0 * pi * distance_m * frequency_hz /
                      speed_of_light_mps);
}

cdouble fresnel_reflection(double grazing_angle_rad,
                           cdouble relative_permittivity, Polarization pol) {
    if (!(grazing_angle_rad >= 0.0) || !(grazing_angle_rad <= 0.5 * pi))
        throw std::invalid_argument(
            "fresnel_reflection: grazing angle must be in [0, pi/2]");
    if (!(relative_permittivity.real() >= 1.0))
        throw std::invalid_argument(
            "fresnel_reflection: Re(permittivity) must be >= 1");
    const double s = std::sin(grazing_angle_rad);
    const double c = std::cos(grazing_angle_rad);
    // Principal sqrt keeps Re >= 0, the decaying-wave branch for lossy media.
    const cdouble root = std::sqrt(relative_permittivity - c * c);
    if (pol == Polarization::TE)
        return (s - root) / (s + root);
    return (relative_permittivity * s - root) /
           (relative_permittivity * s + root);
}

namespace {

struct Horizontal {
    double x = 0.0;
    double y = 0.0;
};

/// Signed angle from the RX->TX horizontal reference to the arrival
/// direction, wrapped to [0, 2*pi).
double arrival_azimuth(const Horizontal &reference, const Horizontal &dir) {
    const double cross = reference.x * dir.y - reference.y * dir.x;
    const double dot = reference.x * dir.x + reference.y * dir.y;
    return wrap_2pi(std::atan2(cross, dot));
}

} // namespace

std::vector<PropagationPath> trace_paths(const CanyonGeometry &geometry,
                                         const Placement &placement,
                                         double frequency_hz,
                                         int max_wall_order,
                                         const TraceOptions &options) {
    const double w = 0.5 * geometry.street_width_m;
    if (!(geometry.street_width_m > 0.0))
        throw std::invalid_argument("trace_paths: street width must be > 0");
    if (!(geometry.canyon_length_m > 0.0))
        throw std::invalid_argument("trace_paths: canyon length must be > 0");
    if (!(frequency_hz > 0.0))
        throw std::invalid_argument("trace_paths: frequency must be > 0");
    if (max_wall_order < 0)
        throw std::invalid_argument("trace_paths: max_wall_order must be >= 0");
    for (const Vec3 *p : {&placement.tx, &placement.rx}) {
        if (!(p->x >= 0.0) || !(p->x <= geometry.canyon_length_m))
            throw std::invalid_argument(
                "trace_paths: antenna outside canyon span");
        if (!(std::abs(p->y) < w))
            throw std::invalid_argument(
                "trace_paths: antenna outside street width");
        if (!(p->z > 0.0) || !(p->z <= geometry.building_height_m))
            throw std::invalid_argument(
                "trace_paths: antenna height out of range");
    }
    const Vec3 &tx = placement.tx;
    const Vec3 &rx = placement.rx;
    const double dx = tx.x - rx.x;
    const double dy = tx.y - rx.y;
    const double dz = tx.z - rx.z;
    if (std::hypot(dx, dy) <= 0.0)
        throw std::invalid_argument(
            "trace_paths: antennas must be horizontally separated");

    const Horizontal reference{dx, dy};
    std::vector<PropagationPath> paths;

    // Line of sight.
    {
        const double d = std::sqrt(dx * dx + dy * dy + dz * dz);
        PropagationPath p;
        p.delay_s = d / speed_of_light_mps;
        p.aoa_azimuth_rad = arrival_azimuth(reference, reference);
        p.gain = friis_amplitude(d, frequency_hz);
        p.kind = PathKind::Los;
        paths.push_back(p);
    }

    // Single ground reflection: TX image at z = -tx.z.
    if (options.include_ground) {
        const double zsum = tx.z + rx.z;
        const double d = std::sqrt(dx * dx + dy * dy + zsum * zsum);
        const double grazing = std::asin(zsum / d);
        PropagationPath p;
        p.delay_s = d / speed_of_light_mps;
        p.aoa_azimuth_rad = arrival_azimuth(reference, reference);
        p.gain = friis_amplitude(d, frequency_hz) *
                 fresnel_reflection(grazing, geometry.ground_permittivity,
                                    options.polarization);
        p.kind = PathKind::Ground;
        paths.push_back(p);
    }

    // Wall chains. Unfolding the strip y in [-w, w] tiles the plane with
    // mirror boundaries at odd multiples of w; the q-bounce TX image of each
    // family (first crossing toward +w or -w) sits at
    //   y = sign * 2*q*w + (q even ? tx.y : -tx.y),
    // and the straight line from RX to that image crosses exactly q
    // boundaries. Vertical walls leave z untouched, so every bounce of a
    // chain shares one grazing angle. The wall's plane of incidence is
    // orthogonal to the ground's, so the wall sees the complementary
    // polarization of the one configured for the ground.
    const Polarization wall_pol = options.polarization == Polarization::TM
                                      ? Polarization::TE
                                      : Polarization::TM;
    for (int q = 1; q <= max_wall_order; ++q) {
        const double folded_y = (q % 2 == 0) ? tx.y : -tx.y;
        for (const double sign : {1.0, -1.0}) {
            const double image_y = sign * 2.0 * static_cast<double>(q) * w +
                                   folded_y;
            const double ddy = image_y - rx.y;
            {
                const double d = std::sqrt(dx * dx + ddy * ddy + dz * dz);
                const double wall_grazing = std::asin(std::abs(ddy) / d);
                const cdouble wall_coeff = fresnel_reflection(
                    wall_grazing, geometry.wall_permittivity, wall_pol);
                PropagationPath p;
                p.delay_s = d / speed_of_light_mps;
                p.aoa_azimuth_rad =
                    arrival_azimuth(reference, Horizontal{dx, ddy});
                p.gain = friis_amplitude(d, frequency_hz) *
                         std::pow(wall_coeff, q);
                p.kind = PathKind::Wall;
                p.wall_order = q;
                paths.push_back(p);
            }
            if (options.include_ground) {
                // Ground-bounced twin: image additionally mirrored in z = 0.
                const double zsum = tx.z + rx.z;
                const double d = std::sqrt(dx * dx + ddy * ddy + zsum * zsum);
                const double wall_grazing = std::asin(std::abs(ddy) / d);
                const double ground_grazing = std::asin(zsum / d);
                const cdouble wall_coeff = fresnel_reflection(
                    wall_grazing, geometry.wall_permittivity, wall_pol);
                const cdouble ground_coeff = fresnel_reflection(
                    ground_grazing, geometry.ground_permittivity,
                    options.polarization);
                PropagationPath p;
                p.delay_s = d / speed_of_light_mps;
                p.aoa_azimuth_rad =
                    arrival_azimuth(reference, Horizontal{dx, ddy});
                p.gain = friis_amplitude(d, frequency_hz) *
                         std::pow(wall_coeff, q) * ground_coeff;
                p.kind = PathKind::WallGround;
                p.wall_order = q;
                paths.push_back(p);
            }
        }
    }

    std::stable_sort(paths.begin(), paths.end(),
                     [](const PropagationPath &a, const PropagationPath &b) {
                         return a.delay_s < b.delay_s;
                     });
    return paths;
}

} // namespace canyon
