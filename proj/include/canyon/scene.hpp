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

#include "canyon/util.hpp"

namespace canyon {

struct Vec3 {
    double x = 0.0; // along the street
    double y = 0.0; // across the street; 0 = street center line
    double z = 0.0; // height above ground
};

/// Idealized straight street canyon: ground plane at z = 0, two smooth
/// parallel building walls at y = +-street_width/2 running the full canyon
/// length (x in [0, canyon_length]), building tops at z = building_height.
/// Materials are homogeneous complex relative permittivities with the loss
/// in the negative imaginary part.
struct CanyonGeometry {
    double street_width_m = 15.5;
    double building_height_m = 20.0;
    double canyon_length_m = 200.0;
    cdouble ground_permittivity{5.0, -0.4};
    cdouble wall_permittivity{6.0, -0.3};
};

struct Placement {
    Vec3 tx;
    Vec3 rx;
};

/// E-field orientation stated for the *ground* plane of incidence:
/// TM = vertical polarization, TE = horizontal. Wall reflections see the
/// complementary case (a vertical E-field is perpendicular to a wall's
/// horizontal plane of incidence), which trace_paths handles internally.
enum class Polarization { TM, TE };

enum class PathKind { Los, Ground, Wall, WallGround };

const char *to_string(PathKind kind);

/// One specular propagation path. The gain is the complex amplitude of the
/// path at the carrier (free-space spreading times the product of all
/// reflection coefficients); antenna gains are applied later by the sounder.
/// Azimuth convention: 0 rad points from RX toward TX along the street,
/// counter-clockwise positive seen from above, range [0, 2*pi).
struct PropagationPath {
    double delay_s = 0.0;
    double aoa_azimuth_rad = 0.0;
    cdouble gain{0.0, 0.0};
    PathKind kind = PathKind::Los;
    int wall_order = 0; // number of wall bounces; 0 for Los/Ground
};

struct TraceOptions {
    Polarization polarization = Polarization::TM;
    bool include_ground = true;
};

/// Free-space amplitude lambda/(4*pi*d) with propagation phase -2*pi*d/lambda.
/// Throws std::invalid_argument for non-positive distance or frequency.
cdouble friis_amplitude(double distance_m, double frequency_hz);

/// Free-space path loss 20*log10(4*pi*d*f/c) in dB (positive for d beyond
/// the unit sphere).
double free_space_path_loss_db(double distance_m, double frequency_hz);

/// Specular reflection coefficient of a homogeneous half-space for a ray
/// arriving at `grazing_angle_rad` above the surface plane, in the
/// convention where both polarizations tend to -1 at grazing incidence:
///
///   TE:  (sin g - sqrt(eps - cos^2 g)) / (sin g + sqrt(eps - cos^2 g))
///   TM:  (eps*sin g - sqrt(eps - cos^2 g)) / (eps*sin g + sqrt(eps - cos^2 g))
///
/// `pol` here is relative to the reflecting surface itself, not the global
/// antenna polarization. Requires grazing angle in [0, pi/2] and
/// Re(eps) >= 1; |result| <= 1 for passive materials.
cdouble fresnel_reflection(double grazing_angle_rad,
                           cdouble relative_permittivity, Polarization pol);

/// Image-method multipath trace of the canyon: the line-of-sight path, the
/// single ground reflection, wall-reflection chains up to max_wall_order
/// bounces (two mirror sequences per order), and each wall chain's
/// ground-bounced twin. Paths are returned sorted by delay. Both antennas
/// must lie inside the canyon and be horizontally separated.
std::vector<PropagationPath> trace_paths(const CanyonGeometry &geometry,
                                         const Placement &placement,
                                         double frequency_hz,
                                         int max_wall_order,
                                         const TraceOptions &options = {});

} // namespace canyon
