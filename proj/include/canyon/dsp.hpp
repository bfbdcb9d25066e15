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

/// Circularly delay a periodic signal by an arbitrary (possibly fractional)
/// number of samples. Whole-sample delays are exact rotations; fractional
/// delays apply the exact DFT phase ramp (band-limited interpolation of the
/// periodic signal), so a delayed impulse remains an ideal interpolation
/// kernel with no filter-approximation skirt.
std::vector<cdouble> circular_delay(const std::vector<cdouble> &x,
                                    double delay_samples);

/// Evaluate the band-limited (trigonometric) interpolant of a periodic
/// signal at fractional sample index t, given the signal's forward DFT.
cdouble interpolate_bandlimited(const std::vector<cdouble> &spectrum, double t);

/// Locate the fractional index in (center-1, center+1) that maximizes the
/// magnitude of the band-limited interpolant. Golden-section search; exact
/// to numerical precision for an isolated correlation peak.
double refine_peak_position(const std::vector<cdouble> &spectrum,
                            double center);

} // namespace canyon
