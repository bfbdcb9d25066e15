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

#include <string>
#include <vector>

#include "canyon/analysis.hpp"

namespace canyon {

/// Power-delay profile plot: the direction-agnostic profile as a line, the
/// noise floor as a dashed rule, extracted paths as markers. Inputs may be
/// empty; the output is then a valid SVG with axes only. Output text is a
/// pure function of the inputs (no timestamps), so replotting identical
/// data yields identical bytes.
std::string render_cir_svg(const OmniCir &omni, double noise_floor_db,
                           const std::vector<PathEstimate> &estimates,
                           const std::string &title);

/// Polar angular-power plot: one wedge per angle bin scaled by its share of
/// total power, path dots on the wedge radius. Same determinism and
/// empty-input guarantees as render_cir_svg.
std::string render_rose_svg(const RoseData &rose, int n_angle_bins,
                            double angle_step_rad, const std::string &title);

} // namespace canyon
