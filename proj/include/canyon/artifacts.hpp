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
#include "canyon/pipeline.hpp"
#include "canyon/scene.hpp"

namespace canyon {

/// Write text to path atomically: write a sibling temp file, then rename.
/// A crashed run never leaves a half-written artifact behind.
void write_text_atomic(const std::string &path, const std::string &text);

std::string read_text(const std::string &path);

/// Numbers in CSV artifacts are printed with %.17g so a read-back
/// reproduces the double bit pattern exactly.
std::string format_double(double value);

// --- traced path lists -----------------------------------------------------
std::string paths_to_csv(const std::vector<PropagationPath> &paths);
std::vector<PropagationPath> paths_from_csv(const std::string &text);
std::string paths_to_json(const std::vector<PropagationPath> &paths);

// --- calibrated impulse responses -------------------------------------------
std::string cir_to_csv(const CalibratedCir &cir);
CalibratedCir cir_from_csv(const std::string &text);

// --- analysis products -------------------------------------------------------
std::string omni_to_csv(const OmniCir &omni);
std::string estimates_to_csv(const std::vector<PathEstimate> &estimates);
std::vector<PathEstimate> estimates_from_csv(const std::string &text);
std::string rose_to_csv(const RoseData &rose, int n_angle_bins);

/// Analysis summary for one band: noise floor, path count, strongest-path
/// gain check, earliest significant arrival.
struct BandReport {
    std::string band;
    double noise_floor_db = 0.0;
    int n_paths = 0;
    double first_peak_delay_s = 0.0;
    double strongest_delay_s = 0.0;
    GainReport gain;
};

std::string report_to_json(const BandReport &report);

/// Per-stage provenance record: tool version, configuration hash, the
/// artifacts written, and (unless suppressed) wall-clock timing.
struct Manifest {
    std::string stage;
    std::string version;
    std::uint64_t config_hash = 0;
    std::vector<std::string> outputs;
    bool include_timing = true;
    double elapsed_s = 0.0;
};

std::string manifest_to_json(const Manifest &manifest);

} // namespace canyon
