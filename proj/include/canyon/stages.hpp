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

#include "canyon/config.hpp"

namespace canyon {

/// How a stage runs: where artifacts go, which bands, provenance toggles.
struct StageContext {
    CampaignConfig config;
    std::string out_dir = "out";
    std::string band_filter = "both"; // "158", "300", or "both"
    bool include_timing = true;
};

bool band_selected(const StageContext &ctx, const BandConfig &band);

// Each stage reads its predecessors' artifacts from ctx.out_dir and writes
// its own there, plus a manifest. Missing inputs raise StageDependencyError.
void run_trace(const StageContext &ctx);    // scene -> paths_<band>.{csv,json}
void run_simulate(const StageContext &ctx); // paths -> iq/<band>_*.iq
void run_process(const StageContext &ctx);  // iq -> cir/<band>_bin##.csv
void run_analyze(const StageContext &ctx);  // cir -> report/omni/rose/estimates
void run_sweep(const StageContext &ctx);    // distance sweep -> sweep_<band>.{csv,json}
void run_plot(const StageContext &ctx);     // analysis -> SVG plots

} // namespace canyon
