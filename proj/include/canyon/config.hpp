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

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "canyon/scene.hpp"
#include "canyon/sounder.hpp"

namespace canyon {

/// Configuration file problem: unknown key, wrong type, value out of range.
/// The message names the offending JSON path.
class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A processing stage was asked to run before the stage that produces its
/// inputs (e.g. `process` without the capture files from `simulate`).
class StageDependencyError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Measurement scale: "desk" is a reduced bandwidth/duration setting that
/// keeps unit tests fast; "full" is the complete 2 GHz / 100 us setting.
enum class Scale { Desk, Full };

const char *to_string(Scale scale);

/// Per-band radio settings layered on the shared sounder configuration.
struct BandConfig {
    std::string name;          // "158ghz" | "300ghz"
    double carrier_hz = 0.0;
    double tx_power_dbm = 0.0;
    double rx_noise_figure_db = 0.0;
};

/// Everything one campaign needs: geometry, placement, radio settings per
/// band, rotation plan, and analysis thresholds.
struct CampaignConfig {
    CanyonGeometry geometry;
    Placement placement;
    Polarization polarization = Polarization::TM;
    bool include_ground = true;
    int max_wall_order = 1;

    Scale scale = Scale::Desk;
    SounderConfig sounder; // band-independent fields; carrier etc. per band
    std::vector<BandConfig> bands;

    double extraction_margin_db = 10.0;
    double guard_fraction = 0.1;
    std::uint64_t seed = 1;

    /// Sounder configuration specialized to one band.
    SounderConfig sounder_for(const BandConfig &band) const;

    void validate() const; // throws ConfigError naming the bad field
};

/// Parse a configuration JSON text. Missing keys take defaults; unknown
/// keys are rejected with their full path. The empty object "{}" yields the
/// default desk-scale two-band campaign.
CampaignConfig parse_config(const std::string &json_text);

/// Canonical serialized form: keys sorted, two-space indent, trailing
/// newline. parse_config(canonical_text(c)) round-trips exactly.
std::string canonical_text(const CampaignConfig &config);

/// FNV-1a 64-bit hash of the canonical text; stamped into every artifact
/// manifest so outputs can be traced to the exact configuration.
std::uint64_t config_hash(const CampaignConfig &config);

std::uint64_t fnv1a64(const std::string &text);

} // namespace canyon
