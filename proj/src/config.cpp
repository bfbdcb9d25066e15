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

#include "canyon/config.hpp"

#include <json.hpp>

#include <cmath>
#include <set>

namespace canyon {

using nlohmann::json;

const char *to_string(Scale scale) {
    return scale == Scale::Desk ? "desk" : "full";
}

namespace {

// The scale knob fixes chip rate and sequence duration together: the same
// processing chain runs either fast enough for unit tests or at the
// full-resolution setting.
void apply_scale(SounderConfig &sounder, Scale scale) {
    if (scale == Scale::Desk) {
        sounder.bandwidth_hz = 200.0e6;
        sounder.sequence_duration_s = 1.25e-5;
    } else {
        sounder.bandwidth_hz = 2.0e9;
        sounder.sequence_duration_s = 1.0e-4;
    }
}

CampaignConfig default_config() {
    CampaignConfig c;
    c.placement.tx = Vec3{0.0, 0.0, 1.5};
    c.placement.rx = Vec3{30.0, 0.0, 1.5};
    apply_scale(c.sounder, c.scale);
    c.bands = {BandConfig{"158ghz", 158.0e9, 10.0, 25.7},
               BandConfig{"300ghz", 300.0e9, 3.0, 28.7}};
    return c;
}

[[noreturn]] void fail(const std::string &path, const std::string &what) {
    throw ConfigError("config: " + path + ": " + what);
}

void check_keys(const json &j, const std::string &path,
                const std::set<std::string> &allowed) {
    for (const auto &item : j.items()) {
        if (allowed.find(item.key()) == allowed.end()) {
            const std::string where =
                path.empty() ? item.key() : path + "." + item.key();
            throw ConfigError("config: unknown key: " + where);
        }
    }
}

double as_double(const json &v, const std::string &path) {
    if (!v.is_number())
        fail(path, "expected a number");
    return v.get<double>();
}

int as_int(const json &v, const std::string &path) {
    if (!v.is_number_integer())
        fail(path, "expected an integer");
    return v.get<int>();
}

bool as_bool(const json &v, const std::string &path) {
    if (!v.is_boolean())
        fail(path, "expected a boolean");
    return v.get<bool>();
}

std::string as_string(const json &v, const std::string &path) {
    if (!v.is_string())
        fail(path, "expected a string");
    return v.get<std::string>();
}

Vec3 as_vec3(const json &v, const std::string &path) {
    if (!v.is_array() || v.size() != 3)
        fail(path, "expected [x, y, z]");
    return Vec3{as_double(v[0], path + "[0]"), as_double(v[1], path + "[1]"),
                as_double(v[2], path + "[2]")};
}

} // namespace

SounderConfig CampaignConfig::sounder_for(const BandConfig &band) const {
    SounderConfig s = sounder;
    s.carrier_hz = band.carrier_hz;
    s.tx_power_dbm = band.tx_power_dbm;
    s.rx_noise_figure_db = band.rx_noise_figure_db;
    apply_scale(s, scale);
    // Decorrelate the bands' noise without a second seed knob.
    s.seed = splitmix64(seed ^ fnv1a64(band.name));
    return s;
}

void CampaignConfig::validate() const {
    if (!(geometry.street_width_m > 0.0))
        fail("scene.street_width_m", "must be > 0");
    if (!(geometry.building_height_m > 0.0))
        fail("scene.building_height_m", "must be > 0");
    if (!(geometry.canyon_length_m > 0.0))
        fail("scene.canyon_length_m", "must be > 0");
    if (!(geometry.ground_permittivity.real() >= 1.0))
        fail("scene.ground_permittivity_re", "must be >= 1");
    if (!(geometry.wall_permittivity.real() >= 1.0))
        fail("scene.wall_permittivity_re", "must be >= 1");
    if (max_wall_order < 0)
        fail("trace.max_wall_order", "must be >= 0");
    if (sounder.oversampling < 1)
        fail("sounder.oversampling", "must be >= 1");
    if (sounder.n_angle_bins < 1)
        fail("sounder.n_angle_bins", "must be >= 1");
    if (sounder.n_snapshots < 2)
        fail("sounder.n_snapshots", "must be >= 2");
    if (sounder.zc_root < 1)
        fail("sounder.zc_root", "must be >= 1");
    if (!(sounder.phase_drift_std_rad >= 0.0))
        fail("sounder.phase_drift_std_rad", "must be >= 0");
    if (!(sounder.rx_antenna.hpbw_rad > 0.0))
        fail("sounder.rx_antenna_gain_dbi", "implies a non-positive beamwidth");
    if (bands.empty())
        fail("bands", "must list at least one band");
    std::set<std::string> names;
    for (std::size_t i = 0; i < bands.size(); ++i) {
        const std::string path = "bands[" + std::to_string(i) + "]";
        if (bands[i].name.empty())
            fail(path + ".name", "must not be empty");
        if (!names.insert(bands[i].name).second)
            fail(path + ".name", "duplicate band name");
        if (!(bands[i].carrier_hz > 0.0))
            fail(path + ".carrier_hz", "must be > 0");
    }
    if (!(extraction_margin_db >= 0.0))
        fail("analysis.extraction_margin_db", "must be >= 0");
    if (!(guard_fraction > 0.0) || !(guard_fraction <= 1.0))
        fail("analysis.guard_fraction", "must be in (0, 1]");
}

CampaignConfig parse_config(const std::string &json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error &e) {
        throw ConfigError(std::string("config: not valid JSON: ") + e.what());
    }
    if (!j.is_object())
        throw ConfigError("config: top level must be an object");

    CampaignConfig c = default_config();
    check_keys(j, "", {"scale", "seed", "scene", "placement", "trace",
                       "sounder", "bands", "analysis"});

    if (j.contains("scale")) {
        const std::string s = as_string(j["scale"], "scale");
        if (s == "desk")
            c.scale = Scale::Desk;
        else if (s == "full")
            c.scale = Scale::Full;
        else
            fail("scale", "must be \"desk\" or \"full\"");
    }
    if (j.contains("seed")) {
        if (j["seed"].is_number_unsigned())
            c.seed = j["seed"].get<std::uint64_t>();
        else
            fail("seed", "expected a non-negative integer");
    }
    if (j.contains("scene")) {
        const json &s = j["scene"];
        if (!s.is_object())
            fail("scene", "expected an object");
        check_keys(s, "scene",
                   {"street_width_m", "building_height_m", "canyon_length_m",
                    "ground_permittivity_re", "ground_permittivity_im",
                    "wall_permittivity_re", "wall_permittivity_im"});
        auto &g = c.geometry;
        if (s.contains("street_width_m"))
            g.street_width_m =
                as_double(s["street_width_m"], "scene.street_width_m");
        if (s.contains("building_height_m"))
            g.building_height_m =
                as_double(s["building_height_m"], "scene.building_height_m");
        if (s.contains("canyon_length_m"))
            g.canyon_length_m =
                as_double(s["canyon_length_m"], "scene.canyon_length_m");
        double gr = g.ground_permittivity.real();
        double gi = g.ground_permittivity.imag();
        double wr = g.wall_permittivity.real();
        double wi = g.wall_permittivity.imag();
        if (s.contains("ground_permittivity_re"))
            gr = as_double(s["ground_permittivity_re"],
                           "scene.ground_permittivity_re");
        if (s.contains("ground_permittivity_im"))
            gi = as_double(s["ground_permittivity_im"],
                           "scene.ground_permittivity_im");
        if (s.contains("wall_permittivity_re"))
            wr = as_double(s["wall_permittivity_re"],
                           "scene.wall_permittivity_re");
        if (s.contains("wall_permittivity_im"))
            wi = as_double(s["wall_permittivity_im"],
                           "scene.wall_permittivity_im");
        g.ground_permittivity = cdouble(gr, gi);
        g.wall_permittivity = cdouble(wr, wi);
    }
    if (j.contains("placement")) {
        const json &p = j["placement"];
        if (!p.is_object())
            fail("placement", "expected an object");
        check_keys(p, "placement", {"tx", "rx"});
        if (p.contains("tx"))
            c.placement.tx = as_vec3(p["tx"], "placement.tx");
        if (p.contains("rx"))
            c.placement.rx = as_vec3(p["rx"], "placement.rx");
    }
    if (j.contains("trace")) {
        const json &t = j["trace"];
        if (!t.is_object())
            fail("trace", "expected an object");
        check_keys(t, "trace",
                   {"polarization", "include_ground", "max_wall_order"});
        if (t.contains("polarization")) {
            const std::string p =
                as_string(t["polarization"], "trace.polarization");
            if (p == "vertical")
                c.polarization = Polarization::TM;
            else if (p == "horizontal")
                c.polarization = Polarization::TE;
            else
                fail("trace.polarization",
                     "must be \"vertical\" or \"horizontal\"");
        }
        if (t.contains("include_ground"))
            c.include_ground =
                as_bool(t["include_ground"], "trace.include_ground");
        if (t.contains("max_wall_order"))
            c.max_wall_order =
                as_int(t["max_wall_order"], "trace.max_wall_order");
    }
    double rx_gain_dbi = 20.0;
    double rx_sidelobe_db = -30.0;
    if (j.contains("sounder")) {
        const json &s = j["sounder"];
        if (!s.is_object())
            fail("sounder", "expected an object");
        check_keys(s, "sounder",
                   {"oversampling", "n_angle_bins", "n_snapshots", "zc_root",
                    "tx_antenna_gain_dbi", "rx_antenna_gain_dbi",
                    "rx_sidelobe_floor_db", "phase_drift_std_rad",
                    "noiseless"});
        if (s.contains("oversampling"))
            c.sounder.oversampling =
                as_int(s["oversampling"], "sounder.oversampling");
        if (s.contains("n_angle_bins"))
            c.sounder.n_angle_bins =
                as_int(s["n_angle_bins"], "sounder.n_angle_bins");
        if (s.contains("n_snapshots"))
            c.sounder.n_snapshots =
                as_int(s["n_snapshots"], "sounder.n_snapshots");
        if (s.contains("zc_root"))
            c.sounder.zc_root = as_int(s["zc_root"], "sounder.zc_root");
        if (s.contains("tx_antenna_gain_dbi"))
            c.sounder.tx_antenna_gain_dbi = as_double(
                s["tx_antenna_gain_dbi"], "sounder.tx_antenna_gain_dbi");
        if (s.contains("rx_antenna_gain_dbi"))
            rx_gain_dbi = as_double(s["rx_antenna_gain_dbi"],
                                    "sounder.rx_antenna_gain_dbi");
        if (s.contains("rx_sidelobe_floor_db"))
            rx_sidelobe_db = as_double(s["rx_sidelobe_floor_db"],
                                       "sounder.rx_sidelobe_floor_db");
        if (s.contains("phase_drift_std_rad"))
            c.sounder.phase_drift_std_rad = as_double(
                s["phase_drift_std_rad"], "sounder.phase_drift_std_rad");
        if (s.contains("noiseless"))
            c.sounder.noiseless = as_bool(s["noiseless"], "sounder.noiseless");
    }
    c.sounder.rx_antenna =
        AntennaPattern::from_gain(rx_gain_dbi, rx_sidelobe_db);
    if (j.contains("bands")) {
        const json &b = j["bands"];
        if (!b.is_array())
            fail("bands", "expected an array");
        c.bands.clear();
        for (std::size_t i = 0; i < b.size(); ++i) {
            const std::string path = "bands[" + std::to_string(i) + "]";
            const json &e = b[i];
            if (!e.is_object())
                fail(path, "expected an object");
            check_keys(e, path,
                       {"name", "carrier_hz", "tx_power_dbm",
                        "rx_noise_figure_db"});
            BandConfig band;
            if (!e.contains("name"))
                fail(path + ".name", "is required");
            band.name = as_string(e["name"], path + ".name");
            if (!e.contains("carrier_hz"))
                fail(path + ".carrier_hz", "is required");
            band.carrier_hz = as_double(e["carrier_hz"], path + ".carrier_hz");
            if (e.contains("tx_power_dbm"))
                band.tx_power_dbm =
                    as_double(e["tx_power_dbm"], path + ".tx_power_dbm");
            if (e.contains("rx_noise_figure_db"))
                band.rx_noise_figure_db = as_double(
                    e["rx_noise_figure_db"], path + ".rx_noise_figure_db");
            c.bands.push_back(band);
        }
    }
    if (j.contains("analysis")) {
        const json &a = j["analysis"];
        if (!a.is_object())
            fail("analysis", "expected an object");
        check_keys(a, "analysis", {"extraction_margin_db", "guard_fraction"});
        if (a.contains("extraction_margin_db"))
            c.extraction_margin_db = as_double(a["extraction_margin_db"],
                                               "analysis.extraction_margin_db");
        if (a.contains("guard_fraction"))
            c.guard_fraction =
                as_double(a["guard_fraction"], "analysis.guard_fraction");
    }

    apply_scale(c.sounder, c.scale);
    c.sounder.seed = c.seed;
    c.validate();
    return c;
}

std::string canonical_text(const CampaignConfig &config) {
    json j;
    j["scale"] = to_string(config.scale);
    j["seed"] = config.seed;
    j["scene"]["street_width_m"] = config.geometry.street_width_m;
    j["scene"]["building_height_m"] = config.geometry.building_height_m;
    j["scene"]["canyon_length_m"] = config.geometry.canyon_length_m;
    j["scene"]["ground_permittivity_re"] =
        config.geometry.ground_permittivity.real();
    j["scene"]["ground_permittivity_im"] =
        config.geometry.ground_permittivity.imag();
    j["scene"]["wall_permittivity_re"] =
        config.geometry.wall_permittivity.real();
    j["scene"]["wall_permittivity_im"] =
        config.geometry.wall_permittivity.imag();
    j["placement"]["tx"] = {config.placement.tx.x, config.placement.tx.y,
                            config.placement.tx.z};
    j["placement"]["rx"] = {config.placement.rx.x, config.placement.rx.y,
                            config.placement.rx.z};
    j["trace"]["polarization"] =
        config.polarization == Polarization::TM ? "vertical" : "horizontal";
    j["trace"]["include_ground"] = config.include_ground;
    j["trace"]["max_wall_order"] = config.max_wall_order;
    j["sounder"]["oversampling"] = config.sounder.oversampling;
    j["sounder"]["n_angle_bins"] = config.sounder.n_angle_bins;
    j["sounder"]["n_snapshots"] = config.sounder.n_snapshots;
    j["sounder"]["zc_root"] = config.sounder.zc_root;
    j["sounder"]["tx_antenna_gain_dbi"] = config.sounder.tx_antenna_gain_dbi;
    j["sounder"]["rx_antenna_gain_dbi"] =
        config.sounder.rx_antenna.boresight_gain_dbi;
    j["sounder"]["rx_sidelobe_floor_db"] =
        config.sounder.rx_antenna.sidelobe_floor_db;
    j["sounder"]["phase_drift_std_rad"] = config.sounder.phase_drift_std_rad;
    j["sounder"]["noiseless"] = config.sounder.noiseless;
    j["bands"] = json::array();
    for (const BandConfig &band : config.bands) {
        json e;
        e["name"] = band.name;
        e["carrier_hz"] = band.carrier_hz;
        e["tx_power_dbm"] = band.tx_power_dbm;
        e["rx_noise_figure_db"] = band.rx_noise_figure_db;
        j["bands"].push_back(e);
    }
    j["analysis"]["extraction_margin_db"] = config.extraction_margin_db;
    j["analysis"]["guard_fraction"] = config.guard_fraction;
    return j.dump(2) + "\n";
}

std::uint64_t fnv1a64(const std::string &text) {
    std::uint64_t hash = 14695981039346656037ULL;
    for (const char ch : text) {
        hash ^= static_cast<unsigned char>(ch);
        hash *= 1099511628211ULL;
    }
    return hash;
}

std::uint64_t config_hash(const CampaignConfig &config) {
    return fnv1a64(canonical_text(config));
}

} // namespace canyon
