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

#include "canyon/artifacts.hpp"

#include <json.hpp>

#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace canyon {

using nlohmann::json;

void write_text_atomic(const std::string &path, const std::string &text) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path())
        fs::create_directories(target.parent_path());
    const fs::path temp = target.string() + ".tmp";
    {
        std::ofstream out(temp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw std::runtime_error("artifacts: cannot open for writing: " +
                                     temp.string());
        out.write(text.data(), static_cast<std::streamsize>(text.size()));
        if (!out)
            throw std::runtime_error("artifacts: write failed: " +
                                     temp.string());
    }
    fs::rename(temp, target);
}

std::string read_text(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("artifacts: cannot open: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::string format_double(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

namespace {

std::vector<std::string> split_lines(const std::string &text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (!line.empty())
            lines.push_back(line);
    }
    return lines;
}

std::vector<std::string> split_fields(const std::string &line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ','))
        fields.push_back(field);
    return fields;
}

double parse_double(const std::string &text, const std::string &what) {
    char *end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (end == text.c_str() || end == nullptr || *end != '\0')
        throw std::runtime_error("artifacts: bad number in " + what + ": " +
                                 text);
    return v;
}

PathKind path_kind_from(const std::string &text) {
    if (text == "los")
        return PathKind::Los;
    if (text == "ground")
        return PathKind::Ground;
    if (text == "wall")
        return PathKind::Wall;
    if (text == "wall_ground")
        return PathKind::WallGround;
    throw std::runtime_error("artifacts: unknown path kind: " + text);
}

} // namespace

std::string paths_to_csv(const std::vector<PropagationPath> &paths) {
    std::string out =
        "kind,wall_order,delay_s,aoa_azimuth_rad,gain_re,gain_im,gain_db\n";
    for (const PropagationPath &p : paths) {
        out += to_string(p.kind);
        out += ',';
        out += std::to_string(p.wall_order);
        out += ',';
        out += format_double(p.delay_s);
        out += ',';
        out += format_double(p.aoa_azimuth_rad);
        out += ',';
        out += format_double(p.gain.real());
        out += ',';
        out += format_double(p.gain.imag());
        out += ',';
        out += format_double(power_to_db(std::norm(p.gain)));
        out += '\n';
    }
    return out;
}

std::vector<PropagationPath> paths_from_csv(const std::string &text) {
    const std::vector<std::string> lines = split_lines(text);
    if (lines.empty() || lines.front().rfind("kind,", 0) != 0)
        throw std::runtime_error("artifacts: not a traced-path table");
    std::vector<PropagationPath> paths;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const std::vector<std::string> f = split_fields(lines[i]);
        if (f.size() != 7)
            throw std::runtime_error("artifacts: bad traced-path row: " +
                                     lines[i]);
        PropagationPath p;
        p.kind = path_kind_from(f[0]);
        p.wall_order = static_cast<int>(parse_double(f[1], "wall_order"));
        p.delay_s = parse_double(f[2], "delay_s");
        p.aoa_azimuth_rad = parse_double(f[3], "aoa_azimuth_rad");
        p.gain = cdouble(parse_double(f[4], "gain_re"),
                         parse_double(f[5], "gain_im"));
        paths.push_back(p);
    }
    return paths;
}

std::string paths_to_json(const std::vector<PropagationPath> &paths) {
    json arr = json::array();
    for (const PropagationPath &p : paths) {
        json e;
        e["kind"] = to_string(p.kind);
        e["wall_order"] = p.wall_order;
        e["delay_s"] = p.delay_s;
        e["aoa_azimuth_rad"] = p.aoa_azimuth_rad;
        e["gain_re"] = p.gain.real();
        e["gain_im"] = p.gain.imag();
        e["gain_db"] = power_to_db(std::norm(p.gain));
        arr.push_back(e);
    }
    return arr.dump(2) + "\n";
}

std::string cir_to_csv(const CalibratedCir &cir) {
    std::string out;
    out += "# angle_bin " + std::to_string(cir.angle_bin) + "\n";
    out += "# pointing_azimuth_rad " + format_double(cir.pointing_azimuth_rad) +
           "\n";
    out += "# delay_start_s " + format_double(cir.delay_start_s) + "\n";
    out += "# delay_step_s " + format_double(cir.delay_step_s) + "\n";
    out +=
        "# delay_resolution_s " + format_double(cir.delay_resolution_s) + "\n";
    out += "delay_s,re,im\n";
    for (std::size_t i = 0; i < cir.size(); ++i) {
        out += format_double(cir.delay_at(i));
        out += ',';
        out += format_double(cir.amplitude[i].real());
        out += ',';
        out += format_double(cir.amplitude[i].imag());
        out += '\n';
    }
    return out;
}

CalibratedCir cir_from_csv(const std::string &text) {
    CalibratedCir cir;
    const std::vector<std::string> lines = split_lines(text);
    bool header_seen = false;
    for (const std::string &line : lines) {
        if (line.rfind("# ", 0) == 0) {
            std::istringstream in(line.substr(2));
            std::string key, value;
            in >> key >> value;
            if (key == "angle_bin")
                cir.angle_bin = static_cast<int>(parse_double(value, key));
            else if (key == "pointing_azimuth_rad")
                cir.pointing_azimuth_rad = parse_double(value, key);
            else if (key == "delay_start_s")
                cir.delay_start_s = parse_double(value, key);
            else if (key == "delay_step_s")
                cir.delay_step_s = parse_double(value, key);
            else if (key == "delay_resolution_s")
                cir.delay_resolution_s = parse_double(value, key);
            else
                throw std::runtime_error(
                    "artifacts: unknown impulse-response field: " + key);
            continue;
        }
        if (!header_seen) {
            if (line != "delay_s,re,im")
                throw std::runtime_error(
                    "artifacts: not an impulse-response table");
            header_seen = true;
            continue;
        }
        const std::vector<std::string> f = split_fields(line);
        if (f.size() != 3)
            throw std::runtime_error("artifacts: bad impulse-response row: " +
                                     line);
        cir.amplitude.emplace_back(parse_double(f[1], "re"),
                                   parse_double(f[2], "im"));
    }
    if (!header_seen)
        throw std::runtime_error("artifacts: not an impulse-response table");
    return cir;
}

std::string omni_to_csv(const OmniCir &omni) {
    std::string out;
    out += "# delay_start_s " + format_double(omni.delay_start_s) + "\n";
    out += "# delay_step_s " + format_double(omni.delay_step_s) + "\n";
    out += "# delay_resolution_s " + format_double(omni.delay_resolution_s) +
           "\n";
    out += "delay_s,power_db,angle_bin\n";
    for (std::size_t i = 0; i < omni.power_db.size(); ++i) {
        out += format_double(omni.delay_start_s +
                             static_cast<double>(i) * omni.delay_step_s);
        out += ',';
        out += format_double(omni.power_db[i]);
        out += ',';
        out += std::to_string(omni.contributing_angle[i]);
        out += '\n';
    }
    return out;
}

std::string estimates_to_csv(const std::vector<PathEstimate> &estimates) {
    std::string out = "delay_s,angle_bin,amp_re,amp_im,power_db\n";
    for (const PathEstimate &est : estimates) {
        out += format_double(est.delay_s);
        out += ',';
        out += std::to_string(est.angle_bin);
        out += ',';
        out += format_double(est.amplitude.real());
        out += ',';
        out += format_double(est.amplitude.imag());
        out += ',';
        out += format_double(est.power_db);
        out += '\n';
    }
    return out;
}

std::vector<PathEstimate> estimates_from_csv(const std::string &text) {
    const std::vector<std::string> lines = split_lines(text);
    if (lines.empty() || lines.front() != "delay_s,angle_bin,amp_re,amp_im,power_db")
        throw std::runtime_error("artifacts: not a path-estimate table");
    std::vector<PathEstimate> estimates;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const std::vector<std::string> f = split_fields(lines[i]);
        if (f.size() != 5)
            throw std::runtime_error("artifacts: bad path-estimate row: " +
                                     lines[i]);
        PathEstimate est;
        est.delay_s = parse_double(f[0], "delay_s");
        est.angle_bin = static_cast<int>(parse_double(f[1], "angle_bin"));
        est.amplitude = cdouble(parse_double(f[2], "amp_re"),
                                parse_double(f[3], "amp_im"));
        est.power_db = parse_double(f[4], "power_db");
        estimates.push_back(est);
    }
    return estimates;
}

std::string rose_to_csv(const RoseData &rose, int n_angle_bins) {
    std::string out = "record,angle_bin,value\n";
    for (int b = 0; b < n_angle_bins; ++b) {
        out += "bin,";
        out += std::to_string(b);
        out += ',';
        out += format_double(rose.bin_power_normalized[
            static_cast<std::size_t>(b)]);
        out += '\n';
    }
    for (const auto &[bin, fraction] : rose.path_dots) {
        out += "dot,";
        out += std::to_string(bin);
        out += ',';
        out += format_double(fraction);
        out += '\n';
    }
    return out;
}

std::string report_to_json(const BandReport &report) {
    json j;
    j["band"] = report.band;
    j["noise_floor_db"] = report.noise_floor_db;
    j["n_paths"] = report.n_paths;
    j["first_peak_delay_s"] = report.first_peak_delay_s;
    j["strongest_path"]["delay_s"] = report.strongest_delay_s;
    j["strongest_path"]["measured_gain_db"] = report.gain.measured_gain_db;
    j["strongest_path"]["theoretical_gain_db"] =
        report.gain.theoretical_gain_db;
    j["strongest_path"]["delta_db"] = report.gain.delta_db;
    return j.dump(2) + "\n";
}

std::string manifest_to_json(const Manifest &manifest) {
    json j;
    j["stage"] = manifest.stage;
    j["version"] = manifest.version;
    char hash_text[19];
    std::snprintf(hash_text, sizeof(hash_text), "0x%016llx",
                  static_cast<unsigned long long>(manifest.config_hash));
    j["config_hash"] = hash_text;
    j["outputs"] = manifest.outputs;
    if (manifest.include_timing)
        j["elapsed_s"] = manifest.elapsed_s;
    return j.dump(2) + "\n";
}

} // namespace canyon
