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

#include "canyon/stages.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <limits>
#include <sstream>

#include "canyon/analysis.hpp"
#include "canyon/artifacts.hpp"
#include "canyon/dsp.hpp"
#include "canyon/fft.hpp"
#include "canyon/iq_file.hpp"
#include "canyon/pipeline.hpp"
#include "canyon/svg.hpp"
#include "canyon/version.hpp"

namespace canyon {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Simulated measurement-chain response baked into the back-to-back
// reference. Arbitrary but fixed: the processing cancels it exactly, and
// the self-calibration tests confirm that it does.
const cdouble chain_gain = std::polar(1.0, 0.7);
constexpr double chain_delay_s = 3.0e-9;

std::string band_path(const StageContext &ctx, const std::string &prefix,
                      const BandConfig &band, const std::string &suffix) {
    return ctx.out_dir + "/" + prefix + band.name + suffix;
}

std::string bin_path(const StageContext &ctx, const std::string &dir,
                     const BandConfig &band, int bin,
                     const std::string &suffix) {
    char name[32];
    std::snprintf(name, sizeof(name), "_bin%02d", bin);
    return ctx.out_dir + "/" + dir + "/" + band.name + name + suffix;
}

std::vector<const BandConfig *> selected_bands(const StageContext &ctx) {
    std::vector<const BandConfig *> bands;
    for (const BandConfig &band : ctx.config.bands)
        if (band_selected(ctx, band))
            bands.push_back(&band);
    if (bands.empty())
        throw ConfigError("config: no configured band matches --band " +
                          ctx.band_filter);
    return bands;
}

class StageTimer {
  public:
    explicit StageTimer(std::string stage) : stage_(std::move(stage)) {}

    void add_output(std::string path) { outputs_.push_back(std::move(path)); }

    void finish(const StageContext &ctx) const {
        const auto elapsed =
            std::chrono::duration<double>(clock::now() - start_).count();
        Manifest manifest;
        manifest.stage = stage_;
        manifest.version = version_string;
        manifest.config_hash = config_hash(ctx.config);
        manifest.outputs = outputs_;
        manifest.include_timing = ctx.include_timing;
        manifest.elapsed_s = elapsed;
        write_text_atomic(ctx.out_dir + "/manifest_" + stage_ + ".json",
                          manifest_to_json(manifest));
    }

  private:
    using clock = std::chrono::steady_clock;
    std::string stage_;
    std::vector<std::string> outputs_;
    clock::time_point start_ = clock::now();
};

std::string required_input(const std::string &path, const char *stage,
                           const char *producer) {
    if (!fs::exists(path))
        throw StageDependencyError(std::string(stage) + ": missing input " +
                                   path + "; run " + producer + " first");
    return read_text(path);
}

TraceOptions trace_options(const CampaignConfig &config) {
    TraceOptions options;
    options.polarization = config.polarization;
    options.include_ground = config.include_ground;
    return options;
}

ReferenceRecord make_band_reference(const SounderConfig &sounder) {
    const SoundingSequence sequence = generate_cazac(
        sounder.sequence_length(), sounder.zc_root, sounder.bandwidth_hz);
    const ReferenceRecord reference = make_b2b_reference(
        sequence, sounder.oversampling, chain_gain, chain_delay_s);
    // The float32 digitizer path applies to the stored reference and to the
    // transmitted waveform alike; quantizing here keeps an in-memory run
    // bit-identical to a run that writes and re-reads the file.
    return quantize_reference(reference);
}

} // namespace

bool band_selected(const StageContext &ctx, const BandConfig &band) {
    return ctx.band_filter == "both" ||
           band.name.rfind(ctx.band_filter, 0) == 0;
}

void run_trace(const StageContext &ctx) {
    ctx.config.validate();
    StageTimer timer("trace");
    for (const BandConfig *band : selected_bands(ctx)) {
        const std::vector<PropagationPath> paths = trace_paths(
            ctx.config.geometry, ctx.config.placement, band->carrier_hz,
            ctx.config.max_wall_order, trace_options(ctx.config));
        const std::string csv_path = band_path(ctx, "paths_", *band, ".csv");
        const std::string json_path = band_path(ctx, "paths_", *band, ".json");
        write_text_atomic(csv_path, paths_to_csv(paths));
        write_text_atomic(json_path, paths_to_json(paths));
        timer.add_output(csv_path);
        timer.add_output(json_path);
    }
    timer.finish(ctx);
}

void run_simulate(const StageContext &ctx) {
    ctx.config.validate();
    StageTimer timer("simulate");
    for (const BandConfig *band : selected_bands(ctx)) {
        const std::vector<PropagationPath> paths = paths_from_csv(
            required_input(band_path(ctx, "paths_", *band, ".csv"),
                           "simulate", "trace"));
        const SounderConfig sounder = ctx.config.sounder_for(*band);
        const ReferenceRecord reference = make_band_reference(sounder);

        const std::string ref_path =
            ctx.out_dir + "/iq/" + band->name + "_b2b.iq";
        write_reference(ref_path, reference, sounder.carrier_hz);
        timer.add_output(ref_path);

        const BasebandWaveform waveform{reference.samples,
                                        reference.sample_rate_hz};
        const std::vector<RawCapture> captures =
            simulate_rotation(sounder, paths, waveform);
        for (const RawCapture &capture : captures) {
            const std::string path =
                bin_path(ctx, "iq", *band, capture.angle_bin, ".iq");
            write_capture(path, capture);
            timer.add_output(path);
        }
    }
    timer.finish(ctx);
}

void run_process(const StageContext &ctx) {
    ctx.config.validate();
    StageTimer timer("process");
    for (const BandConfig *band : selected_bands(ctx)) {
        const SounderConfig sounder = ctx.config.sounder_for(*band);
        const std::string ref_path =
            ctx.out_dir + "/iq/" + band->name + "_b2b.iq";
        if (!fs::exists(ref_path))
            throw StageDependencyError("process: missing input " + ref_path +
                                       "; run simulate first");
        const ReferenceRecord reference = read_reference(ref_path);
        for (int bin = 0; bin < sounder.n_angle_bins; ++bin) {
            const std::string capture_path =
                bin_path(ctx, "iq", *band, bin, ".iq");
            if (!fs::exists(capture_path))
                throw StageDependencyError("process: missing input " +
                                           capture_path +
                                           "; run simulate first");
            const RawCapture capture = read_capture(capture_path);
            const CalibratedCir cir =
                process_capture(capture, reference, sounder.bandwidth_hz);
            const std::string cir_path =
                bin_path(ctx, "cir", *band, bin, ".csv");
            write_text_atomic(cir_path, cir_to_csv(cir));
            timer.add_output(cir_path);
        }
    }
    timer.finish(ctx);
}

namespace {

std::vector<CalibratedCir> load_cirs(const StageContext &ctx,
                                     const BandConfig &band,
                                     const SounderConfig &sounder,
                                     const char *stage) {
    std::vector<CalibratedCir> cirs;
    cirs.reserve(static_cast<std::size_t>(sounder.n_angle_bins));
    for (int bin = 0; bin < sounder.n_angle_bins; ++bin) {
        const std::string path = bin_path(ctx, "cir", band, bin, ".csv");
        cirs.push_back(
            cir_from_csv(required_input(path, stage, "process")));
    }
    return cirs;
}

double combined_noise_floor(const std::vector<CalibratedCir> &cirs,
                            double guard_fraction) {
    std::vector<double> floors;
    for (const CalibratedCir &cir : cirs) {
        const double f = estimate_noise_floor(cir, guard_fraction);
        if (std::isfinite(f))
            floors.push_back(f);
    }
    if (floors.empty())
        return -std::numeric_limits<double>::infinity();
    std::nth_element(floors.begin(), floors.begin() + floors.size() / 2,
                     floors.end());
    return floors[floors.size() / 2];
}

BandReport build_report(const CampaignConfig &config, const BandConfig &band,
                        double noise_floor_db,
                        const std::vector<PathEstimate> &estimates) {
    BandReport report;
    report.band = band.name;
    report.noise_floor_db =
        std::isfinite(noise_floor_db) ? noise_floor_db : db_floor;
    report.n_paths = static_cast<int>(estimates.size());
    const Vec3 &tx = config.placement.tx;
    const Vec3 &rx = config.placement.rx;
    const double los_distance = std::sqrt(
        (tx.x - rx.x) * (tx.x - rx.x) + (tx.y - rx.y) * (tx.y - rx.y) +
        (tx.z - rx.z) * (tx.z - rx.z));
    if (estimates.empty()) {
        report.gain.measured_gain_db = db_floor;
        report.gain.theoretical_gain_db =
            -free_space_path_loss_db(los_distance, band.carrier_hz) +
            config.sounder.tx_antenna_gain_dbi +
            config.sounder.rx_antenna.boresight_gain_dbi;
        report.gain.delta_db =
            report.gain.measured_gain_db - report.gain.theoretical_gain_db;
        return report;
    }
    report.gain = strongest_path_report(
        estimates, los_distance, band.carrier_hz,
        config.sounder.tx_antenna_gain_dbi,
        config.sounder.rx_antenna.boresight_gain_dbi);
    const PathEstimate *strongest = &estimates.front();
    for (const PathEstimate &est : estimates)
        if (est.power_db > strongest->power_db)
            strongest = &est;
    report.strongest_delay_s = strongest->delay_s;
    // Earliest arrival that is within 30 dB of the strongest one: the
    // first physical echo, robust against weak precursor artifacts.
    double first = strongest->delay_s;
    for (const PathEstimate &est : estimates)
        if (est.power_db >= strongest->power_db - 30.0 &&
            est.delay_s < first)
            first = est.delay_s;
    report.first_peak_delay_s = first;
    return report;
}

} // namespace

void run_analyze(const StageContext &ctx) {
    ctx.config.validate();
    StageTimer timer("analyze");
    for (const BandConfig *band : selected_bands(ctx)) {
        const SounderConfig sounder = ctx.config.sounder_for(*band);
        const std::vector<CalibratedCir> cirs =
            load_cirs(ctx, *band, sounder, "analyze");

        const double floor =
            combined_noise_floor(cirs, ctx.config.guard_fraction);
        // Same-delay detections more than the antenna's sidelobe rejection
        // (minus a 6 dB guard for interference and noise ripple) below a
        // stronger one are sidelobe-floor leakage, not separate arrivals.
        const double rejection_db =
            -sounder.rx_antenna.sidelobe_floor_db - 6.0;
        const std::vector<PathEstimate> estimates = extract_paths(
            cirs, floor, ctx.config.extraction_margin_db, rejection_db);
        const OmniCir omni = pseudo_omni(cirs);
        const RoseData rose = rose_data(estimates, sounder.n_angle_bins);
        const BandReport report =
            build_report(ctx.config, *band, floor, estimates);

        const std::string omni_path = band_path(ctx, "omni_", *band, ".csv");
        const std::string est_path =
            band_path(ctx, "paths_est_", *band, ".csv");
        const std::string rose_path = band_path(ctx, "rose_", *band, ".csv");
        const std::string report_path =
            band_path(ctx, "report_", *band, ".json");
        write_text_atomic(omni_path, omni_to_csv(omni));
        write_text_atomic(est_path, estimates_to_csv(estimates));
        write_text_atomic(rose_path,
                          rose_to_csv(rose, sounder.n_angle_bins));
        write_text_atomic(report_path, report_to_json(report));
        timer.add_output(omni_path);
        timer.add_output(est_path);
        timer.add_output(rose_path);
        timer.add_output(report_path);
    }
    timer.finish(ctx);
}

void run_sweep(const StageContext &ctx) {
    ctx.config.validate();
    StageTimer timer("sweep");
    const CampaignConfig &config = ctx.config;

    std::vector<double> distances;
    for (double d = 10.0; d <= 100.0 + 1.0e-9; d += 5.0) {
        if (config.placement.tx.x + d <= config.geometry.canyon_length_m)
            distances.push_back(d);
    }
    if (distances.size() < 3)
        throw std::invalid_argument(
            "sweep: canyon too short for a distance sweep");

    for (const BandConfig *band : selected_bands(ctx)) {
        SounderConfig sounder = config.sounder_for(*band);
        // The sweep isolates deterministic propagation physics: a handful
        // of noiseless snapshots suffice, and only the pointing toward the
        // transmitter matters for the direct cluster.
        sounder.n_snapshots = 4;
        sounder.noiseless = true;
        const ReferenceRecord reference = make_band_reference(sounder);
        const BasebandWaveform waveform{reference.samples,
                                        reference.sample_rate_hz};

        std::string csv = "distance_m,measured_db,predicted_db,residual_db\n";
        std::vector<double> measured, predicted;
        for (const double d : distances) {
            Placement placement = config.placement;
            placement.rx.x = placement.tx.x + d;
            placement.rx.y = config.placement.rx.y;
            placement.rx.z = config.placement.rx.z;
            // Wall reflections are excluded: the sweep isolates the
            // direct/ground-bounce interaction, and a wall path that does
            // not fade would mask the deep two-ray nulls.
            const std::vector<PropagationPath> paths =
                trace_paths(config.geometry, placement, band->carrier_hz, 0,
                            trace_options(config));

            const RawCapture capture =
                simulate_capture(sounder, paths, waveform, 0);
            const CalibratedCir cir =
                process_capture(capture, reference, sounder.bandwidth_hz);

            // Measured: refined magnitude of the strongest lobe.
            std::size_t arg = 0;
            for (std::size_t i = 1; i < cir.size(); ++i)
                if (std::norm(cir.amplitude[i]) >
                    std::norm(cir.amplitude[arg]))
                    arg = i;
            const std::vector<cdouble> spectrum = fft::forward(cir.amplitude);
            const double t = refine_peak_position(
                spectrum, static_cast<double>(arg));
            const double measured_db = power_to_db(
                std::norm(interpolate_bandlimited(spectrum, t)));

            // Predicted independently from the direct and ground-bounce
            // rays: both arrive on the receiver boresight, so the antenna
            // factors are common; the lobes form one cluster whose peak is
            // the maximum of the two-tap band-limited interpolant.
            const double antenna_db =
                config.sounder.tx_antenna_gain_dbi +
                config.sounder.rx_antenna.boresight_gain_dbi;
            cdouble a_los{0.0, 0.0}, a_ground{0.0, 0.0};
            double tau_los = 0.0, tau_ground = 0.0;
            for (const PropagationPath &p : paths) {
                if (p.kind == PathKind::Los) {
                    a_los = p.gain;
                    tau_los = p.delay_s;
                } else if (p.kind == PathKind::Ground) {
                    a_ground = p.gain;
                    tau_ground = p.delay_s;
                }
            }
            const double n_chips =
                static_cast<double>(sounder.sequence_length());
            auto dirichlet = [&](double x) {
                // Periodic band-limited interpolation kernel for n samples.
                const double s = std::sin(pi * x / n_chips);
                if (std::abs(s) < 1.0e-15)
                    return 1.0;
                return std::sin(pi * x) / (n_chips * s);
            };
            const double delta =
                (tau_ground - tau_los) * sounder.bandwidth_hz;
            double best = 0.0;
            for (double x = -0.6; x <= delta + 0.6; x += 0.002) {
                const double v = std::abs(a_los * dirichlet(x) +
                                          a_ground * dirichlet(x - delta));
                best = std::max(best, v);
            }
            const double predicted_db =
                power_to_db(best * best) + antenna_db;

            measured.push_back(measured_db);
            predicted.push_back(predicted_db);
            csv += format_double(d);
            csv += ',';
            csv += format_double(measured_db);
            csv += ',';
            csv += format_double(predicted_db);
            csv += ',';
            csv += format_double(measured_db - predicted_db);
            csv += '\n';
        }

        double mean = 0.0;
        for (const double m : measured)
            mean += m;
        mean /= static_cast<double>(measured.size());
        double ss_tot = 0.0, ss_res = 0.0, max_resid = 0.0;
        for (std::size_t i = 0; i < measured.size(); ++i) {
            ss_tot += (measured[i] - mean) * (measured[i] - mean);
            ss_res += (measured[i] - predicted[i]) *
                      (measured[i] - predicted[i]);
            max_resid =
                std::max(max_resid, std::abs(measured[i] - predicted[i]));
        }
        json summary;
        summary["band"] = band->name;
        summary["n_points"] = measured.size();
        summary["r_squared"] = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
        summary["max_abs_residual_db"] = max_resid;

        const std::string csv_path = band_path(ctx, "sweep_", *band, ".csv");
        const std::string json_path =
            band_path(ctx, "sweep_", *band, ".json");
        write_text_atomic(csv_path, csv);
        write_text_atomic(json_path, summary.dump(2) + "\n");
        timer.add_output(csv_path);
        timer.add_output(json_path);
    }
    timer.finish(ctx);
}

namespace {

OmniCir omni_from_csv(const std::string &text) {
    OmniCir omni;
    std::istringstream in(text);
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        if (line.rfind("# ", 0) == 0) {
            std::istringstream meta(line.substr(2));
            std::string key;
            double value = 0.0;
            meta >> key >> value;
            if (key == "delay_start_s")
                omni.delay_start_s = value;
            else if (key == "delay_step_s")
                omni.delay_step_s = value;
            else if (key == "delay_resolution_s")
                omni.delay_resolution_s = value;
            continue;
        }
        if (!header_seen) {
            header_seen = true; // column header row
            continue;
        }
        std::istringstream row(line);
        std::string delay, power, angle;
        std::getline(row, delay, ',');
        std::getline(row, power, ',');
        std::getline(row, angle, ',');
        omni.power_db.push_back(std::strtod(power.c_str(), nullptr));
        omni.contributing_angle.push_back(
            static_cast<int>(std::strtol(angle.c_str(), nullptr, 10)));
    }
    return omni;
}

RoseData rose_from_csv(const std::string &text, int &n_angle_bins) {
    RoseData rose;
    n_angle_bins = 0;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line.rfind("record,", 0) == 0)
            continue;
        std::istringstream row(line);
        std::string record, bin, value;
        std::getline(row, record, ',');
        std::getline(row, bin, ',');
        std::getline(row, value, ',');
        if (record == "bin") {
            rose.bin_power_normalized.push_back(
                std::strtod(value.c_str(), nullptr));
            ++n_angle_bins;
        } else if (record == "dot") {
            rose.path_dots.emplace_back(
                static_cast<int>(std::strtol(bin.c_str(), nullptr, 10)),
                std::strtod(value.c_str(), nullptr));
        }
    }
    return rose;
}

} // namespace

void run_plot(const StageContext &ctx) {
    ctx.config.validate();
    StageTimer timer("plot");
    for (const BandConfig *band : selected_bands(ctx)) {
        const OmniCir omni = omni_from_csv(required_input(
            band_path(ctx, "omni_", *band, ".csv"), "plot", "analyze"));
        const std::vector<PathEstimate> estimates =
            estimates_from_csv(required_input(
                band_path(ctx, "paths_est_", *band, ".csv"), "plot",
                "analyze"));
        int n_angle_bins = 0;
        const RoseData rose = rose_from_csv(
            required_input(band_path(ctx, "rose_", *band, ".csv"), "plot",
                           "analyze"),
            n_angle_bins);
        const json report = json::parse(required_input(
            band_path(ctx, "report_", *band, ".json"), "plot", "analyze"));
        const double floor = report.value("noise_floor_db", db_floor);

        const std::string cir_svg_path =
            band_path(ctx, "plot_cir_", *band, ".svg");
        const std::string rose_svg_path =
            band_path(ctx, "plot_rose_", *band, ".svg");
        write_text_atomic(
            cir_svg_path,
            render_cir_svg(omni, floor, estimates,
                           band->name + " power delay profile"));
        const double step =
            n_angle_bins > 0 ? 2.0 * pi / n_angle_bins : 2.0 * pi;
        write_text_atomic(rose_svg_path,
                          render_rose_svg(rose, n_angle_bins, step,
                                          band->name + " angular power"));
        timer.add_output(cir_svg_path);
        timer.add_output(rose_svg_path);
    }
    timer.finish(ctx);
}

} // namespace canyon
