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

#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <functional>
#include <string>

#include "canyon/artifacts.hpp"
#include "canyon/config.hpp"
#include "canyon/stages.hpp"
#include "canyon/version.hpp"

namespace {

// Exit codes: 0 success, 2 configuration error, 3 missing stage input,
// 4 invalid argument or domain error from the toolkit, 1 anything else.
constexpr int exit_ok = 0;
constexpr int exit_config = 2;
constexpr int exit_dependency = 3;
constexpr int exit_invalid = 4;
constexpr int exit_unexpected = 1;

struct CliOptions {
    std::string config_file;
    std::string band = "both";
    std::string scale;
    std::string out_dir = "out";
    std::uint64_t seed = 0;
    bool seed_set = false;
    bool no_timestamp = false;
};

void add_common_options(CLI::App *cmd, CliOptions &options) {
    cmd->add_option("--config", options.config_file,
                    "Configuration JSON file (defaults apply when omitted)");
    cmd->add_option("--band", options.band,
                    "Band selection: 158, 300, or both")
        ->check(CLI::IsMember({"158", "300", "both"}));
    cmd->add_option("--scale", options.scale,
                    "Override the configured scale: desk or full")
        ->check(CLI::IsMember({"desk", "full"}));
    cmd->add_option("--out", options.out_dir, "Artifact output directory")
        ->capture_default_str();
    cmd->add_option("--seed", options.seed, "Override the configured seed")
        ->each([&options](const std::string &) { options.seed_set = true; });
    cmd->add_flag("--no-timestamp", options.no_timestamp,
                  "Omit timing from stage manifests (reproducible bytes)");
}

canyon::StageContext make_context(const CliOptions &options) {
    std::string config_text = "{}";
    if (!options.config_file.empty()) {
        try {
            config_text = canyon::read_text(options.config_file);
        } catch (const std::exception &e) {
            // An unreadable configuration file is a configuration problem.
            throw canyon::ConfigError(e.what());
        }
    }
    canyon::CampaignConfig config = canyon::parse_config(config_text);
    if (!options.scale.empty()) {
        // Re-parse with the scale substituted so derived fields follow.
        config.scale = options.scale == "desk" ? canyon::Scale::Desk
                                               : canyon::Scale::Full;
        config = canyon::parse_config(canyon::canonical_text(config));
    }
    if (options.seed_set) {
        config.seed = options.seed;
        config.sounder.seed = options.seed;
    }
    canyon::StageContext ctx;
    ctx.config = config;
    ctx.out_dir = options.out_dir;
    ctx.band_filter = options.band;
    ctx.include_timing = !options.no_timestamp;
    return ctx;
}

int run_stage(const CliOptions &options,
              const std::function<void(const canyon::StageContext &)> &stage) {
    try {
        stage(make_context(options));
        return exit_ok;
    } catch (const canyon::ConfigError &e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_config;
    } catch (const canyon::StageDependencyError &e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_dependency;
    } catch (const std::invalid_argument &e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_invalid;
    } catch (const std::domain_error &e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_invalid;
    } catch (const std::exception &e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_unexpected;
    }
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Street-canyon directional channel sounding: synthetic "
                 "measurement and processing pipeline"};
    app.set_version_flag("--version", canyon::version_string);
    app.require_subcommand(1);

    CliOptions options;
    struct StageCommand {
        const char *name;
        const char *help;
        void (*run)(const canyon::StageContext &);
    };
    const StageCommand stages[] = {
        {"trace", "Trace multipath propagation through the canyon",
         canyon::run_trace},
        {"simulate", "Simulate rotating-receiver IQ captures",
         canyon::run_simulate},
        {"process", "Calibrate captures into impulse responses",
         canyon::run_process},
        {"analyze", "Extract paths, noise floor, and angular profile",
         canyon::run_analyze},
        {"sweep", "Distance sweep of the direct-cluster gain",
         canyon::run_sweep},
        {"plot", "Render SVG plots from the analysis artifacts",
         canyon::run_plot},
    };
    for (const StageCommand &stage : stages) {
        CLI::App *cmd = app.add_subcommand(stage.name, stage.help);
        add_common_options(cmd, options);
        cmd->callback([&options, &stage] {
            const int code = run_stage(options, stage.run);
            if (code != exit_ok)
                throw CLI::RuntimeError(code);
        });
    }

    CLI11_PARSE(app, argc, argv);
    return exit_ok;
}
