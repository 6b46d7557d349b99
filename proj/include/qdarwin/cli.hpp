// Copyright 2026 The qdarwin Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end. parse_and_dispatch returns 0 on success, 2 on a
// usage error and 1 when a command fails at run time.

#pragma once

#include <cstdlib>
#include <iostream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qdarwin/analytics.hpp"
#include "qdarwin/experiments.hpp"
#include "qdarwin/model.hpp"
#include "qdarwin/report.hpp"
#include "qdarwin/serialization.hpp"

namespace qdarwin {

/// Worker count from QDARWIN_THREADS (0 or unset = automatic).
inline unsigned threads_from_env() {
    const char* v = std::getenv("QDARWIN_THREADS");
    if (v == nullptr || *v == '\0') return 0;
    try {
        const long n = std::stol(v);
        return n > 0 ? static_cast<unsigned>(n) : 0U;
    } catch (const std::exception&) {
        return 0;
    }
}

namespace detail {

struct SweepOutputs {
    std::string csv;
    std::string json;
    std::string svg;
    std::string quantity = "ratio";
};

inline void add_sweep_outputs(CLI::App* cmd, SweepOutputs& o) {
    cmd->add_option("--out", o.csv, "CSV output path")->required();
    cmd->add_option("--json", o.json, "JSON sidecar output path");
    cmd->add_option("--svg", o.svg, "SVG heatmap output path");
    cmd->add_option("--quantity", o.quantity, "heatmap quantity")->check(CLI::IsMember({"ratio", "I", "chi"}));
}

inline void emit_sweep(const SweepResult& result, const SweepOutputs& o) {
    write_csv(result, o.csv);
    if (!o.json.empty()) {
        auto out = open_output(o.json);
        out << sidecar_json(result).dump(2) << '\n';
        finish(out, o.json);
    }
    if (!o.svg.empty()) render_heatmap_svg(result, parse_heatmap_quantity(o.quantity), o.svg);
}

template <typename Writer>
void write_to(const std::string& path, std::ostream& fallback, Writer&& writer) {
    if (path.empty()) {
        writer(fallback);
        return;
    }
    auto out = open_output(path);
    writer(out);
    finish(out, path);
}

}  // namespace detail

inline int parse_and_dispatch(int argc, const char* const* argv, std::ostream& out = std::cout,
                              std::ostream& err = std::cerr) {
    CLI::App app{"Exact simulation and analytics of redundant records in qubit environments", "qdarwin"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    std::uint64_t seed = 0;
    double tol = 1e-9;

    // classify
    std::string classify_config;
    auto* classify_cmd = app.add_subcommand("classify", "sample a model and classify its structure");
    classify_cmd->add_option("--config", classify_config, "model JSON (full spec or {\"model\",\"n_env\"})")->required();
    classify_cmd->add_option("--seed", seed, "sampling seed");
    classify_cmd->add_option("--tol", tol, "relative tolerance")->check(CLI::PositiveNumber);

    // sweep
    std::string sweep_config;
    std::optional<std::uint64_t> sweep_seed;
    detail::SweepOutputs sweep_out;
    auto* sweep_cmd = app.add_subcommand("sweep", "Monte Carlo sweep over time and fragment size");
    sweep_cmd->add_option("--config", sweep_config, "experiment JSON")->required();
    sweep_cmd->add_option("--seed", sweep_seed, "overrides master_seed from the config");
    detail::add_sweep_outputs(sweep_cmd, sweep_out);

    // fig2
    int fig2_n = 50;
    double fig2_alpha = 0.5;
    std::string fig2_out;
    auto* fig2_cmd = app.add_subcommand("fig2", "long-time I and chi against fragment size");
    fig2_cmd->add_option("--n-env", fig2_n, "environment size")->check(CLI::Range(1, 100000));
    fig2_cmd->add_option("--alpha2", fig2_alpha, "|alpha_0|^2")->check(CLI::Range(0.0, 1.0));
    fig2_cmd->add_option("--out", fig2_out, "CSV output path (stdout if omitted)");

    // fig3
    std::string fig3_model;
    int fig3_realizations = 100;
    std::uint64_t fig3_seed = 0;
    ModelOverrides fig3_overrides;
    std::optional<double> half_width, scrambling, system_field;
    std::vector<double> support;
    detail::SweepOutputs fig3_out;
    auto* fig3_cmd = app.add_subcommand("fig3", "time x fragment-size panel for one reference model");
    fig3_cmd->add_option("--model", fig3_model, "CPDI, DPDI, CODI or CPDI-S")->required()->check(
        CLI::IsMember({"CPDI", "DPDI", "CODI", "CPDI-S", "CPDI_S"}));
    fig3_cmd->add_option("--realizations", fig3_realizations, "number of realizations")->check(CLI::PositiveNumber);
    fig3_cmd->add_option("--seed", fig3_seed, "master seed");
    fig3_cmd->add_option("--half-width", half_width, "half-width of the uniform coupling law")->check(CLI::PositiveNumber);
    fig3_cmd->add_option("--support", support, "discrete coupling support (DPDI)")->delimiter(',');
    fig3_cmd->add_option("--scrambling", scrambling, "half-width of intra-environment couplings (CPDI-S)")
        ->check(CLI::NonNegativeNumber);
    fig3_cmd->add_option("--system-field", system_field, "y field on the system (CODI)");
    detail::add_sweep_outputs(fig3_cmd, fig3_out);

    // gamma
    std::string dist_text;
    double gamma_alpha = 0.5, tmax = 0.0;
    int steps = 1;
    std::string gamma_out;
    auto* gamma_cmd = app.add_subcommand("gamma", "averaged squared decoherence factor of one site");
    gamma_cmd->add_option("--dist", dist_text, "uniform:<a> | discrete:v1,v2,... | const:<v>")->required();
    gamma_cmd->add_option("--alpha2", gamma_alpha, "|alpha_i|^2")->check(CLI::Range(0.0, 1.0));
    gamma_cmd->add_option("--tmax", tmax, "largest time")->check(CLI::NonNegativeNumber);
    gamma_cmd->add_option("--steps", steps, "number of time points")->check(CLI::Range(1, 100000000));
    gamma_cmd->add_option("--out", gamma_out, "CSV output path (stdout if omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            app.exit(e, out, err);
            return 0;
        }
        err << "error: " << e.what() << '\n';
        if (!app.get_subcommands().empty()) {
            err << "run with " << app.get_subcommands().front()->get_name() << " --help for usage\n";
        }
        return 2;
    }

    CouplingDistribution gamma_dist = CouplingDistribution::point(0.0);
    if (gamma_cmd->parsed()) {
        try {
            gamma_dist = parse_dist_spec(dist_text);
        } catch (const std::exception& e) {
            err << "error: --dist: " << e.what() << '\n';
            return 2;
        }
    }

    try {
        if (classify_cmd->parsed()) {
            const ModelSpec spec = model_document_to_spec(read_json_file(classify_config));
            const ModelInstance inst = sample_instance(spec, seed);
            out << classification_to_json(classify(inst, spec.continuous_support(), tol)).dump() << '\n';
        } else if (sweep_cmd->parsed()) {
            ExperimentConfig cfg = config_from_json(read_json_file(sweep_config));
            if (sweep_seed) cfg.master_seed = *sweep_seed;
            cfg.threads = threads_from_env();
            detail::emit_sweep(run_sweep(cfg), sweep_out);
        } else if (fig2_cmd->parsed()) {
            const auto rows = reproduce_fig2(fig2_n, fig2_alpha);
            detail::write_to(fig2_out, out, [&](std::ostream& os) { write_fig2_csv(rows, os); });
        } else if (fig3_cmd->parsed()) {
            fig3_overrides.coupling_half_width = half_width;
            fig3_overrides.scrambling_half_width = scrambling;
            fig3_overrides.system_field = system_field;
            if (!support.empty()) fig3_overrides.discrete_support = support;
            ExperimentConfig cfg = fig3_config(parse_model_kind(fig3_model), fig3_overrides);
            cfg.realizations = fig3_realizations;
            cfg.master_seed = fig3_seed;
            cfg.threads = threads_from_env();
            detail::emit_sweep(run_sweep(cfg), fig3_out);
        } else if (gamma_cmd->parsed()) {
            std::vector<GammaRow> rows;
            for (int k = 0; k < steps; ++k) {
                const double t = steps == 1 ? 0.0 : tmax * k / (steps - 1);
                rows.push_back({t, avg_gamma_squared(gamma_dist, gamma_alpha, t)});
            }
            detail::write_to(gamma_out, out, [&](std::ostream& os) { write_gamma_csv(rows, os); });
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

}  // namespace qdarwin
