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

// JSON documents: model specs, experiment configs, classification lines and
// the run sidecar. Schema reference: docs/formats.md.

#pragma once

#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "json.hpp"
#include "qdarwin/experiments.hpp"
#include "qdarwin/model.hpp"

namespace qdarwin {

using json = nlohmann::ordered_json;

inline constexpr const char* kVersion = "0.1.0";

// ---------------------------------------------------------------------------
// Coefficient sources

inline json source_to_json(const CoefficientSource& s) {
    if (const auto* c = std::get_if<Constant>(&s)) return {{"type", "const"}, {"value", c->value}};
    if (const auto* r = std::get_if<Random>(&s)) {
        const auto& v = r->dist.variant();
        if (const auto* u = std::get_if<ContinuousUniform>(&v)) return {{"type", "uniform"}, {"a", u->half_width}};
        if (const auto* d = std::get_if<DiscreteUniform>(&v)) return {{"type", "discrete"}, {"support", d->support}};
        return {{"type", "point"}, {"value", std::get<PointMass>(v).value}};
    }
    return {{"type", "zero"}};
}

inline CoefficientSource source_from_json(const json& j) {
    const std::string type = j.at("type").get<std::string>();
    if (type == "zero") return Zero{};
    if (type == "const") return constant(j.at("value").get<double>());
    if (type == "uniform") return Random{CouplingDistribution::uniform(j.at("a").get<double>())};
    if (type == "discrete") return Random{CouplingDistribution::discrete(j.at("support").get<std::vector<double>>())};
    if (type == "point") return Random{CouplingDistribution::point(j.at("value").get<double>())};
    throw std::invalid_argument("unknown coefficient type '" + type + "'");
}

/// Parses the `--dist` mini-grammar: uniform:<a>, discrete:v1,v2,..., const:<v>.
inline CouplingDistribution parse_dist_spec(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("distribution must look like kind:value");
    const std::string kind = text.substr(0, colon);
    const std::string rest = text.substr(colon + 1);
    auto number = [](const std::string& s) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(s, &used);
        } catch (const std::exception&) {
            throw std::invalid_argument("bad number '" + s + "' in distribution");
        }
        if (used != s.size()) throw std::invalid_argument("bad number '" + s + "' in distribution");
        return v;
    };
    if (kind == "uniform") return CouplingDistribution::uniform(number(rest));
    if (kind == "const") return CouplingDistribution::point(number(rest));
    if (kind == "discrete") {
        std::vector<double> support;
        std::stringstream ss(rest);
        for (std::string item; std::getline(ss, item, ',');) support.push_back(number(item));
        return CouplingDistribution::discrete(std::move(support));
    }
    throw std::invalid_argument("unknown distribution kind '" + kind + "'");
}

// ---------------------------------------------------------------------------
// ModelSpec

inline json vec3_to_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

inline Vec3 vec3_from_json(const json& j) {
    if (!j.is_array() || j.size() != 3) throw std::invalid_argument("vector must have three components");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

inline json spec_to_json(const ModelSpec& spec) {
    const int n = spec.n_env();
    json sys = json::array(), intra = json::array(), fields = json::array();
    for (int a = 0; a < 3; ++a) {
        for (int j = 1; j <= n; ++j) {
            for (int b = 0; b < 3; ++b) {
                const auto& s = spec.sys_env(a, j, b);
                if (is_zero(s)) continue;
                sys.push_back({{"alpha", std::string(1, axis_name(a))}, {"site", j},
                               {"beta", std::string(1, axis_name(b))}, {"dist", source_to_json(s)}});
            }
        }
    }
    for (int i = 1; i <= n; ++i) {
        for (int j = i + 1; j <= n; ++j) {
            for (int a = 0; a < 3; ++a) {
                for (int b = 0; b < 3; ++b) {
                    const auto& s = spec.intra_env(i, j, a, b);
                    if (is_zero(s)) continue;
                    intra.push_back({{"i", i}, {"j", j}, {"alpha", std::string(1, axis_name(a))},
                                     {"beta", std::string(1, axis_name(b))}, {"dist", source_to_json(s)}});
                }
            }
        }
    }
    for (int i = 1; i <= n; ++i) {
        for (int c = 0; c < 3; ++c) {
            const auto& s = spec.env_field(i, c);
            if (is_zero(s)) continue;
            fields.push_back({{"site", i}, {"component", std::string(1, axis_name(c))}, {"dist", source_to_json(s)}});
        }
    }
    return {{"label", spec.label()}, {"n_env", n},       {"b0", vec3_to_json(spec.b0())},
            {"sys_env", sys},        {"intra_env", intra}, {"env_fields", fields}};
}

inline ModelSpec spec_from_json(const json& j) {
    ModelSpec spec(j.at("n_env").get<int>(), j.value("label", std::string{}));
    if (j.contains("b0")) spec.set_b0(vec3_from_json(j.at("b0")));
    for (const auto& e : j.value("sys_env", json::array())) {
        spec.set_sys_env(parse_axis(e.at("alpha").get<std::string>()), e.at("site").get<int>(),
                         parse_axis(e.at("beta").get<std::string>()), source_from_json(e.at("dist")));
    }
    for (const auto& e : j.value("intra_env", json::array())) {
        spec.set_intra_env(e.at("i").get<int>(), e.at("j").get<int>(), parse_axis(e.at("alpha").get<std::string>()),
                           parse_axis(e.at("beta").get<std::string>()), source_from_json(e.at("dist")));
    }
    for (const auto& e : j.value("env_fields", json::array())) {
        spec.set_env_field(e.at("site").get<int>(), parse_axis(e.at("component").get<std::string>()),
                           source_from_json(e.at("dist")));
    }
    return spec;
}

inline json overrides_to_json(const ModelOverrides& o) {
    json j = json::object();
    if (o.coupling_half_width) j["half_width"] = *o.coupling_half_width;
    if (o.discrete_support) j["support"] = *o.discrete_support;
    if (o.scrambling_half_width) j["scrambling"] = *o.scrambling_half_width;
    if (o.system_field) j["system_field"] = *o.system_field;
    return j;
}

inline ModelOverrides overrides_from_json(const json& j) {
    ModelOverrides o;
    if (j.contains("half_width")) o.coupling_half_width = j.at("half_width").get<double>();
    if (j.contains("support")) o.discrete_support = j.at("support").get<std::vector<double>>();
    if (j.contains("scrambling")) o.scrambling_half_width = j.at("scrambling").get<double>();
    if (j.contains("system_field")) o.system_field = j.at("system_field").get<double>();
    return o;
}

/// Either a full ModelSpec document or the shorthand
/// {"model": "CPDI", "n_env": 8, "overrides": {...}}.
inline ModelSpec model_document_to_spec(const json& j) {
    if (j.contains("model")) {
        return build_model(parse_model_kind(j.at("model").get<std::string>()), j.at("n_env").get<int>(),
                           overrides_from_json(j.value("overrides", json::object())));
    }
    return spec_from_json(j);
}

inline json classification_to_json(const Classification& c) {
    return {{"pointer_basis", c.pointer_basis},
            {"continuous_support", c.continuous_support},
            {"no_scrambling", c.no_scrambling},
            {"darwinism_supported", c.darwinism_supported}};
}

// ---------------------------------------------------------------------------
// ExperimentConfig

inline json config_to_json(const ExperimentConfig& c) {
    json policy = c.fragment_policy.kind == FragmentPolicy::Kind::Prefix ? json("prefix")
                                                                         : json{{"random_subsets", c.fragment_policy.count}};
    return {{"model", std::string(to_string(c.model))},
            {"overrides", overrides_to_json(c.overrides)},
            {"n_env", c.n_env},
            {"time_grid", c.time_grid},
            {"fragment_sizes", c.fragment_sizes},
            {"realizations", c.realizations},
            {"master_seed", c.master_seed},
            {"fragment_policy", policy},
            {"normalize", c.normalize == Normalize::BySmax ? "smax" : "none"},
            {"engine", std::string(to_string(c.engine))}};
}

inline ExperimentConfig config_from_json(const json& j) {
    ExperimentConfig c;
    c.model = parse_model_kind(j.at("model").get<std::string>());
    c.overrides = overrides_from_json(j.value("overrides", json::object()));
    c.n_env = j.at("n_env").get<int>();

    const json& grid = j.at("time_grid");
    if (grid.is_array()) {
        c.time_grid = grid.get<std::vector<double>>();
    } else {
        c.time_grid = uniform_time_grid(grid.at("t_max").get<double>(), grid.at("points").get<int>());
    }

    const json sizes = j.value("fragment_sizes", json("all"));
    if (sizes.is_string()) {
        if (sizes.get<std::string>() != "all") throw std::invalid_argument("fragment_sizes must be a list or \"all\"");
        for (int n = 0; n <= c.n_env; ++n) c.fragment_sizes.push_back(n);
    } else {
        c.fragment_sizes = sizes.get<std::vector<int>>();
    }

    c.realizations = j.value("realizations", 1);
    c.master_seed = j.value("master_seed", std::uint64_t{0});

    const json policy = j.value("fragment_policy", json("prefix"));
    if (policy.is_string()) {
        if (policy.get<std::string>() != "prefix") throw std::invalid_argument("unknown fragment policy");
    } else {
        c.fragment_policy = FragmentPolicy::random_subsets(policy.at("random_subsets").get<int>());
    }

    const std::string norm = j.value("normalize", std::string("smax"));
    if (norm == "smax") {
        c.normalize = Normalize::BySmax;
    } else if (norm == "none") {
        c.normalize = Normalize::None;
    } else {
        throw std::invalid_argument("normalize must be \"smax\" or \"none\"");
    }
    c.engine = parse_engine(j.value("engine", std::string("auto")));
    c.validate();
    return c;
}

inline json sidecar_json(const SweepResult& r) {
    return {{"version", kVersion},
            {"model", r.model_label},
            {"master_seed", r.config.master_seed},
            {"realizations", r.realizations},
            {"has_chi", r.has_chi},
            {"config", config_to_json(r.config)}};
}

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument("malformed JSON in " + path + ": " + e.what());
    }
}

}  // namespace qdarwin
