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

// Seeded Monte Carlo sweeps over coupling realizations and initial product
// states, plus the two figure pipelines built on top of them.
//
// Seeding: realization r uses s_r = mix_seed(master_seed, r); the model
// instance is sampled with mix_seed(s_r, 0), the initial product state with
// mix_seed(s_r, 1) and random fragments with mix_seed(s_r, 2). A realization
// can therefore be replayed in isolation.

#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "qdarwin/analytics.hpp"
#include "qdarwin/dynamics.hpp"
#include "qdarwin/information.hpp"
#include "qdarwin/model.hpp"
#include "qdarwin/rng.hpp"

namespace qdarwin {

enum class Engine { Auto, Dense, Diagonal, Branching };
enum class Normalize { BySmax, None };

inline std::string_view to_string(Engine e) {
    switch (e) {
        case Engine::Auto: return "auto";
        case Engine::Dense: return "dense";
        case Engine::Diagonal: return "diagonal";
        case Engine::Branching: return "branching";
    }
    return "?";
}

inline Engine parse_engine(std::string_view s) {
    if (s == "auto") return Engine::Auto;
    if (s == "dense") return Engine::Dense;
    if (s == "diagonal") return Engine::Diagonal;
    if (s == "branching") return Engine::Branching;
    throw std::invalid_argument("unknown engine '" + std::string(s) + "'");
}

/// Prefix uses sites {1..n}; RandomSubsets averages over `count` uniformly
/// drawn n-subsets per realization.
struct FragmentPolicy {
    enum class Kind { Prefix, RandomSubsets } kind = Kind::Prefix;
    int count = 1;

    static FragmentPolicy prefix() { return {}; }
    static FragmentPolicy random_subsets(int count) { return {Kind::RandomSubsets, count}; }
};

/// Largest environment a sweep materializes as a dense state.
inline constexpr int kMaxSweepEnv = 16;

struct ExperimentConfig {
    ModelKind model = ModelKind::CPDI;
    ModelOverrides overrides;
    int n_env = 8;
    std::vector<double> time_grid;
    std::vector<int> fragment_sizes;
    int realizations = 1;
    std::uint64_t master_seed = 0;
    FragmentPolicy fragment_policy;
    Normalize normalize = Normalize::BySmax;
    Engine engine = Engine::Auto;
    unsigned threads = 0;  // 0 = hardware concurrency; does not affect results

    void validate() const {
        if (n_env < 1) throw std::invalid_argument("n_env must be >= 1");
        if (n_env > kMaxSweepEnv) throw std::length_error("sweeps are limited to n_env <= 16");
        if (time_grid.empty()) throw std::invalid_argument("time grid must be nonempty");
        for (double t : time_grid) {
            if (!std::isfinite(t)) throw std::invalid_argument("time grid entries must be finite");
        }
        if (fragment_sizes.empty()) throw std::invalid_argument("fragment sizes must be nonempty");
        for (int n : fragment_sizes) {
            if (n < 0 || n > n_env) throw std::invalid_argument("fragment sizes must lie in [0, n_env]");
        }
        if (realizations < 1) throw std::invalid_argument("realizations must be >= 1");
        if (fragment_policy.kind == FragmentPolicy::Kind::RandomSubsets && fragment_policy.count < 1) {
            throw std::invalid_argument("random subset count must be >= 1");
        }
        if (engine == Engine::Dense && n_env + 1 > kMaxDenseQubits) {
            throw std::length_error("dense engine limited to 13 qubits");
        }
    }

    ModelSpec spec() const { return build_model(model, n_env, overrides); }
};

/// Mean over realizations for one (time, fragment size) cell.
struct CellStats {
    double I_mean = 0.0;
    double I_stderr = 0.0;
    std::optional<double> chi_mean;
    std::optional<double> chi_stderr;
    std::optional<double> discord_mean;
    double S_mean = 0.0;      // system entropy S_S(t)
    double ratio_mean = 0.0;  // I / S_max (or I when not normalized)
    double S_ratio_mean = 0.0;  // S_S(t) / S_max (or S_S)
};

struct SweepResult {
    ExperimentConfig config;
    std::string model_label;
    int realizations = 0;
    bool has_chi = false;
    std::vector<CellStats> cells;  // row-major over (time index, fragment index)

    const CellStats& at(std::size_t time_index, std::size_t fragment_index) const {
        return cells.at(time_index * config.fragment_sizes.size() + fragment_index);
    }

    /// Cell for the grid time nearest to `t` and fragment size `n`.
    const CellStats& nearest(double t, int n) const {
        std::size_t ti = 0;
        for (std::size_t k = 1; k < config.time_grid.size(); ++k) {
            if (std::abs(config.time_grid[k] - t) < std::abs(config.time_grid[ti] - t)) ti = k;
        }
        const auto& fs = config.fragment_sizes;
        const auto it = std::find(fs.begin(), fs.end(), n);
        if (it == fs.end()) throw std::out_of_range("fragment size not in sweep");
        return at(ti, static_cast<std::size_t>(it - fs.begin()));
    }
};

/// Everything known about one evaluated point of one realization.
struct PointSample {
    int realization;
    std::size_t time_index;
    double time;
    int fragment_size;
    const FragmentSpec& fragment;  // last fragment evaluated for this size
    const ModelInstance& instance;
    const PureState& state;
    const BranchingState* branching;  // null when the model has no branching form
    double I;
    double chi;      // NaN without branching form
    double discord;  // NaN without branching form
    double S_S;
    double S_max;
};

/// Invoked for every (realization, time, fragment size) under a lock.
using PointVisitor = std::function<void(const PointSample&)>;

namespace detail {

inline Engine resolve_engine(Engine requested, const ModelInstance& inst) {
    const bool branching = inst.branching_couplings().has_value();
    const bool diagonal = inst.is_z_only();
    switch (requested) {
        case Engine::Auto:
            return branching ? Engine::Branching : diagonal ? Engine::Diagonal : Engine::Dense;
        case Engine::Branching:
            if (!branching) throw std::invalid_argument("branching engine requires a parallel decoherent model without scrambling");
            return requested;
        case Engine::Diagonal:
            if (!diagonal) throw std::invalid_argument("diagonal engine requires a z-only model");
            return requested;
        case Engine::Dense:
            return requested;
    }
    return requested;
}

// Neumaier-compensated sum in index order.
class CompensatedSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

inline std::pair<double, double> mean_and_stderr(const std::vector<double>& xs) {
    CompensatedSum s;
    for (double x : xs) s.add(x);
    const double n = static_cast<double>(xs.size());
    const double mean = s.value() / n;
    if (xs.size() < 2) return {mean, 0.0};
    CompensatedSum v;
    for (double x : xs) v.add((x - mean) * (x - mean));
    return {mean, std::sqrt(v.value() / (n - 1.0) / n)};
}

inline FragmentSpec random_subset(int n_env, int size, Rng& rng) {
    std::vector<int> pool(static_cast<std::size_t>(n_env));
    for (int i = 0; i < n_env; ++i) pool[i] = i + 1;
    for (int k = 0; k < size; ++k) {
        const auto j = k + static_cast<int>(rng.index(static_cast<std::uint64_t>(n_env - k)));
        std::swap(pool[k], pool[j]);
    }
    pool.resize(static_cast<std::size_t>(size));
    return FragmentSpec(std::move(pool));
}

struct RealizationValues {
    // Flattened over (time index, fragment index).
    std::vector<double> I, chi, discord, ratio;
    std::vector<double> S, S_ratio;  // per time index
};

}  // namespace detail

/// Seed of realization r.
inline std::uint64_t realization_seed(std::uint64_t master_seed, int r) {
    return mix_seed(master_seed, static_cast<std::uint64_t>(r));
}

inline SweepResult run_sweep(const ExperimentConfig& config, const PointVisitor& visitor = {}) {
    config.validate();
    const ModelSpec spec = config.spec();
    const int n_env = config.n_env;
    const std::size_t nt = config.time_grid.size();
    const std::size_t nf = config.fragment_sizes.size();
    const auto R = static_cast<std::size_t>(config.realizations);

    std::vector<detail::RealizationValues> values(R);
    std::vector<char> has_chi(R, 0);
    std::mutex visit_mutex;

    auto run_one = [&](int r) {
        const std::uint64_t seed = realization_seed(config.master_seed, r);
        const ModelInstance inst = sample_instance(spec, mix_seed(seed, 0));
        const ProductCoeffs init = random_product_state(n_env + 1, mix_seed(seed, 1));
        Rng frag_rng(mix_seed(seed, 2));

        const Engine engine = detail::resolve_engine(config.engine, inst);
        const auto couplings = inst.branching_couplings();
        const PureState psi0 = init.to_dense();
        std::optional<DenseEvolver> dense;
        std::optional<DiagonalEvolver> diag;
        if (engine == Engine::Dense) dense.emplace(inst);
        if (engine == Engine::Diagonal) diag.emplace(inst);

        const double a0 = std::norm(init.site(0).alpha);
        const double smax = s_max(std::clamp(a0, 0.0, 1.0));
        auto normalized = [&](double x) {
            if (config.normalize == Normalize::None) return x;
            return smax > 0.0 ? x / smax : 0.0;
        };

        auto& out = values[static_cast<std::size_t>(r)];
        out.I.assign(nt * nf, 0.0);
        out.chi.assign(nt * nf, std::numeric_limits<double>::quiet_NaN());
        out.discord.assign(nt * nf, std::numeric_limits<double>::quiet_NaN());
        out.ratio.assign(nt * nf, 0.0);
        out.S.assign(nt, 0.0);
        out.S_ratio.assign(nt, 0.0);
        has_chi[static_cast<std::size_t>(r)] = couplings.has_value();

        for (std::size_t ti = 0; ti < nt; ++ti) {
            const double t = config.time_grid[ti];
            std::optional<BranchingState> bs;
            if (couplings) bs = evolve_branching(init, *couplings, t);
            const PureState psi = engine == Engine::Branching ? branching_to_dense(*bs)
                                  : engine == Engine::Diagonal ? diag->evolve(psi0, t)
                                                               : dense->evolve(psi0, t);
            const double s_s = subsystem_entropy(psi, {0});
            out.S[ti] = s_s;
            out.S_ratio[ti] = normalized(s_s);

            for (std::size_t fi = 0; fi < nf; ++fi) {
                const int n = config.fragment_sizes[fi];
                const int reps = config.fragment_policy.kind == FragmentPolicy::Kind::Prefix ? 1 : config.fragment_policy.count;
                double i_sum = 0.0, chi_sum = 0.0, d_sum = 0.0;
                FragmentSpec frag;
                for (int k = 0; k < reps; ++k) {
                    frag = config.fragment_policy.kind == FragmentPolicy::Kind::Prefix
                               ? FragmentSpec::prefix(n)
                               : detail::random_subset(n_env, n, frag_rng);
                    const double i_val = mutual_information(psi, frag);
                    i_sum += i_val;
                    if (bs) {
                        const double chi = holevo_branching(*bs, frag);
                        chi_sum += chi;
                        d_sum += i_val - chi;
                    }
                }
                const std::size_t cell = ti * nf + fi;
                out.I[cell] = i_sum / reps;
                out.ratio[cell] = normalized(out.I[cell]);
                if (bs) {
                    out.chi[cell] = chi_sum / reps;
                    out.discord[cell] = d_sum / reps;
                }
                if (visitor) {
                    std::lock_guard lock(visit_mutex);
                    visitor(PointSample{r, ti, t, n, frag, inst, psi, bs ? &*bs : nullptr, out.I[cell], out.chi[cell],
                                        out.discord[cell], s_s, smax});
                }
            }
        }
    };

    unsigned workers = config.threads != 0 ? config.threads : std::max(1U, std::thread::hardware_concurrency());
    workers = std::min<unsigned>(workers, static_cast<unsigned>(R));
    if (workers <= 1) {
        for (int r = 0; r < config.realizations; ++r) run_one(r);
    } else {
        std::atomic<int> next{0};
        std::exception_ptr failure;
        std::mutex failure_mutex;
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (int r = next++; r < config.realizations; r = next++) {
                    try {
                        run_one(r);
                    } catch (...) {
                        std::lock_guard lock(failure_mutex);
                        if (!failure) failure = std::current_exception();
                        next = config.realizations;
                    }
                }
            });
        }
        for (auto& th : pool) th.join();
        if (failure) std::rethrow_exception(failure);
    }

    SweepResult result;
    result.config = config;
    result.model_label = spec.label();
    result.realizations = config.realizations;
    result.has_chi = std::all_of(has_chi.begin(), has_chi.end(), [](char c) { return c != 0; });
    result.cells.resize(nt * nf);

    std::vector<double> column(R);
    auto gather = [&](auto member, std::size_t index) -> const std::vector<double>& {
        for (std::size_t r = 0; r < R; ++r) column[r] = (values[r].*member)[index];
        return column;
    };
    for (std::size_t ti = 0; ti < nt; ++ti) {
        const double s_mean = detail::mean_and_stderr(gather(&detail::RealizationValues::S, ti)).first;
        const double s_ratio = detail::mean_and_stderr(gather(&detail::RealizationValues::S_ratio, ti)).first;
        for (std::size_t fi = 0; fi < nf; ++fi) {
            const std::size_t cell = ti * nf + fi;
            auto& c = result.cells[cell];
            std::tie(c.I_mean, c.I_stderr) = detail::mean_and_stderr(gather(&detail::RealizationValues::I, cell));
            c.ratio_mean = detail::mean_and_stderr(gather(&detail::RealizationValues::ratio, cell)).first;
            c.S_mean = s_mean;
            c.S_ratio_mean = s_ratio;
            if (result.has_chi) {
                const auto [cm, cs] = detail::mean_and_stderr(gather(&detail::RealizationValues::chi, cell));
                c.chi_mean = cm;
                c.chi_stderr = cs;
                c.discord_mean = detail::mean_and_stderr(gather(&detail::RealizationValues::discord, cell)).first;
            }
        }
    }
    return result;
}

// ---------------------------------------------------------------------------
// Figure pipelines

struct Fig2Row {
    int n;
    double I_inf;
    double chi_inf;
};

/// Long-time I and chi against fragment size n = 0..n_env for eps_bar = 2/3.
inline std::vector<Fig2Row> reproduce_fig2(int n_env = 50, double alpha0_sq = 0.5) {
    std::vector<Fig2Row> rows;
    rows.reserve(static_cast<std::size_t>(n_env) + 1);
    for (int n = 0; n <= n_env; ++n) {
        rows.push_back({n, asymptotic_I(n, n_env, alpha0_sq), asymptotic_chi(n, alpha0_sq)});
    }
    return rows;
}

/// t_k = t_max * k / (points - 1), k = 0..points-1.
inline std::vector<double> uniform_time_grid(double t_max, int points) {
    if (points < 1) throw std::invalid_argument("time grid needs at least one point");
    std::vector<double> g(static_cast<std::size_t>(points));
    for (int k = 0; k < points; ++k) g[k] = points == 1 ? 0.0 : t_max * k / (points - 1);
    return g;
}

/// Defaults for the time x fragment-size panels: N = 8, 100 realizations,
/// t in [0, 5] with step 0.1 (CPDI-S continues to t = 50 with step 0.5),
/// n = 0..N, normalization by S_max, automatic engine choice.
inline ExperimentConfig fig3_config(ModelKind kind, const ModelOverrides& overrides = {}) {
    ExperimentConfig c;
    c.model = kind;
    c.overrides = overrides;
    c.n_env = 8;
    c.realizations = 100;
    c.time_grid = uniform_time_grid(5.0, 51);
    if (kind == ModelKind::CPDI_S) {
        for (int k = 11; k <= 100; ++k) c.time_grid.push_back(k / 2.0);
    }
    for (int n = 0; n <= c.n_env; ++n) c.fragment_sizes.push_back(n);
    c.normalize = Normalize::BySmax;
    c.engine = Engine::Auto;
    return c;
}

inline SweepResult reproduce_fig3(ModelKind kind, const ModelOverrides& overrides = {}) {
    return run_sweep(fig3_config(kind, overrides));
}

}  // namespace qdarwin
