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

// Two-body qubit Hamiltonians: structural specs, sampled instances, the four
// reference models, the pointer-basis classifier and dense matrix assembly.
//
// Qubit 0 is the system S; qubits 1..N form the environment E. In every
// state vector and operator the state of qubit k is bit k of the basis index
// (system = least significant bit) and sigma^z|0> = +|0>.

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "qdarwin/rng.hpp"

namespace qdarwin {

using cplx = std::complex<double>;

inline constexpr int kX = 0;
inline constexpr int kY = 1;
inline constexpr int kZ = 2;

inline char axis_name(int axis) { return "xyz"[axis]; }

inline int parse_axis(std::string_view s) {
    if (s == "x") return kX;
    if (s == "y") return kY;
    if (s == "z") return kZ;
    throw std::invalid_argument("unknown axis '" + std::string(s) + "'");
}

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    double operator[](int axis) const { return axis == kX ? x : axis == kY ? y : z; }
    double& operator[](int axis) { return axis == kX ? x : axis == kY ? y : z; }

    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    Vec3 cross(const Vec3& o) const {
        return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
    }
    double norm() const { return std::sqrt(dot(*this)); }
    bool finite() const { return std::isfinite(x) && std::isfinite(y) && std::isfinite(z); }

    friend bool operator==(const Vec3&, const Vec3&) = default;
};

// ---------------------------------------------------------------------------
// Coupling distributions

struct ContinuousUniform {
    double half_width;  // support [-half_width, half_width]
    friend bool operator==(const ContinuousUniform&, const ContinuousUniform&) = default;
};

struct DiscreteUniform {
    std::vector<double> support;
    friend bool operator==(const DiscreteUniform&, const DiscreteUniform&) = default;
};

struct PointMass {
    double value;
    friend bool operator==(const PointMass&, const PointMass&) = default;
};

/// Law of a random coupling. Constructed only through the validating
/// factories, so a live object always satisfies its invariants.
class CouplingDistribution {
public:
    using Variant = std::variant<ContinuousUniform, DiscreteUniform, PointMass>;

    static CouplingDistribution uniform(double half_width) {
        if (!(half_width > 0.0) || !std::isfinite(half_width)) {
            throw std::invalid_argument("uniform half-width must be positive and finite");
        }
        return CouplingDistribution(ContinuousUniform{half_width});
    }

    static CouplingDistribution discrete(std::vector<double> support) {
        if (support.empty()) throw std::invalid_argument("discrete support must be nonempty");
        for (std::size_t i = 0; i < support.size(); ++i) {
            if (!std::isfinite(support[i])) {
                throw std::invalid_argument("discrete support entries must be finite");
            }
            for (std::size_t j = 0; j < i; ++j) {
                if (support[i] == support[j]) {
                    throw std::invalid_argument("discrete support entries must be distinct");
                }
            }
        }
        return CouplingDistribution(DiscreteUniform{std::move(support)});
    }

    static CouplingDistribution point(double value) {
        if (!std::isfinite(value)) throw std::invalid_argument("point mass must be finite");
        return CouplingDistribution(PointMass{value});
    }

    const Variant& variant() const { return v_; }
    bool is_continuous() const { return std::holds_alternative<ContinuousUniform>(v_); }

    /// Consumes exactly one uniform draw.
    double sample(Rng& rng) const {
        const double u = rng.uniform();
        if (const auto* c = std::get_if<ContinuousUniform>(&v_)) {
            return c->half_width * (2.0 * u - 1.0);
        }
        if (const auto* d = std::get_if<DiscreteUniform>(&v_)) {
            auto k = static_cast<std::size_t>(u * static_cast<double>(d->support.size()));
            return d->support[std::min(k, d->support.size() - 1)];
        }
        return std::get<PointMass>(v_).value;
    }

    friend bool operator==(const CouplingDistribution&, const CouplingDistribution&) = default;

private:
    explicit CouplingDistribution(Variant v) : v_(std::move(v)) {}
    Variant v_;
};

// ---------------------------------------------------------------------------
// Coefficient sources (an entry of J or B before sampling)

struct Zero {
    friend bool operator==(const Zero&, const Zero&) = default;
};
struct Constant {
    double value;
    friend bool operator==(const Constant&, const Constant&) = default;
};
struct Random {
    CouplingDistribution dist;
    friend bool operator==(const Random&, const Random&) = default;
};

using CoefficientSource = std::variant<Zero, Constant, Random>;

inline bool is_zero(const CoefficientSource& s) { return std::holds_alternative<Zero>(s); }

inline CoefficientSource constant(double value) {
    if (!std::isfinite(value)) throw std::invalid_argument("constant coefficient must be finite");
    if (value == 0.0) return Zero{};
    return Constant{value};
}

// Index of the unordered pair (i, j), i < j < n, in lexicographic order.
inline std::size_t pair_index(int i, int j, int n) {
    const auto ui = static_cast<std::size_t>(i);
    return ui * static_cast<std::size_t>(n) - ui * (ui + 1) / 2 + static_cast<std::size_t>(j - i - 1);
}

// ---------------------------------------------------------------------------
// ModelSpec

/// Structural description of H = sum_{i<j} J^{ab}_{ij} s^a_i s^b_j + sum_i B_i . s_i
/// with sources in place of numbers. Environment sites are numbered 1..n_env.
class ModelSpec {
public:
    explicit ModelSpec(int n_env, std::string label = {})
        : n_env_(n_env), label_(std::move(label)) {
        if (n_env < 1) throw std::invalid_argument("n_env must be >= 1");
        const auto n = static_cast<std::size_t>(n_env);
        sys_env_.assign(9 * n, Zero{});
        intra_env_.assign(9 * n * (n - 1) / 2, Zero{});
        env_fields_.assign(3 * n, Zero{});
    }

    int n_env() const { return n_env_; }
    const std::string& label() const { return label_; }
    void set_label(std::string label) { label_ = std::move(label); }

    const Vec3& b0() const { return b0_; }
    void set_b0(const Vec3& b) {
        if (!b.finite()) throw std::invalid_argument("b0 must be finite");
        b0_ = b;
    }

    /// J^{alpha beta}_{0j}, j in 1..n_env.
    const CoefficientSource& sys_env(int alpha, int j, int beta) const {
        return sys_env_[sys_env_offset(alpha, j, beta)];
    }
    void set_sys_env(int alpha, int j, int beta, CoefficientSource s) {
        sys_env_[sys_env_offset(alpha, j, beta)] = std::move(s);
    }

    /// J^{alpha beta}_{ij}, 1 <= i < j <= n_env.
    const CoefficientSource& intra_env(int i, int j, int alpha, int beta) const {
        return intra_env_[intra_env_offset(i, j, alpha, beta)];
    }
    void set_intra_env(int i, int j, int alpha, int beta, CoefficientSource s) {
        intra_env_[intra_env_offset(i, j, alpha, beta)] = std::move(s);
    }

    /// Component `axis` of B_i, i in 1..n_env.
    const CoefficientSource& env_field(int site, int axis) const {
        return env_fields_[env_field_offset(site, axis)];
    }
    void set_env_field(int site, int axis, CoefficientSource s) {
        env_fields_[env_field_offset(site, axis)] = std::move(s);
    }

    /// True when every random source is continuous and at least one
    /// system-environment coupling is random.
    bool continuous_support() const {
        bool any_random_coupling = false;
        for (const auto& s : sys_env_) {
            if (const auto* r = std::get_if<Random>(&s)) {
                any_random_coupling = true;
                if (!r->dist.is_continuous()) return false;
            }
        }
        for (const auto* group : {&intra_env_, &env_fields_}) {
            for (const auto& s : *group) {
                if (const auto* r = std::get_if<Random>(&s); r && !r->dist.is_continuous()) return false;
            }
        }
        return any_random_coupling;
    }

    // Raw storage in draw order (see sample_instance).
    const std::vector<CoefficientSource>& sys_env_sources() const { return sys_env_; }
    const std::vector<CoefficientSource>& intra_env_sources() const { return intra_env_; }
    const std::vector<CoefficientSource>& env_field_sources() const { return env_fields_; }

    friend bool operator==(const ModelSpec&, const ModelSpec&) = default;

private:
    void check_axis(int a) const {
        if (a < 0 || a > 2) throw std::out_of_range("axis index out of range");
    }
    void check_site(int j) const {
        if (j < 1 || j > n_env_) throw std::out_of_range("environment site out of range");
    }
    std::size_t sys_env_offset(int alpha, int j, int beta) const {
        check_axis(alpha);
        check_axis(beta);
        check_site(j);
        return (static_cast<std::size_t>(alpha) * n_env_ + (j - 1)) * 3 + beta;
    }
    std::size_t intra_env_offset(int i, int j, int alpha, int beta) const {
        check_site(i);
        check_site(j);
        check_axis(alpha);
        check_axis(beta);
        if (i >= j) throw std::out_of_range("intra-environment pair requires i < j");
        return pair_index(i - 1, j - 1, n_env_) * 9 + alpha * 3 + beta;
    }
    std::size_t env_field_offset(int site, int axis) const {
        check_site(site);
        check_axis(axis);
        return static_cast<std::size_t>(site - 1) * 3 + axis;
    }

    int n_env_;
    std::string label_;
    Vec3 b0_{};
    std::vector<CoefficientSource> sys_env_;
    std::vector<CoefficientSource> intra_env_;
    std::vector<CoefficientSource> env_fields_;
};

// ---------------------------------------------------------------------------
// ModelInstance

/// Numeric coefficients of one realization. Sites are 0..n_env (0 = system).
class ModelInstance {
public:
    explicit ModelInstance(int n_env) : n_env_(n_env) {
        if (n_env < 1) throw std::invalid_argument("n_env must be >= 1");
        const auto q = static_cast<std::size_t>(n_env + 1);
        j_.assign(9 * q * (q - 1) / 2, 0.0);
        fields_.assign(q, Vec3{});
    }

    int n_env() const { return n_env_; }
    int n_qubits() const { return n_env_ + 1; }

    double coupling(int i, int j, int alpha, int beta) const { return j_[offset(i, j, alpha, beta)]; }
    void set_coupling(int i, int j, int alpha, int beta, double v) {
        if (!std::isfinite(v)) throw std::invalid_argument("coupling must be finite");
        j_[offset(i, j, alpha, beta)] = v;
    }

    const Vec3& field(int site) const { return fields_.at(static_cast<std::size_t>(site)); }
    void set_field(int site, const Vec3& b) {
        if (!b.finite()) throw std::invalid_argument("field must be finite");
        fields_.at(static_cast<std::size_t>(site)) = b;
    }

    /// Largest coefficient magnitude over all couplings and fields.
    double scale() const {
        double s = 0.0;
        for (double v : j_) s = std::max(s, std::abs(v));
        for (const auto& f : fields_) {
            s = std::max({s, std::abs(f.x), std::abs(f.y), std::abs(f.z)});
        }
        return s;
    }

    /// Multiplies every coefficient by c.
    ModelInstance scaled(double c) const {
        ModelInstance out = *this;
        for (double& v : out.j_) v *= c;
        for (auto& f : out.fields_) f = {f.x * c, f.y * c, f.z * c};
        return out;
    }

    /// Only sigma^z sigma^z couplings and z fields are nonzero.
    bool is_z_only() const {
        const int q = n_qubits();
        for (int i = 0; i < q; ++i) {
            if (fields_[i].x != 0.0 || fields_[i].y != 0.0) return false;
            for (int j = i + 1; j < q; ++j) {
                for (int a = 0; a < 3; ++a) {
                    for (int b = 0; b < 3; ++b) {
                        if ((a != kZ || b != kZ) && coupling(i, j, a, b) != 0.0) return false;
                    }
                }
            }
        }
        return true;
    }

    /// The couplings B_j when the instance has exactly the form
    /// sigma^z_0 (x) sum_j B_j sigma^z_j, otherwise nullopt.
    std::optional<std::vector<double>> branching_couplings() const {
        if (!is_z_only()) return std::nullopt;
        for (const auto& f : fields_) {
            if (f.z != 0.0) return std::nullopt;
        }
        const int q = n_qubits();
        for (int i = 1; i < q; ++i) {
            for (int j = i + 1; j < q; ++j) {
                if (coupling(i, j, kZ, kZ) != 0.0) return std::nullopt;
            }
        }
        std::vector<double> b(static_cast<std::size_t>(n_env_));
        for (int j = 1; j <= n_env_; ++j) b[j - 1] = coupling(0, j, kZ, kZ);
        return b;
    }

    const std::vector<double>& raw_couplings() const { return j_; }

    friend bool operator==(const ModelInstance&, const ModelInstance&) = default;

private:
    std::size_t offset(int i, int j, int alpha, int beta) const {
        const int q = n_qubits();
        if (i < 0 || j >= q || i >= j) throw std::out_of_range("coupling requires 0 <= i < j <= n_env");
        if (alpha < 0 || alpha > 2 || beta < 0 || beta > 2) throw std::out_of_range("axis index out of range");
        return pair_index(i, j, q) * 9 + alpha * 3 + beta;
    }

    int n_env_;
    std::vector<double> j_;
    std::vector<Vec3> fields_;
};

// ---------------------------------------------------------------------------
// Reference models

enum class ModelKind { CPDI, DPDI, CODI, CPDI_S };

inline std::string_view to_string(ModelKind k) {
    switch (k) {
        case ModelKind::CPDI: return "CPDI";
        case ModelKind::DPDI: return "DPDI";
        case ModelKind::CODI: return "CODI";
        case ModelKind::CPDI_S: return "CPDI-S";
    }
    return "?";
}

inline ModelKind parse_model_kind(std::string_view s) {
    if (s == "CPDI" || s == "cpdi") return ModelKind::CPDI;
    if (s == "DPDI" || s == "dpdi") return ModelKind::DPDI;
    if (s == "CODI" || s == "codi") return ModelKind::CODI;
    if (s == "CPDI-S" || s == "CPDI_S" || s == "cpdi-s" || s == "cpdi_s") return ModelKind::CPDI_S;
    throw std::invalid_argument("unknown model kind '" + std::string(s) + "'");
}

struct ModelOverrides {
    std::optional<double> coupling_half_width;         // CPDI, CODI, CPDI-S (default 1)
    std::optional<std::vector<double>> discrete_support;  // DPDI (default {-1,-0.5,0.5,1})
    std::optional<double> scrambling_half_width;       // CPDI-S (default 0.03; 0 disables)
    std::optional<double> system_field;                // CODI, y component of B_0 (default 1)
};

inline const std::vector<double>& default_discrete_support() {
    static const std::vector<double> s{-1.0, -0.5, 0.5, 1.0};
    return s;
}

inline ModelSpec build_model(ModelKind kind, int n_env, const ModelOverrides& o = {}) {
    if (n_env < 1) throw std::invalid_argument("n_env must be >= 1");
    ModelSpec spec(n_env, std::string(to_string(kind)));

    const double width = o.coupling_half_width.value_or(1.0);
    CouplingDistribution coupling = kind == ModelKind::DPDI
                                        ? CouplingDistribution::discrete(o.discrete_support.value_or(default_discrete_support()))
                                        : CouplingDistribution::uniform(width);
    for (int j = 1; j <= n_env; ++j) spec.set_sys_env(kZ, j, kZ, Random{coupling});

    if (kind == ModelKind::CODI) {
        const double by = o.system_field.value_or(1.0);
        if (!std::isfinite(by)) throw std::invalid_argument("system field must be finite");
        spec.set_b0({0.0, by, 0.0});
    }
    if (kind == ModelKind::CPDI_S) {
        const double s = o.scrambling_half_width.value_or(0.03);
        if (!(s >= 0.0) || !std::isfinite(s)) {
            throw std::invalid_argument("scrambling half-width must be non-negative");
        }
        if (s > 0.0) {
            const auto dist = CouplingDistribution::uniform(s);
            for (int i = 1; i <= n_env; ++i) {
                for (int j = i + 1; j <= n_env; ++j) spec.set_intra_env(i, j, kZ, kZ, Random{dist});
            }
        }
    }
    return spec;
}

// ---------------------------------------------------------------------------
// Sampling

inline double draw(const CoefficientSource& s, Rng& rng) {
    if (const auto* c = std::get_if<Constant>(&s)) return c->value;
    if (const auto* r = std::get_if<Random>(&s)) return r->dist.sample(rng);
    return 0.0;
}

/// Draw order: sys_env by (alpha, j, beta), intra_env by (i, j, alpha, beta),
/// then env fields by (site, component). Only Random sources consume draws.
inline ModelInstance sample_instance(const ModelSpec& spec, std::uint64_t seed) {
    Rng rng(seed);
    const int n = spec.n_env();
    ModelInstance inst(n);
    for (int a = 0; a < 3; ++a) {
        for (int j = 1; j <= n; ++j) {
            for (int b = 0; b < 3; ++b) inst.set_coupling(0, j, a, b, draw(spec.sys_env(a, j, b), rng));
        }
    }
    for (int i = 1; i <= n; ++i) {
        for (int j = i + 1; j <= n; ++j) {
            for (int a = 0; a < 3; ++a) {
                for (int b = 0; b < 3; ++b) inst.set_coupling(i, j, a, b, draw(spec.intra_env(i, j, a, b), rng));
            }
        }
    }
    inst.set_field(0, spec.b0());
    for (int i = 1; i <= n; ++i) {
        Vec3 f;
        for (int c = 0; c < 3; ++c) f[c] = draw(spec.env_field(i, c), rng);
        inst.set_field(i, f);
    }
    return inst;
}

// ---------------------------------------------------------------------------
// Classification

struct Classification {
    bool pointer_basis = false;
    bool continuous_support = false;
    bool no_scrambling = false;
    bool darwinism_supported = false;
    std::optional<Vec3> pointer_direction;
};

/// The system-environment coupling matrix M[alpha, 3(j-1) + beta] = J^{ab}_{0j}.
inline Eigen::MatrixXd system_coupling_matrix(const ModelInstance& inst) {
    const int n = inst.n_env();
    Eigen::MatrixXd m(3, 3 * n);
    for (int a = 0; a < 3; ++a) {
        for (int j = 1; j <= n; ++j) {
            for (int b = 0; b < 3; ++b) m(a, 3 * (j - 1) + b) = inst.coupling(0, j, a, b);
        }
    }
    return m;
}

/// A pointer basis exists iff the S-E interaction factorizes as
/// (v0 . sigma_0) (x) h_E and B_0 is parallel to v0. Numerically: rank(M) <= 1
/// with sigma_2 <= tol * sigma_1, and |B_0 x v0| <= tol |B_0|.
inline Classification classify(const ModelInstance& inst, bool spec_support_continuous, double tol = 1e-9) {
    if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
    Classification c;
    c.continuous_support = spec_support_continuous;

    const Vec3 b0 = inst.field(0);
    const Eigen::MatrixXd m = system_coupling_matrix(inst);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU);
    const auto& sv = svd.singularValues();
    const double s1 = sv.size() > 0 ? sv(0) : 0.0;

    if (s1 == 0.0) {
        c.pointer_basis = true;
        if (b0.norm() > 0.0) {
            const double n = b0.norm();
            c.pointer_direction = Vec3{b0.x / n, b0.y / n, b0.z / n};
        }
    } else if (sv.size() < 2 || sv(1) <= tol * s1) {
        Vec3 v{svd.matrixU()(0, 0), svd.matrixU()(1, 0), svd.matrixU()(2, 0)};
        const double n = v.norm();
        v = {v.x / n, v.y / n, v.z / n};
        // Fix the sign: the largest-magnitude component is positive.
        int big = 0;
        for (int a = 1; a < 3; ++a) {
            if (std::abs(v[a]) > std::abs(v[big])) big = a;
        }
        if (v[big] < 0.0) v = {-v.x, -v.y, -v.z};
        c.pointer_basis = b0.cross(v).norm() <= tol * b0.norm();
        if (c.pointer_basis) c.pointer_direction = v;
    }

    const double scale = inst.scale();
    c.no_scrambling = true;
    for (int i = 1; i <= inst.n_env() && c.no_scrambling; ++i) {
        for (int j = i + 1; j <= inst.n_env() && c.no_scrambling; ++j) {
            for (int a = 0; a < 3; ++a) {
                for (int b = 0; b < 3; ++b) {
                    if (std::abs(inst.coupling(i, j, a, b)) > tol * scale) c.no_scrambling = false;
                }
            }
        }
    }
    c.darwinism_supported = c.pointer_basis && c.continuous_support && c.no_scrambling;
    return c;
}

// ---------------------------------------------------------------------------
// Dense Hamiltonian

inline constexpr int kMaxDenseQubits = 13;

/// Action of sigma^axis on a single qubit in state `bit`: returns whether
/// the bit flips and the phase picked up.
inline std::pair<bool, cplx> pauli_action(int axis, bool bit) {
    switch (axis) {
        case kX: return {true, cplx(1.0, 0.0)};
        case kY: return {true, bit ? cplx(0.0, -1.0) : cplx(0.0, 1.0)};
        default: return {false, bit ? cplx(-1.0, 0.0) : cplx(1.0, 0.0)};
    }
}

inline Eigen::MatrixXcd hamiltonian_matrix(const ModelInstance& inst) {
    const int q = inst.n_qubits();
    if (q > kMaxDenseQubits) {
        throw std::length_error("dense Hamiltonian limited to " + std::to_string(kMaxDenseQubits) + " qubits");
    }
    const std::size_t dim = std::size_t{1} << q;

    struct Term {
        int i, j, a, b;
        double c;
    };
    std::vector<Term> terms;
    for (int i = 0; i < q; ++i) {
        for (int j = i + 1; j < q; ++j) {
            for (int a = 0; a < 3; ++a) {
                for (int b = 0; b < 3; ++b) {
                    if (const double c = inst.coupling(i, j, a, b); c != 0.0) terms.push_back({i, j, a, b, c});
                }
            }
        }
    }

    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (std::size_t col = 0; col < dim; ++col) {
        for (const auto& t : terms) {
            const auto [fi, pi] = pauli_action(t.a, (col >> t.i) & 1U);
            const auto [fj, pj] = pauli_action(t.b, (col >> t.j) & 1U);
            std::size_t row = col;
            if (fi) row ^= std::size_t{1} << t.i;
            if (fj) row ^= std::size_t{1} << t.j;
            h(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) += t.c * pi * pj;
        }
        for (int k = 0; k < q; ++k) {
            const Vec3& f = inst.field(k);
            for (int a = 0; a < 3; ++a) {
                if (f[a] == 0.0) continue;
                const auto [flip, ph] = pauli_action(a, (col >> k) & 1U);
                const std::size_t row = flip ? col ^ (std::size_t{1} << k) : col;
                h(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) += f[a] * ph;
            }
        }
    }
    return h;
}

}  // namespace qdarwin
