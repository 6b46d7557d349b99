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

// Exact pure-state evolution: analytic branching states for
// H = sigma^z_0 (x) sum_i B_i sigma^z_i, a phase-only engine for z-only
// Hamiltonians and a dense spectral engine for everything else.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qdarwin/model.hpp"
#include "qdarwin/rng.hpp"

namespace qdarwin {

inline constexpr double kNormTolerance = 1e-9;

class PureState {
public:
    PureState(int n_qubits, std::vector<cplx> amplitudes) : n_qubits_(n_qubits), amps_(std::move(amplitudes)) {
        if (n_qubits < 1 || n_qubits > 30) throw std::invalid_argument("n_qubits out of range");
        if (amps_.size() != (std::size_t{1} << n_qubits)) {
            throw std::invalid_argument("amplitude vector must have length 2^n_qubits");
        }
    }

    /// |0...0>.
    static PureState basis(int n_qubits, std::size_t index = 0) {
        std::vector<cplx> a(std::size_t{1} << n_qubits);
        a.at(index) = 1.0;
        return PureState(n_qubits, std::move(a));
    }

    int n_qubits() const { return n_qubits_; }
    std::size_t dim() const { return amps_.size(); }
    const std::vector<cplx>& amplitudes() const { return amps_; }
    cplx operator[](std::size_t b) const { return amps_[b]; }

    double norm() const {
        double s = 0.0;
        for (const auto& a : amps_) s += std::norm(a);
        return std::sqrt(s);
    }
    bool normalized(double tol = kNormTolerance) const { return std::abs(norm() - 1.0) <= tol; }

private:
    int n_qubits_;
    std::vector<cplx> amps_;
};

/// Max |a_b - e^{i phi} b_b| after rotating `b` so that the two states agree in
/// phase on the largest-magnitude amplitude of `a`.
inline double max_amplitude_difference(const PureState& a, const PureState& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("dimension mismatch");
    std::size_t k = 0;
    for (std::size_t i = 1; i < a.dim(); ++i) {
        if (std::abs(a[i]) > std::abs(a[k])) k = i;
    }
    cplx rot = 1.0;
    if (std::abs(b[k]) > 0.0 && std::abs(a[k]) > 0.0) {
        rot = (a[k] / std::abs(a[k])) / (b[k] / std::abs(b[k]));
    }
    double d = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) d = std::max(d, std::abs(a[i] - rot * b[i]));
    return d;
}

// ---------------------------------------------------------------------------
// Product states

struct SiteAmplitudes {
    cplx alpha;  // on |0>
    cplx beta;   // on |1>
};

/// Separable state (alpha_0|0> + beta_0|1>) (x) ... over sites 0..N.
class ProductCoeffs {
public:
    explicit ProductCoeffs(std::vector<SiteAmplitudes> sites) : sites_(std::move(sites)) {
        if (sites_.empty()) throw std::invalid_argument("product state needs at least one site");
        for (const auto& s : sites_) {
            if (std::abs(std::norm(s.alpha) + std::norm(s.beta) - 1.0) > 1e-12) {
                throw std::invalid_argument("site coefficients must satisfy |alpha|^2 + |beta|^2 = 1");
            }
        }
    }

    int n_sites() const { return static_cast<int>(sites_.size()); }
    const SiteAmplitudes& site(int i) const { return sites_.at(static_cast<std::size_t>(i)); }
    const std::vector<SiteAmplitudes>& sites() const { return sites_; }

    PureState to_dense() const {
        const int n = n_sites();
        std::vector<cplx> amps(std::size_t{1} << n);
        for (std::size_t b = 0; b < amps.size(); ++b) {
            cplx a = 1.0;
            for (int k = 0; k < n; ++k) a *= ((b >> k) & 1U) ? sites_[k].beta : sites_[k].alpha;
            amps[b] = a;
        }
        return PureState(n, std::move(amps));
    }

private:
    std::vector<SiteAmplitudes> sites_;
};

/// Per site: |alpha|^2 = u uniform on [0,1], then independent phases of alpha
/// and beta uniform on [0, 2 pi). Three draws per site, in that order.
inline ProductCoeffs random_product_state(int n_qubits, std::uint64_t seed) {
    if (n_qubits < 1) throw std::invalid_argument("n_qubits must be >= 1");
    Rng rng(seed);
    std::vector<SiteAmplitudes> sites;
    sites.reserve(static_cast<std::size_t>(n_qubits));
    for (int i = 0; i < n_qubits; ++i) {
        const double u = rng.uniform();
        const double pa = rng.uniform(0.0, 2.0 * std::numbers::pi);
        const double pb = rng.uniform(0.0, 2.0 * std::numbers::pi);
        sites.push_back({std::polar(std::sqrt(u), pa), std::polar(std::sqrt(1.0 - u), pb)});
    }
    return ProductCoeffs(std::move(sites));
}

// ---------------------------------------------------------------------------
// Branching states

struct BranchingSite {
    cplx alpha;
    cplx beta;
    double field;  // B_i
};

/// alpha_0 |0> (x)_i |o_i(t)> + beta_0 |1> (x)_i |l_i(t)> with
///   |o_i(t)> = alpha_i e^{-i B_i t}|0> + beta_i e^{+i B_i t}|1>
///   |l_i(t)> = alpha_i e^{+i B_i t}|0> + beta_i e^{-i B_i t}|1>,
/// the exact solution of i d/dt psi = H psi for H = sigma^z_0 (x) sum_i B_i sigma^z_i.
/// Environment sites are addressed 1..N.
struct BranchingState {
    cplx alpha0;
    cplx beta0;
    std::vector<BranchingSite> sites;
    double time = 0.0;

    int n_env() const { return static_cast<int>(sites.size()); }
    double alpha0_sq() const { return std::norm(alpha0); }

    const BranchingSite& site(int i) const {
        if (i < 1 || i > n_env()) throw std::out_of_range("environment site out of range");
        return sites[static_cast<std::size_t>(i - 1)];
    }

    /// Branch state of site i conditioned on system |0>.
    SiteAmplitudes zero_branch(int i) const {
        const auto& s = site(i);
        const cplx ph = std::polar(1.0, -s.field * time);
        return {s.alpha * ph, s.beta * std::conj(ph)};
    }

    /// Branch state of site i conditioned on system |1>.
    SiteAmplitudes one_branch(int i) const {
        const auto& s = site(i);
        const cplx ph = std::polar(1.0, s.field * time);
        return {s.alpha * ph, s.beta * std::conj(ph)};
    }

    /// Gamma_i = <l_i|o_i> = |alpha_i|^2 e^{-2iB_i t} + |beta_i|^2 e^{2iB_i t}.
    cplx decoherence_factor(int i) const {
        const auto& s = site(i);
        const cplx ph = std::polar(1.0, -2.0 * s.field * time);
        return std::norm(s.alpha) * ph + std::norm(s.beta) * std::conj(ph);
    }
};

inline BranchingState evolve_branching(const ProductCoeffs& init, std::span<const double> fields, double t) {
    if (init.n_sites() != static_cast<int>(fields.size()) + 1) {
        throw std::invalid_argument("product state must have one more site than there are couplings");
    }
    BranchingState bs{init.site(0).alpha, init.site(0).beta, {}, t};
    bs.sites.reserve(fields.size());
    for (std::size_t i = 0; i < fields.size(); ++i) {
        const auto& s = init.site(static_cast<int>(i) + 1);
        bs.sites.push_back({s.alpha, s.beta, fields[i]});
    }
    return bs;
}

inline PureState branching_to_dense(const BranchingState& bs) {
    const int n = bs.n_env();
    std::vector<SiteAmplitudes> zero(static_cast<std::size_t>(n)), one(static_cast<std::size_t>(n));
    for (int i = 1; i <= n; ++i) {
        zero[i - 1] = bs.zero_branch(i);
        one[i - 1] = bs.one_branch(i);
    }
    std::vector<cplx> amps(std::size_t{1} << (n + 1));
    for (std::size_t b = 0; b < amps.size(); ++b) {
        const bool sys = b & 1U;
        const auto& branch = sys ? one : zero;
        cplx a = sys ? bs.beta0 : bs.alpha0;
        for (int k = 0; k < n; ++k) {
            a *= ((b >> (k + 1)) & 1U) ? branch[k].beta : branch[k].alpha;
        }
        amps[b] = a;
    }
    return PureState(n + 1, std::move(amps));
}

// ---------------------------------------------------------------------------
// Dense spectral engine

/// exp(-iHt) through a one-time eigendecomposition H = V diag(E) V^dagger.
class DenseEvolver {
public:
    explicit DenseEvolver(const ModelInstance& inst) : n_qubits_(inst.n_qubits()) {
        const Eigen::MatrixXcd h = hamiltonian_matrix(inst);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
        if (es.info() != Eigen::Success) throw std::runtime_error("Hamiltonian eigendecomposition failed");
        energies_ = es.eigenvalues();
        vectors_ = es.eigenvectors();
    }

    int n_qubits() const { return n_qubits_; }
    const Eigen::VectorXd& energies() const { return energies_; }

    PureState evolve(const PureState& psi0, double t) const {
        const auto c = project(psi0);
        return evolve_projected(c, t);
    }

    std::vector<PureState> evolve_many(const PureState& psi0, std::span<const double> times) const {
        const auto c = project(psi0);
        std::vector<PureState> out;
        out.reserve(times.size());
        for (double t : times) out.push_back(evolve_projected(c, t));
        return out;
    }

private:
    Eigen::VectorXcd project(const PureState& psi0) const {
        if (psi0.n_qubits() != n_qubits_) throw std::invalid_argument("state size does not match Hamiltonian");
        if (!psi0.normalized()) throw std::invalid_argument("initial state is not normalized");
        const Eigen::Map<const Eigen::VectorXcd> v(psi0.amplitudes().data(), static_cast<Eigen::Index>(psi0.dim()));
        return vectors_.adjoint() * v;
    }

    PureState evolve_projected(const Eigen::VectorXcd& c, double t) const {
        Eigen::VectorXcd phased(c.size());
        for (Eigen::Index k = 0; k < c.size(); ++k) phased(k) = std::polar(1.0, -energies_(k) * t) * c(k);
        const Eigen::VectorXcd out = vectors_ * phased;
        return PureState(n_qubits_, std::vector<cplx>(out.data(), out.data() + out.size()));
    }

    int n_qubits_;
    Eigen::VectorXd energies_;
    Eigen::MatrixXcd vectors_;
};

inline PureState evolve_dense(const ModelInstance& inst, const PureState& psi0, double t) {
    return DenseEvolver(inst).evolve(psi0, t);
}

// ---------------------------------------------------------------------------
// Diagonal engine

inline constexpr int kMaxDiagonalQubits = 26;

/// Phase-only evolution for Hamiltonians built from sigma^z sigma^z couplings
/// and z fields. E_b = sum J_ij s_i s_j + sum h_i s_i with s_k = 1 - 2 bit_k(b).
class DiagonalEvolver {
public:
    explicit DiagonalEvolver(const ModelInstance& inst) : n_qubits_(inst.n_qubits()) {
        if (!inst.is_z_only()) throw std::invalid_argument("non-diagonal instance: only zz couplings and z fields allowed");
        const int q = n_qubits_;
        if (q > kMaxDiagonalQubits) throw std::length_error("diagonal engine limited to 26 qubits");

        // Start from all spins up and build E[b | 1<<k] from E[b] for b < 2^k:
        // flipping spin k changes the energy by -2 (h_k + sum_j J_jk s_j).
        std::vector<std::vector<double>> jzz(static_cast<std::size_t>(q), std::vector<double>(static_cast<std::size_t>(q), 0.0));
        double e0 = 0.0;
        for (int i = 0; i < q; ++i) {
            e0 += inst.field(i).z;
            for (int j = i + 1; j < q; ++j) {
                const double c = inst.coupling(i, j, kZ, kZ);
                jzz[i][j] = jzz[j][i] = c;
                e0 += c;
            }
        }
        energies_.assign(std::size_t{1} << q, 0.0);
        energies_[0] = e0;
        for (int k = 0; k < q; ++k) {
            double upper = inst.field(k).z;
            for (int j = k + 1; j < q; ++j) upper += jzz[k][j];
            const std::size_t half = std::size_t{1} << k;
            for (std::size_t b = 0; b < half; ++b) {
                double local = upper;
                for (int j = 0; j < k; ++j) local += ((b >> j) & 1U) ? -jzz[k][j] : jzz[k][j];
                energies_[b | half] = energies_[b] - 2.0 * local;
            }
        }
    }

    int n_qubits() const { return n_qubits_; }
    const std::vector<double>& energies() const { return energies_; }

    PureState evolve(const PureState& psi0, double t) const {
        if (psi0.n_qubits() != n_qubits_) throw std::invalid_argument("state size does not match Hamiltonian");
        if (!psi0.normalized()) throw std::invalid_argument("initial state is not normalized");
        std::vector<cplx> out(psi0.dim());
        for (std::size_t b = 0; b < out.size(); ++b) out[b] = std::polar(1.0, -energies_[b] * t) * psi0[b];
        return PureState(n_qubits_, std::move(out));
    }

private:
    int n_qubits_;
    std::vector<double> energies_;
};

inline PureState evolve_diagonal(const ModelInstance& inst, const PureState& psi0, double t) {
    return DiagonalEvolver(inst).evolve(psi0, t);
}

}  // namespace qdarwin
