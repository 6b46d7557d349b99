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

// Reduced states, entropies and correlation measures. All entropies are in
// bits (log base 2).

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qdarwin/dynamics.hpp"

namespace qdarwin {

inline constexpr double kEigenTolerance = 1e-9;

/// Unit-trace positive semidefinite Hermitian matrix. The constructor checks
/// trace and Hermiticity and symmetrizes away rounding noise; positivity is
/// checked where the spectrum is computed.
class DensityMatrix {
public:
    explicit DensityMatrix(Eigen::MatrixXcd m) : m_(std::move(m)) {
        if (m_.rows() != m_.cols() || m_.rows() == 0) throw std::invalid_argument("density matrix must be square");
        if (std::abs(m_.trace() - cplx(1.0, 0.0)) > 1e-9) throw std::invalid_argument("density matrix trace must be 1");
        if ((m_ - m_.adjoint()).cwiseAbs().maxCoeff() > 1e-12) {
            throw std::invalid_argument("density matrix must be Hermitian");
        }
        m_ = 0.5 * (m_ + m_.adjoint()).eval();
    }

    Eigen::Index dim() const { return m_.rows(); }
    const Eigen::MatrixXcd& matrix() const { return m_; }

    /// Eigenvalues clamped to [0, 1]; throws when one lies outside by more
    /// than the tolerance.
    Eigen::VectorXd spectrum() const {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m_, Eigen::EigenvaluesOnly);
        Eigen::VectorXd w = es.eigenvalues();
        for (auto& x : w) {
            if (x < -kEigenTolerance || x > 1.0 + kEigenTolerance) {
                throw std::domain_error("density matrix eigenvalue outside [0, 1]");
            }
            x = std::clamp(x, 0.0, 1.0);
        }
        return w;
    }

private:
    Eigen::MatrixXcd m_;
};

/// Ordered set of distinct environment sites (1..N) observed together.
class FragmentSpec {
public:
    FragmentSpec() = default;
    explicit FragmentSpec(std::vector<int> sites) : sites_(std::move(sites)) {
        for (std::size_t i = 0; i < sites_.size(); ++i) {
            if (sites_[i] < 1) throw std::out_of_range("fragment sites are numbered from 1");
            for (std::size_t j = 0; j < i; ++j) {
                if (sites_[i] == sites_[j]) throw std::invalid_argument("duplicate fragment site");
            }
        }
    }

    /// Sites {1, ..., n}.
    static FragmentSpec prefix(int n) {
        std::vector<int> s(static_cast<std::size_t>(std::max(n, 0)));
        for (int i = 0; i < n; ++i) s[i] = i + 1;
        return FragmentSpec(std::move(s));
    }

    const std::vector<int>& sites() const { return sites_; }
    int size() const { return static_cast<int>(sites_.size()); }
    bool empty() const { return sites_.empty(); }
    bool contains(int site) const { return std::find(sites_.begin(), sites_.end(), site) != sites_.end(); }

    void check(int n_env) const {
        for (int s : sites_) {
            if (s > n_env) throw std::out_of_range("fragment site " + std::to_string(s) + " beyond environment size");
        }
    }

    /// Environment sites not in the fragment, ascending.
    FragmentSpec complement(int n_env) const {
        check(n_env);
        std::vector<int> c;
        for (int i = 1; i <= n_env; ++i) {
            if (!contains(i)) c.push_back(i);
        }
        return FragmentSpec(std::move(c));
    }

private:
    std::vector<int> sites_;
};

namespace detail {

inline void check_qubit_list(const std::vector<int>& qubits, int n_qubits) {
    for (std::size_t i = 0; i < qubits.size(); ++i) {
        if (qubits[i] < 0 || qubits[i] >= n_qubits) throw std::out_of_range("qubit index out of range");
        for (std::size_t j = 0; j < i; ++j) {
            if (qubits[i] == qubits[j]) throw std::invalid_argument("duplicate qubit index");
        }
    }
}

inline std::vector<int> complement_qubits(const std::vector<int>& keep, int n_qubits) {
    std::vector<int> rest;
    for (int q = 0; q < n_qubits; ++q) {
        if (std::find(keep.begin(), keep.end(), q) == keep.end()) rest.push_back(q);
    }
    return rest;
}

// Amplitudes reshaped to a (2^|keep|) x (2^|rest|) matrix; row bit m is qubit
// keep[m], column bits follow the remaining qubits in ascending order.
inline Eigen::MatrixXcd split_amplitudes(const PureState& psi, const std::vector<int>& keep) {
    const std::vector<int> rest = complement_qubits(keep, psi.n_qubits());
    Eigen::MatrixXcd m(Eigen::Index{1} << keep.size(), Eigen::Index{1} << rest.size());
    for (std::size_t b = 0; b < psi.dim(); ++b) {
        Eigen::Index r = 0, c = 0;
        for (std::size_t k = 0; k < keep.size(); ++k) r |= static_cast<Eigen::Index>((b >> keep[k]) & 1U) << k;
        for (std::size_t k = 0; k < rest.size(); ++k) c |= static_cast<Eigen::Index>((b >> rest[k]) & 1U) << k;
        m(r, c) = psi[b];
    }
    return m;
}

inline double entropy_of_spectrum(const Eigen::VectorXd& w) {
    double s = 0.0;
    for (double x : w) {
        if (x > 0.0) s -= x * std::log2(x);
    }
    return std::max(s, 0.0);
}

}  // namespace detail

/// Tr_{complement} |psi><psi|. The first kept qubit is the least significant
/// bit of the result's basis index.
inline DensityMatrix reduced_density(const PureState& psi, const std::vector<int>& keep) {
    detail::check_qubit_list(keep, psi.n_qubits());
    const Eigen::MatrixXcd m = detail::split_amplitudes(psi, keep);
    return DensityMatrix(m * m.adjoint());
}

inline double von_neumann_entropy(const DensityMatrix& rho) { return detail::entropy_of_spectrum(rho.spectrum()); }

/// Entropy of the reduced state on `keep`, computed on whichever side of the
/// bipartition is smaller (both share the nonzero spectrum).
inline double subsystem_entropy(const PureState& psi, const std::vector<int>& keep) {
    detail::check_qubit_list(keep, psi.n_qubits());
    if (keep.empty() || static_cast<int>(keep.size()) == psi.n_qubits()) return 0.0;
    const Eigen::MatrixXcd m = detail::split_amplitudes(psi, keep);
    if (m.rows() <= m.cols()) return von_neumann_entropy(DensityMatrix(m * m.adjoint()));
    return von_neumann_entropy(DensityMatrix(m.adjoint() * m));
}

/// I(S:F) = S_S + S_F - S_SF for a pure global state.
inline double mutual_information(const PureState& psi, const FragmentSpec& frag) {
    if (!psi.normalized()) throw std::invalid_argument("state is not normalized");
    frag.check(psi.n_qubits() - 1);
    if (frag.empty()) return 0.0;
    std::vector<int> sf{0};
    sf.insert(sf.end(), frag.sites().begin(), frag.sites().end());
    return subsystem_entropy(psi, {0}) + subsystem_entropy(psi, frag.sites()) - subsystem_entropy(psi, sf);
}

// ---------------------------------------------------------------------------
// Branching-state closed forms

/// h[x] = -x log2 x - (1 - x) log2 (1 - x).
inline double binary_entropy(double x) {
    x = std::clamp(x, 0.0, 1.0);
    double s = 0.0;
    if (x > 0.0) s -= x * std::log2(x);
    if (x < 1.0) s -= (1.0 - x) * std::log2(1.0 - x);
    return s;
}

/// Entropy of a qubit-rank mixture |a|^2 |X0><X0| + |b|^2 |X1><X1| with
/// |<X1|X0>|^2 = overlap_sq: h[(1 + sqrt(1 - 4|a|^2|b|^2 (1 - overlap_sq))) / 2].
inline double branch_entropy(double alpha0_sq, double overlap_sq) {
    const double p = 4.0 * alpha0_sq * (1.0 - alpha0_sq) * (1.0 - overlap_sq);
    return binary_entropy(0.5 * (1.0 + std::sqrt(std::clamp(1.0 - p, 0.0, 1.0))));
}

/// Gamma_F = prod_{i in F} Gamma_i (1 for the empty fragment).
inline cplx fragment_decoherence_factor(const BranchingState& bs, const FragmentSpec& frag) {
    frag.check(bs.n_env());
    cplx g = 1.0;
    for (int i : frag.sites()) g *= bs.decoherence_factor(i);
    return g;
}

/// Exact I(S:F) of a branching state from the decoherence factors of E, F
/// and the complement of F.
inline double mutual_information_branching(const BranchingState& bs, const FragmentSpec& frag) {
    const double a = bs.alpha0_sq();
    const double ge = std::norm(fragment_decoherence_factor(bs, FragmentSpec::prefix(bs.n_env())));
    const double gf = std::norm(fragment_decoherence_factor(bs, frag));
    const double gc = std::norm(fragment_decoherence_factor(bs, frag.complement(bs.n_env())));
    return branch_entropy(a, ge) + branch_entropy(a, gf) - branch_entropy(a, gc);
}

/// chi(S:F) = h[(1 + sqrt(1 - 4|a0|^2|b0|^2 (1 - |G|^2))) / 2]
///          - h[(1 + sqrt(1 - 4|a0|^2|b0|^2 (|G_F|^2 - |G|^2))) / 2]
/// where G is the decoherence factor of the whole environment.
inline double holevo_branching(const BranchingState& bs, const FragmentSpec& frag) {
    const double a = bs.alpha0_sq();
    const double ge = std::norm(fragment_decoherence_factor(bs, FragmentSpec::prefix(bs.n_env())));
    const double gf = std::norm(fragment_decoherence_factor(bs, frag));
    const double q = 4.0 * a * (1.0 - a);
    const double first = binary_entropy(0.5 * (1.0 + std::sqrt(std::clamp(1.0 - q * (1.0 - ge), 0.0, 1.0))));
    const double second = binary_entropy(0.5 * (1.0 + std::sqrt(std::clamp(1.0 - q * (gf - ge), 0.0, 1.0))));
    return first - second;
}

/// D(S:F) = I(S:F) - chi(S:F); `psi` must be the dense form of `bs`.
inline double quantum_discord(const PureState& psi, const BranchingState& bs, const FragmentSpec& frag) {
    return mutual_information(psi, frag) - holevo_branching(bs, frag);
}

// ---------------------------------------------------------------------------
// Variational Holevo quantity for a single-site fragment

namespace detail {

inline double qubit_entropy(const Eigen::Matrix2cd& m) {
    const double a = m(0, 0).real();
    const double d = m(1, 1).real();
    const double r = std::sqrt(0.25 * (a - d) * (a - d) + std::norm(m(0, 1)));
    const double mean = 0.5 * (a + d);
    Eigen::VectorXd w(2);
    w << std::clamp(mean + r, 0.0, 1.0), std::clamp(mean - r, 0.0, 1.0);
    return entropy_of_spectrum(w);
}

}  // namespace detail

/// S_S minus the smallest outcome-averaged entropy of S over projective
/// measurements of the fragment qubit along Bloch directions
/// theta_k = pi k / (grid - 1), k < grid, and phi_l = pi l / grid, l < 2 grid.
/// Restricting to a grid can only raise the minimum, so the result never
/// exceeds the true value.
inline double holevo_grid_oracle(const PureState& psi, const FragmentSpec& frag, int grid) {
    if (frag.size() != 1) throw std::invalid_argument("grid oracle requires a single-site fragment");
    if (grid < 16) throw std::invalid_argument("grid resolution must be >= 16");
    frag.check(psi.n_qubits() - 1);
    const DensityMatrix rho = reduced_density(psi, {0, frag.sites()[0]});
    const Eigen::MatrixXcd& r = rho.matrix();  // index = s + 2 f
    const double s_s = subsystem_entropy(psi, {0});

    double best = 2.0;
    for (int k = 0; k < grid; ++k) {
        const double theta = std::numbers::pi * k / (grid - 1);
        for (int l = 0; l < 2 * grid; ++l) {
            const double phi = std::numbers::pi * l / grid;
            const cplx e = std::polar(1.0, phi);
            const std::array<std::array<cplx, 2>, 2> outcomes{{
                {cplx(std::cos(theta / 2)), e * std::sin(theta / 2)},
                {-std::conj(e) * std::sin(theta / 2), cplx(std::cos(theta / 2))},
            }};
            double avg = 0.0;
            for (const auto& m : outcomes) {
                Eigen::Matrix2cd cond = Eigen::Matrix2cd::Zero();
                for (int s = 0; s < 2; ++s) {
                    for (int s2 = 0; s2 < 2; ++s2) {
                        cplx v = 0.0;
                        for (int f = 0; f < 2; ++f) {
                            for (int f2 = 0; f2 < 2; ++f2) v += std::conj(m[f]) * r(s + 2 * f, s2 + 2 * f2) * m[f2];
                        }
                        cond(s, s2) = v;
                    }
                }
                const double p = cond.trace().real();
                if (p > 1e-15) avg += p * detail::qubit_entropy(cond / p);
            }
            best = std::min(best, avg);
        }
    }
    return s_s - best;
}

}  // namespace qdarwin
