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

#include "qdarwin/dynamics.hpp"

#include <cmath>
#include <complex>
#include <vector>

#include "gtest/gtest.h"
#include "oracles.hpp"

using namespace qdarwin;

namespace {

Eigen::VectorXcd as_vector(const PureState& psi) {
    return Eigen::Map<const Eigen::VectorXcd>(psi.amplitudes().data(), static_cast<Eigen::Index>(psi.dim()));
}

PureState from_vector(const Eigen::VectorXcd& v) {
    return PureState(static_cast<int>(std::log2(static_cast<double>(v.size()))),
                     std::vector<cplx>(v.data(), v.data() + v.size()));
}

ModelInstance random_full_instance(int n_env, std::uint64_t seed) {
    Rng rng(seed);
    ModelInstance inst(n_env);
    for (int i = 0; i <= n_env; ++i) {
        inst.set_field(i, {rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)});
        for (int j = i + 1; j <= n_env; ++j) {
            for (int a = 0; a < 3; ++a) {
                for (int b = 0; b < 3; ++b) inst.set_coupling(i, j, a, b, rng.uniform(-1, 1));
            }
        }
    }
    return inst;
}

}  // namespace

TEST(PureState, validates_shape) {
    EXPECT_THROW(PureState(0, {}), std::invalid_argument);
    EXPECT_THROW(PureState(2, std::vector<cplx>(3)), std::invalid_argument);
    const PureState b = PureState::basis(3, 5);
    EXPECT_EQ(b[5], cplx(1.0));
    EXPECT_TRUE(b.normalized());
    EXPECT_FALSE(PureState(1, {1.0, 1.0}).normalized());
}

TEST(PureState, amplitude_difference_ignores_global_phase) {
    const PureState a(1, {cplx(0.6, 0.0), cplx(0.0, 0.8)});
    const cplx ph = std::polar(1.0, 1.234);
    const PureState b(1, {ph * a[0], ph * a[1]});
    EXPECT_LT(max_amplitude_difference(a, b), 1e-15);
    const PureState c(1, {a[0], -a[1]});
    // Aligned on the 0.8i amplitude, so the mismatch moves to the real part.
    EXPECT_NEAR(max_amplitude_difference(a, c), 1.2, 1e-15);
}

TEST(ProductCoeffs, rejects_unnormalized_sites) {
    EXPECT_THROW(ProductCoeffs({}), std::invalid_argument);
    EXPECT_THROW(ProductCoeffs({{1.0, 1.0}}), std::invalid_argument);
}

TEST(ProductCoeffs, dense_form_matches_kronecker_product) {
    const ProductCoeffs p = random_product_state(4, 12);
    std::vector<oracle::Mat> kets;
    for (const auto& s : p.sites()) {
        oracle::Mat k(2, 1);
        k << s.alpha, s.beta;
        kets.push_back(k);
    }
    const oracle::Mat ref = oracle::tensor(kets);
    const PureState psi = p.to_dense();
    for (std::size_t b = 0; b < psi.dim(); ++b) EXPECT_LT(std::abs(psi[b] - ref(static_cast<Eigen::Index>(b), 0)), 1e-15);
}

TEST(RandomProductState, deterministic_normalized_and_uniform) {
    const ProductCoeffs a = random_product_state(5, 99);
    const ProductCoeffs b = random_product_state(5, 99);
    for (int i = 0; i < 5; ++i) {
        EXPECT_EQ(a.site(i).alpha, b.site(i).alpha);
        EXPECT_EQ(a.site(i).beta, b.site(i).beta);
    }
    EXPECT_TRUE(a.to_dense().normalized(1e-12));

    // |alpha|^2 uniform on [0, 1]: mean 1/2, variance 1/12.
    double s = 0.0, s2 = 0.0;
    const int n = 20000;
    for (int k = 0; k < n; ++k) {
        const double x = std::norm(random_product_state(1, static_cast<std::uint64_t>(k)).site(0).alpha);
        s += x;
        s2 += x * x;
    }
    EXPECT_NEAR(s / n, 0.5, 0.01);
    EXPECT_NEAR(s2 / n - (s / n) * (s / n), 1.0 / 12.0, 0.005);
}

TEST(Branching, time_zero_is_the_initial_product) {
    const ProductCoeffs init = random_product_state(5, 3);
    const std::vector<double> b{0.1, -0.4, 0.8, 0.3};
    const PureState psi = branching_to_dense(evolve_branching(init, b, 0.0));
    EXPECT_LT(max_amplitude_difference(init.to_dense(), psi), 1e-15);
}

TEST(Branching, size_mismatch_throws) {
    const ProductCoeffs init = random_product_state(3, 3);
    const std::vector<double> b{0.1};
    EXPECT_THROW(evolve_branching(init, b, 1.0), std::invalid_argument);
}

TEST(Branching, matches_matrix_exponential) {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        const ModelInstance inst = sample_instance(build_model(ModelKind::CPDI, 4), seed);
        const auto b = inst.branching_couplings();
        ASSERT_TRUE(b.has_value());
        const ProductCoeffs init = random_product_state(5, 1000 + seed);
        for (double t : {0.3, 1.7, 6.0}) {
            const PureState analytic = branching_to_dense(evolve_branching(init, *b, t));
            const PureState ref = from_vector(oracle::propagate(inst, as_vector(init.to_dense()), t));
            EXPECT_LT(max_amplitude_difference(ref, analytic), 1e-10) << "seed " << seed << " t " << t;
            // No global phase freedom either: the closed form is exact.
            EXPECT_LT((as_vector(ref) - as_vector(analytic)).cwiseAbs().maxCoeff(), 1e-10);
        }
    }
}

TEST(Branching, decoherence_factor_is_branch_overlap) {
    const ProductCoeffs init = random_product_state(4, 8);
    const std::vector<double> b{0.25, -0.7, 0.9};
    const BranchingState bs = evolve_branching(init, b, 1.3);
    for (int i = 1; i <= 3; ++i) {
        const auto o = bs.zero_branch(i);
        const auto l = bs.one_branch(i);
        const cplx overlap = std::conj(l.alpha) * o.alpha + std::conj(l.beta) * o.beta;
        EXPECT_LT(std::abs(overlap - bs.decoherence_factor(i)), 1e-15);
        EXPECT_LE(std::abs(bs.decoherence_factor(i)), 1.0 + 1e-15);
    }
    EXPECT_THROW(bs.site(0), std::out_of_range);
    EXPECT_THROW(bs.site(4), std::out_of_range);
}

TEST(Branching, decoherence_factor_is_periodic) {
    const ProductCoeffs init = random_product_state(2, 4);
    const std::vector<double> b{0.6};
    const double period = std::numbers::pi / 0.6;
    const cplx g0 = evolve_branching(init, b, 0.4).decoherence_factor(1);
    const cplx g1 = evolve_branching(init, b, 0.4 + period).decoherence_factor(1);
    EXPECT_LT(std::abs(g0 - g1), 1e-12);
    EXPECT_LT(std::abs(evolve_branching(init, b, 0.0).decoherence_factor(1) - 1.0), 1e-15);
}

TEST(DenseEvolver, matches_matrix_exponential_for_generic_models) {
    std::vector<ModelInstance> cases;
    cases.push_back(sample_instance(build_model(ModelKind::CODI, 4), 1));
    cases.push_back(sample_instance(build_model(ModelKind::CPDI_S, 4), 2));
    cases.push_back(sample_instance(build_model(ModelKind::DPDI, 4), 3));
    cases.push_back(random_full_instance(3, 4));
    for (std::size_t c = 0; c < cases.size(); ++c) {
        const PureState psi0 = random_product_state(cases[c].n_qubits(), 50 + c).to_dense();
        const DenseEvolver ev(cases[c]);
        for (double t : {0.0, 0.45, 3.2}) {
            const PureState got = ev.evolve(psi0, t);
            const Eigen::VectorXcd ref = oracle::propagate(cases[c], as_vector(psi0), t);
            EXPECT_LT((as_vector(got) - ref).cwiseAbs().maxCoeff(), 1e-10) << "case " << c << " t " << t;
            EXPECT_TRUE(got.normalized(1e-12));
        }
    }
}

TEST(DenseEvolver, evolve_many_agrees_with_evolve) {
    const ModelInstance inst = random_full_instance(2, 7);
    const PureState psi0 = random_product_state(3, 7).to_dense();
    const DenseEvolver ev(inst);
    const std::vector<double> ts{0.0, 0.1, 2.5};
    const auto many = ev.evolve_many(psi0, ts);
    ASSERT_EQ(many.size(), 3U);
    for (std::size_t k = 0; k < ts.size(); ++k) EXPECT_EQ(many[k].amplitudes(), ev.evolve(psi0, ts[k]).amplitudes());
}

TEST(DenseEvolver, time_reversal_recovers_initial_state) {
    const ModelInstance inst = random_full_instance(3, 21);
    const PureState psi0 = random_product_state(4, 21).to_dense();
    const DenseEvolver ev(inst);
    const PureState back = ev.evolve(ev.evolve(psi0, 2.7), -2.7);
    EXPECT_LT((as_vector(back) - as_vector(psi0)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(DenseEvolver, rejects_bad_input) {
    const ModelInstance inst = random_full_instance(1, 1);
    const DenseEvolver ev(inst);
    EXPECT_THROW(ev.evolve(PureState(2, {1.0, 1.0, 0.0, 0.0}), 1.0), std::invalid_argument);
    EXPECT_THROW(ev.evolve(PureState::basis(3), 1.0), std::invalid_argument);
}

TEST(DiagonalEvolver, matches_dense_for_z_only_models) {
    ModelInstance inst = sample_instance(build_model(ModelKind::CPDI_S, 5), 13);
    Rng rng(5);
    for (int i = 0; i <= 5; ++i) inst.set_field(i, {0.0, 0.0, rng.uniform(-1, 1)});
    ASSERT_TRUE(inst.is_z_only());
    const PureState psi0 = random_product_state(6, 13).to_dense();
    const DiagonalEvolver diag(inst);
    const DenseEvolver dense(inst);
    for (double t : {0.0, 0.8, 4.1}) {
        const PureState a = diag.evolve(psi0, t);
        const PureState b = dense.evolve(psi0, t);
        EXPECT_LT((as_vector(a) - as_vector(b)).cwiseAbs().maxCoeff(), 1e-10) << t;
    }
}

TEST(DiagonalEvolver, energies_are_the_hamiltonian_diagonal) {
    const ModelInstance inst = sample_instance(build_model(ModelKind::CPDI_S, 4), 31);
    const DiagonalEvolver diag(inst);
    const Eigen::MatrixXcd h = oracle::hamiltonian(inst);
    for (std::size_t b = 0; b < diag.energies().size(); ++b) {
        EXPECT_NEAR(diag.energies()[b], h(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(b)).real(), 1e-13);
    }
}

TEST(DiagonalEvolver, rejects_non_diagonal_models) {
    EXPECT_THROW(DiagonalEvolver(sample_instance(build_model(ModelKind::CODI, 3), 1)), std::invalid_argument);
}
