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

#include "qdarwin/information.hpp"

#include <cmath>
#include <vector>

#include "gtest/gtest.h"
#include "oracles.hpp"

using namespace qdarwin;

namespace {

PureState random_state(int n_qubits, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<cplx> a(std::size_t{1} << n_qubits);
    double norm = 0.0;
    for (auto& x : a) {
        x = cplx(rng.uniform(-1, 1), rng.uniform(-1, 1));
        norm += std::norm(x);
    }
    for (auto& x : a) x /= std::sqrt(norm);
    return PureState(n_qubits, std::move(a));
}

BranchingState random_branching(int n_env, std::uint64_t seed, double t) {
    const ProductCoeffs init = random_product_state(n_env + 1, seed);
    Rng rng(mix_seed(seed, 7));
    std::vector<double> b(static_cast<std::size_t>(n_env));
    for (auto& x : b) x = rng.uniform(-1, 1);
    return evolve_branching(init, b, t);
}

}  // namespace

TEST(DensityMatrix, validates_input) {
    EXPECT_THROW(DensityMatrix(Eigen::MatrixXcd::Zero(2, 3)), std::invalid_argument);
    EXPECT_THROW(DensityMatrix(Eigen::MatrixXcd::Identity(2, 2)), std::invalid_argument);
    Eigen::MatrixXcd m(2, 2);
    m << 0.5, cplx(0.1, 0.1), cplx(0.1, 0.1), 0.5;
    EXPECT_THROW(DensityMatrix{m}, std::invalid_argument);
    Eigen::MatrixXcd neg(2, 2);
    neg << 1.5, 0, 0, -0.5;
    EXPECT_THROW(DensityMatrix(neg).spectrum(), std::domain_error);
}

TEST(FragmentSpec, validation_and_complement) {
    EXPECT_THROW(FragmentSpec({0}), std::out_of_range);
    EXPECT_THROW(FragmentSpec({2, 2}), std::invalid_argument);
    const FragmentSpec f({4, 2});
    EXPECT_THROW(f.check(3), std::out_of_range);
    EXPECT_EQ(f.complement(5).sites(), (std::vector<int>{1, 3, 5}));
    EXPECT_EQ(FragmentSpec::prefix(3).sites(), (std::vector<int>{1, 2, 3}));
    EXPECT_TRUE(FragmentSpec::prefix(0).empty());
}

TEST(ReducedDensity, matches_brute_force_partial_trace) {
    const PureState psi = random_state(5, 1);
    for (const std::vector<int>& keep : {std::vector<int>{0}, {3}, {0, 2}, {4, 1}, {2, 0, 3}, {0, 1, 2, 3, 4}}) {
        const DensityMatrix rho = reduced_density(psi, keep);
        const oracle::Mat ref = oracle::partial_trace(psi.amplitudes(), 5, keep);
        EXPECT_LT((rho.matrix() - ref).cwiseAbs().maxCoeff(), 1e-14);
        EXPECT_NEAR(von_neumann_entropy(rho), oracle::entropy_bits(ref), 1e-12);
    }
    EXPECT_THROW(reduced_density(psi, {5}), std::out_of_range);
    EXPECT_THROW(reduced_density(psi, {1, 1}), std::invalid_argument);
}

TEST(Entropy, reference_states) {
    const double r = 1.0 / std::sqrt(2.0);
    const PureState bell(2, {r, 0.0, 0.0, r});
    EXPECT_NEAR(subsystem_entropy(bell, {0}), 1.0, 1e-14);
    EXPECT_NEAR(subsystem_entropy(bell, {1}), 1.0, 1e-14);
    EXPECT_NEAR(subsystem_entropy(random_product_state(4, 2).to_dense(), {0, 2}), 0.0, 1e-7);
    const PureState ghz(3, {r, 0, 0, 0, 0, 0, 0, r});
    EXPECT_NEAR(subsystem_entropy(ghz, {0, 1}), 1.0, 1e-14);
    EXPECT_EQ(subsystem_entropy(ghz, {}), 0.0);
    EXPECT_EQ(subsystem_entropy(ghz, {0, 1, 2}), 0.0);
}

TEST(Entropy, pure_state_complementarity) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const PureState psi = random_state(6, seed);
        const std::vector<int> a{0, 3};
        const std::vector<int> b{1, 2, 4, 5};
        EXPECT_NEAR(subsystem_entropy(psi, a), subsystem_entropy(psi, b), 1e-10);
        EXPECT_NEAR(subsystem_entropy(psi, a), von_neumann_entropy(reduced_density(psi, a)), 1e-10);
        EXPECT_LE(subsystem_entropy(psi, a), 2.0 + 1e-12);
    }
}

TEST(BinaryEntropy, frozen_values) {
    EXPECT_NEAR(binary_entropy(0.9), 0.468995593589281221, 1e-15);
    EXPECT_NEAR(binary_entropy(0.1), 0.468995593589281221, 1e-15);
    EXPECT_EQ(binary_entropy(0.0), 0.0);
    EXPECT_EQ(binary_entropy(1.0), 0.0);
    EXPECT_NEAR(binary_entropy(0.5), 1.0, 1e-15);
}

TEST(MutualInformation, bounds_on_random_states) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const PureState psi = random_state(6, 100 + seed);
        const double s_s = subsystem_entropy(psi, {0});
        EXPECT_EQ(mutual_information(psi, FragmentSpec::prefix(0)), 0.0);
        for (int n = 1; n <= 5; ++n) {
            const double i = mutual_information(psi, FragmentSpec::prefix(n));
            EXPECT_GE(i, -1e-10);
            EXPECT_LE(i, 2.0 * s_s + 1e-10);
        }
        EXPECT_NEAR(mutual_information(psi, FragmentSpec::prefix(5)), 2.0 * s_s, 1e-10);
    }
}

TEST(MutualInformation, monotone_in_fragment) {
    const PureState psi = random_state(6, 3);
    double last = 0.0;
    for (int n = 1; n <= 5; ++n) {
        const double i = mutual_information(psi, FragmentSpec::prefix(n));
        EXPECT_GE(i, last - 1e-10);
        last = i;
    }
}

TEST(MutualInformation, rejects_bad_input) {
    EXPECT_THROW(mutual_information(PureState(2, {1.0, 1.0, 0.0, 0.0}), FragmentSpec::prefix(1)), std::invalid_argument);
    EXPECT_THROW(mutual_information(random_state(3, 1), FragmentSpec({3})), std::out_of_range);
}

TEST(Branching, closed_form_entropies_match_dense) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const BranchingState bs = random_branching(6, seed, 0.2 + 0.4 * static_cast<double>(seed));
        const PureState psi = branching_to_dense(bs);
        const double g = std::norm(fragment_decoherence_factor(bs, FragmentSpec::prefix(6)));
        EXPECT_NEAR(branch_entropy(bs.alpha0_sq(), g), subsystem_entropy(psi, {0}), 1e-10);
        for (const FragmentSpec& f : {FragmentSpec({1}), FragmentSpec({2, 5}), FragmentSpec::prefix(4), FragmentSpec::prefix(6)}) {
            EXPECT_NEAR(mutual_information_branching(bs, f), mutual_information(psi, f), 1e-9) << seed;
        }
    }
}

TEST(Holevo, bounded_by_mutual_information_and_system_entropy) {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const BranchingState bs = random_branching(6, seed, 0.1 * static_cast<double>(seed));
        const PureState psi = branching_to_dense(bs);
        const double s_s = subsystem_entropy(psi, {0});
        for (int n = 0; n <= 6; ++n) {
            const FragmentSpec f = FragmentSpec::prefix(n);
            const double chi = holevo_branching(bs, f);
            const double i = mutual_information(psi, f);
            EXPECT_GE(chi, -1e-12);
            EXPECT_LE(chi, s_s + 1e-10);
            EXPECT_LE(chi, i + 1e-10);
            EXPECT_GE(quantum_discord(psi, bs, f), -1e-10);
        }
        EXPECT_NEAR(holevo_branching(bs, FragmentSpec::prefix(6)), s_s, 1e-10);
        EXPECT_EQ(holevo_branching(bs, FragmentSpec::prefix(0)), 0.0);
    }
}

TEST(Holevo, closed_form_agrees_with_measurement_grid) {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        const BranchingState bs = random_branching(3, 40 + seed, 0.3 + 0.5 * static_cast<double>(seed));
        const PureState psi = branching_to_dense(bs);
        for (int site = 1; site <= 3; ++site) {
            const FragmentSpec f({site});
            const double grid = holevo_grid_oracle(psi, f, 64);
            const double closed = holevo_branching(bs, f);
            EXPECT_LE(grid, closed + 1e-9);
            EXPECT_NEAR(grid, closed, 2e-3) << "seed " << seed << " site " << site;
        }
    }
}

TEST(Holevo, grid_oracle_on_bell_pair) {
    const double r = 1.0 / std::sqrt(2.0);
    const PureState bell(2, {r, 0.0, 0.0, r});
    EXPECT_NEAR(holevo_grid_oracle(bell, FragmentSpec({1}), 16), 1.0, 1e-12);
    EXPECT_THROW(holevo_grid_oracle(bell, FragmentSpec({1}), 8), std::invalid_argument);
    EXPECT_THROW(holevo_grid_oracle(random_state(3, 0), FragmentSpec({1, 2}), 32), std::invalid_argument);
}
