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

#include "qdarwin/analytics.hpp"

#include <cmath>
#include <numbers>

#include "gtest/gtest.h"
#include "qdarwin/information.hpp"

using namespace qdarwin;

namespace {

// Composite Simpson rule for E_B[|Gamma|^2] with B uniform on [-a, a].
double quadrature_avg_gamma_sq(double a, double alpha_sq, double t) {
    const int m = 20000;
    const double h = 2.0 * a / m;
    const double b2 = 1.0 - alpha_sq;
    auto g = [&](double b) {
        const cplx ph = std::polar(1.0, -2.0 * b * t);
        return std::norm(alpha_sq * ph + b2 * std::conj(ph));
    };
    double s = g(-a) + g(a);
    for (int k = 1; k < m; ++k) s += (k % 2 ? 4.0 : 2.0) * g(-a + k * h);
    return s * h / 3.0 / (2.0 * a);
}

}  // namespace

TEST(CharacteristicFunction, reference_values) {
    const auto u = CouplingDistribution::uniform(1.0);
    EXPECT_NEAR(characteristic_function(u, 0.0).real(), 1.0, 1e-15);
    EXPECT_NEAR(characteristic_function(u, std::numbers::pi).real(), 0.0, 1e-15);
    EXPECT_NEAR(characteristic_function(u, 2.0).real(), std::sin(2.0) / 2.0, 1e-15);
    EXPECT_NEAR(characteristic_function(u, 5e-5).real(), std::sin(5e-5) / 5e-5, 1e-15);
    const auto d = CouplingDistribution::discrete({-1.0, -0.5, 0.5, 1.0});
    const cplx fd = characteristic_function(d, 1.3);
    EXPECT_NEAR(fd.real(), 0.531791313586821618, 1e-15);
    EXPECT_NEAR(fd.imag(), 0.0, 1e-15);
    const cplx fp = characteristic_function(CouplingDistribution::point(0.5), 2.0);
    EXPECT_NEAR(std::abs(fp - std::polar(1.0, 1.0)), 0.0, 1e-15);
}

TEST(AvgGammaSquared, frozen_value_and_quadrature) {
    const auto u = CouplingDistribution::uniform(1.0);
    EXPECT_NEAR(avg_gamma_squared(u, 0.5, 0.7), 0.559819312527840164, 1e-14);
    for (double a2 : {0.1, 0.5, 0.83}) {
        for (double t : {0.05, 0.7, 3.0}) {
            EXPECT_NEAR(avg_gamma_squared(u, a2, t), quadrature_avg_gamma_sq(1.0, a2, t), 1e-10) << a2 << " " << t;
        }
    }
    EXPECT_NEAR(avg_gamma_squared(u, 0.3, 0.0), 1.0, 1e-15);
    EXPECT_THROW(avg_gamma_squared(u, 1.2, 1.0), std::domain_error);
}

TEST(AvgGammaSquared, monte_carlo_over_couplings) {
    const auto u = CouplingDistribution::uniform(0.7);
    Rng rng(17);
    const double a2 = 0.35, t = 1.1;
    double s = 0.0;
    const int n = 200000;
    for (int k = 0; k < n; ++k) {
        const double b = u.sample(rng);
        const cplx ph = std::polar(1.0, -2.0 * b * t);
        s += std::norm(a2 * ph + (1.0 - a2) * std::conj(ph));
    }
    EXPECT_NEAR(s / n, avg_gamma_squared(u, a2, t), 3e-3);
}

TEST(AvgGammaSquared, continuous_law_decays_to_epsilon) {
    const auto u = CouplingDistribution::uniform(1.0);
    EXPECT_NEAR(avg_gamma_squared(u, 0.2, 1e4), epsilon_site(0.2), 1e-4);
    EXPECT_NEAR(epsilon_site(0.5), 0.5, 1e-15);
    EXPECT_NEAR(epsilon_site(0.0), 1.0, 1e-15);
}

TEST(AvgGammaSquared, discrete_law_revives) {
    // Support {+-1/2, +-1}: Re f(4t) returns to 1 at t = pi.
    const auto d = CouplingDistribution::discrete({-1.0, -0.5, 0.5, 1.0});
    EXPECT_NEAR(avg_gamma_squared(d, 0.4, std::numbers::pi), 1.0, 1e-12);
}

TEST(MeanEpsilon, average_over_uniform_populations) {
    const int m = 100000;
    double s = 0.0;
    for (int k = 0; k < m; ++k) s += epsilon_site((k + 0.5) / m);
    EXPECT_NEAR(s / m, kMeanEpsilon, 1e-9);
}

TEST(Xi, frozen_values) {
    EXPECT_NEAR(xi(0.25), 1.188721875540867136, 1e-14);
    EXPECT_NEAR(xi(0.5), 1.442695040888963407, 1e-14);
    EXPECT_NEAR(xi(0.3), 1.283512042403270322, 1e-14);
    EXPECT_NEAR(xi(0.7), 1.283512042403270322, 1e-14);
    EXPECT_NEAR(xi(0.5 + 5e-5), 1.442695031270996449, 1e-14);
    EXPECT_THROW(xi(0.0), std::domain_error);
    EXPECT_THROW(xi(1.0), std::domain_error);
}

TEST(Xi, series_branch_matches_direct_formula) {
    for (double d : {-0.99e-4, -3e-5, 2e-5, 0.99e-4}) {
        const double x = 0.5 + d;
        const double u = 1.0 - 2.0 * x;
        const double direct = 4.0 * x * (1.0 - x) * std::atanh(u) / u / std::numbers::ln2;
        EXPECT_NEAR(xi(x), direct, 1e-11) << d;
    }
}

TEST(SMax, values) {
    EXPECT_NEAR(s_max(0.25), 0.811278124459132864, 1e-15);
    EXPECT_EQ(s_max(0.0), 0.0);
    EXPECT_NEAR(s_max(0.5), 1.0, 1e-15);
    EXPECT_THROW(s_max(-0.1), std::domain_error);
}

TEST(WeakDecoherence, matches_branch_entropy_to_first_order) {
    // S = h[(1 + sqrt(1 - 4ab(1 - g))) / 2] ~ S_max - (xi/2) g for small g.
    for (double a : {0.2, 0.5, 0.65}) {
        for (double g : {1e-3, 1e-4}) {
            const double exact = branch_entropy(a, g);
            const double approx = s_max(a) - 0.5 * xi(a) * g;
            EXPECT_LT(std::abs(exact - approx), 2.0 * g * g + 1e-12) << a << " " << g;
        }
    }
}

TEST(WeakDecoherence, expansions) {
    const double a = 0.3;
    EXPECT_NEAR(weak_decoherence_I(0.0, 0.0, 0.0, a), s_max(a), 1e-15);
    EXPECT_NEAR(weak_decoherence_chi(0.0, a), s_max(a), 1e-15);
    EXPECT_NEAR(weak_decoherence_I(0.01, 0.02, 0.03, a), s_max(a), 1e-15);
    EXPECT_NEAR(weak_decoherence_chi(0.02, a), s_max(a) - 0.01 * xi(a), 1e-15);
    EXPECT_THROW(weak_decoherence_I(1.5, 0.0, 0.0, a), std::domain_error);
}

TEST(Asymptotic, frozen_values) {
    EXPECT_NEAR(asymptotic_I(4, 8, 0.5), 0.971854143387625771, 1e-14);
    EXPECT_NEAR(asymptotic_chi(10, 0.5), 0.987490730394500343, 1e-14);
    EXPECT_NEAR(asymptotic_chi(0, 0.5), 0.278652479555518296, 1e-14);
    EXPECT_NEAR(asymptotic_I(25, 50, 0.5), 0.999999998868690092, 1e-14);
    EXPECT_NEAR(asymptotic_I(50, 50, 0.5), 1.721347518181861889, 1e-14);
    EXPECT_THROW(asymptotic_I(9, 8, 0.5), std::domain_error);
    EXPECT_THROW(asymptotic_chi(-1, 0.5), std::domain_error);
}

TEST(Asymptotic, symmetric_about_half_environment) {
    // I(n) + I(N - n) = 2 S_max - xi eps^N.
    const int n_env = 12;
    const double a = 0.4;
    for (int n = 0; n <= n_env; ++n) {
        const double lhs = asymptotic_I(n, n_env, a) + asymptotic_I(n_env - n, n_env, a);
        EXPECT_NEAR(lhs, 2.0 * s_max(a) - xi(a) * std::pow(kMeanEpsilon, n_env), 1e-13);
    }
}

TEST(Asymptotic, chi_increasing_and_saturating) {
    double last = -1.0;
    for (int n = 0; n <= 40; ++n) {
        const double c = asymptotic_chi(n, 0.5);
        EXPECT_GT(c, last);
        EXPECT_LT(c, 1.0);
        last = c;
    }
    EXPECT_NEAR(asymptotic_chi(40, 0.5), 1.0, 1e-6);
}
