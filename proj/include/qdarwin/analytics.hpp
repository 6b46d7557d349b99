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

// Closed-form and asymptotic predictions for branching dynamics under
// random couplings. Entropy-valued results are in bits.

#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <variant>

#include "qdarwin/model.hpp"

namespace qdarwin {

/// f(k) = E[exp(i k B)].
inline cplx characteristic_function(const CouplingDistribution& dist, double k) {
    if (const auto* c = std::get_if<ContinuousUniform>(&dist.variant())) {
        const double x = c->half_width * k;
        if (std::abs(x) < 1e-4) return 1.0 - x * x / 6.0;
        return std::sin(x) / x;
    }
    if (const auto* d = std::get_if<DiscreteUniform>(&dist.variant())) {
        cplx s = 0.0;
        for (double b : d->support) s += std::polar(1.0, k * b);
        return s / static_cast<double>(d->support.size());
    }
    return std::polar(1.0, k * std::get<PointMass>(dist.variant()).value);
}

namespace detail {
inline void check_probability(double x, const char* what) {
    if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error(std::string(what) + " must lie in [0, 1]");
}
}  // namespace detail

/// <|Gamma_i(t)|^2> over the coupling law:
/// a^4 + b^4 + 2 a^2 b^2 Re f(4t), a^2 = alpha_sq, b^2 = 1 - alpha_sq.
inline double avg_gamma_squared(const CouplingDistribution& dist, double alpha_sq, double t) {
    detail::check_probability(alpha_sq, "alpha_sq");
    const double a = alpha_sq;
    const double b = 1.0 - alpha_sq;
    return a * a + b * b + 2.0 * a * b * characteristic_function(dist, 4.0 * t).real();
}

/// Long-time limit of <|Gamma_i|^2> for continuous laws: |alpha|^4 + |beta|^4.
inline double epsilon_site(double alpha_sq) {
    detail::check_probability(alpha_sq, "alpha_sq");
    return alpha_sq * alpha_sq + (1.0 - alpha_sq) * (1.0 - alpha_sq);
}

/// Average of epsilon_site over alpha_sq uniform on [0, 1].
inline constexpr double kMeanEpsilon = 2.0 / 3.0;

/// xi(x) = 4 x (1 - x) artanh(1 - 2x) / (1 - 2x), divided by ln 2 so that
/// S ~ S_max - (xi/2) |Gamma|^2 holds for base-2 entropies.
inline double xi(double alpha0_sq) {
    if (!(alpha0_sq > 0.0 && alpha0_sq < 1.0)) throw std::domain_error("xi requires alpha0_sq in (0, 1)");
    const double x = alpha0_sq;
    const double u = 1.0 - 2.0 * x;
    double ratio;  // artanh(u) / u
    if (std::abs(x - 0.5) < 1e-4) {
        const double u2 = u * u;
        ratio = 1.0 + u2 / 3.0 + u2 * u2 / 5.0;
    } else {
        ratio = std::atanh(u) / u;
    }
    return 4.0 * x * (1.0 - x) * ratio / std::numbers::ln2;
}

/// Binary entropy of the pointer populations, the plateau height.
inline double s_max(double alpha0_sq) {
    detail::check_probability(alpha0_sq, "alpha0_sq");
    const double x = alpha0_sq;
    double s = 0.0;
    if (x > 0.0) s -= x * std::log2(x);
    if (x < 1.0) s -= (1.0 - x) * std::log2(1.0 - x);
    return s;
}

/// Small-decoherence expansion of I(S:F) in |Gamma|^2, |Gamma_F|^2 and
/// |Gamma_Fbar|^2. Only meaningful when all three are small, so F and its
/// complement must both be nonempty.
inline double weak_decoherence_I(double gamma_sq, double gammaF_sq, double gammaFbar_sq, double alpha0_sq) {
    detail::check_probability(gamma_sq, "gamma_sq");
    detail::check_probability(gammaF_sq, "gammaF_sq");
    detail::check_probability(gammaFbar_sq, "gammaFbar_sq");
    return s_max(alpha0_sq) - 0.5 * xi(alpha0_sq) * (gamma_sq + gammaF_sq - gammaFbar_sq);
}

inline double weak_decoherence_chi(double gammaF_sq, double alpha0_sq) {
    detail::check_probability(gammaF_sq, "gammaF_sq");
    return s_max(alpha0_sq) - 0.5 * xi(alpha0_sq) * gammaF_sq;
}

/// Long-time I(S:F) for |F| = n with the site records replaced by their mean
/// eps_bar: S_max - (xi/2) [eps^N + eps^n - eps^(N-n)].
inline double asymptotic_I(int n, int n_env, double alpha0_sq, double eps_bar = kMeanEpsilon) {
    if (n_env < 1 || n < 0 || n > n_env) throw std::domain_error("fragment size must lie in [0, n_env]");
    if (!(eps_bar > 0.0 && eps_bar < 1.0)) throw std::domain_error("eps_bar must lie in (0, 1)");
    return s_max(alpha0_sq) -
           0.5 * xi(alpha0_sq) * (std::pow(eps_bar, n_env) + std::pow(eps_bar, n) - std::pow(eps_bar, n_env - n));
}

/// Long-time chi(S:F) for |F| = n: S_max - (xi/2) eps^n.
inline double asymptotic_chi(int n, double alpha0_sq, double eps_bar = kMeanEpsilon) {
    if (n < 0) throw std::domain_error("fragment size must be non-negative");
    if (!(eps_bar > 0.0 && eps_bar < 1.0)) throw std::domain_error("eps_bar must lie in (0, 1)");
    return s_max(alpha0_sq) - 0.5 * xi(alpha0_sq) * std::pow(eps_bar, n);
}

}  // namespace qdarwin
