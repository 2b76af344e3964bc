// Copyright 2026 The rydbound Authors
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

#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/minima.hpp>

#include "rydbound/core/schmidt.hpp"
#include "rydbound/errors.hpp"

namespace rydbound {

namespace detail {
/// 2^s - 1 without cancellation near s = 0.
inline double pow2m1(double s) { return std::expm1(s * std::numbers::ln2); }
}  // namespace detail

/// Minimal Rydberg population per unit min-entropy rate at entropy level s, in units of 1/B.
inline double g_of_s(double s) {
    if (!(s > 0.0 && s <= 1.0)) {
        throw DomainError("G(s) requires 0 < s <= 1, got s = " + std::to_string(s));
    }
    const double q = detail::pow2m1(s);
    const double root = std::sqrt(q);
    return std::numbers::ln2 * (1.0 + root) * (1.0 + root) / ((1.0 + q) * root);
}

/// Min-entropy rate of the state attaining G(s), in units of B.
inline double sdot_optimal(double s) {
    if (!(s >= 0.0 && s <= 1.0)) {
        throw DomainError("optimal entropy rate requires 0 <= s <= 1, got s = " +
                          std::to_string(s));
    }
    const double q = detail::pow2m1(s);
    const double root = std::sqrt(q);
    return (2.0 / std::numbers::ln2) * q / ((1.0 + root) * (1.0 + root));
}

inline constexpr double kEtaMinClosedForm = 1.0 + std::numbers::pi / 2.0;

struct EtaMin {
    double closed_form = kEtaMinClosedForm;
    double quadrature = 0.0;
    double error_estimate = 0.0;
};

/// Integral of G over [lo, hi] subset of (0, 1]. The substitution s = u^2 removes the
/// 1/sqrt(s) singularity at the origin, so lo = 0 is allowed.
inline double integrate_g(double lo, double hi, double* error = nullptr) {
    if (!(lo >= 0.0 && lo < hi && hi <= 1.0)) {
        throw DomainError("integrate_g requires 0 <= lo < hi <= 1");
    }
    auto integrand = [](double u) { return 2.0 * u * g_of_s(u * u); };
    double err = 0.0;
    const double value = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        integrand, std::sqrt(lo), std::sqrt(hi), 15, 1e-14, &err);
    if (error != nullptr) *error = err;
    return value;
}

/// Lower bound on B T_r for reaching one unit of min-entropy, closed form and quadrature.
inline EtaMin eta_min() {
    EtaMin out;
    out.quadrature = integrate_g(0.0, 1.0, &out.error_estimate);
    return out;
}

/// Duration of the optimal evolution from entropy s0 to 1, in units of 1/B.
/// Diverges logarithmically as s0 -> 0.
inline double optimal_duration(double s0) {
    if (s0 <= 0.0) {
        throw DomainError("optimal duration diverges for s0 <= 0");
    }
    if (!(s0 < 1.0)) {
        throw DomainError("optimal duration requires s0 < 1, got " + std::to_string(s0));
    }
    // s = e^v keeps the integrand s / Sdot(s) bounded (it tends to 1/2 as s -> 0).
    auto integrand = [](double v) {
        const double s = std::exp(v);
        return s / sdot_optimal(s);
    };
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        integrand, std::log(s0), 0.0, 15, 1e-13);
}

/// sin(theta) cos(theta) |log2 tan(theta)|, the per-pair factor of the von Neumann rate bound.
inline double weak_bound_f(double theta) {
    if (!(theta > 0.0 && theta < std::numbers::pi / 2.0)) {
        throw DomainError("weak_bound_f requires 0 < theta < pi/2");
    }
    return std::sin(theta) * std::cos(theta) * std::abs(std::log2(std::tan(theta)));
}

struct WeakBoundMaximum {
    double theta = 0.0;
    double value = 0.0;
};

/// f is symmetric about pi/4 and vanishes there, so the maximum is searched on (0, pi/4).
inline WeakBoundMaximum weak_bound_max() {
    auto negated = [](double theta) { return -weak_bound_f(theta); };
    const auto [theta, value] = boost::math::tools::brent_find_minima(
        negated, 1e-6, std::numbers::pi / 4.0 - 1e-6, std::numeric_limits<double>::digits);
    return {theta, -value};
}

struct WeakBoundConstants {
    /// |dS_vN/dt| <= rate_constant * P_r * B
    double rate_constant = 0.0;
    /// E >= eta_weak * Gamma / B
    double eta_weak = 0.0;
};

inline WeakBoundConstants weak_bound_constants() {
    static const WeakBoundConstants constants = [] {
        const double rate = 2.0 * weak_bound_max().value;
        return WeakBoundConstants{rate, 1.0 / rate};
    }();
    return constants;
}

struct VnRateCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    bool satisfied = false;
};

/// Compares |dS_vN/dt| under the interaction with rate_constant * P_r.
inline VnRateCheck vn_rate_bound_check(const BipartiteState& state) {
    const SchmidtForm s = schmidt_decompose(state);
    VnRateCheck out;
    out.lhs = std::abs(von_neumann_entropy_rate(s, state.rydberg_index));
    out.rhs = weak_bound_constants().rate_constant * rydberg_population(state);
    out.satisfied = out.lhs <= out.rhs + 1e-12;
    return out;
}

}  // namespace rydbound
