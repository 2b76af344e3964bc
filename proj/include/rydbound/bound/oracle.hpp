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
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rydbound/bound/closed_form.hpp"
#include "rydbound/bound/nelder_mead.hpp"
#include "rydbound/core/schmidt.hpp"
#include "rydbound/errors.hpp"

namespace rydbound {

/// Minimizing state of the numerical search, in the variables used by the analytic argument.
struct OracleArgmin {
    Eigen::VectorXd coeffs;
    /// w_i = (|<r|u_i>|^2 + |<r|v_i>|^2) / 2
    Eigen::VectorXd weights;
    Eigen::VectorXd overlap_a;  ///< |<r|u_i>|
    Eigen::VectorXd overlap_b;  ///< |<r|v_i>|
    /// arg <rr|u_i v_i> - arg <rr|u_1 v_1>, zero entry for i = 1.
    Eigen::VectorXd relative_phase;
    double x = 0.0;  ///< c_1^2
    double y = 0.0;  ///< w_1
    double z = 0.0;  ///< sum_{i>1} a_i b_i with a_i = c_i / sqrt(1-x), b_i = w_i / (1-y)
};

struct OracleResult {
    double s = 0.0;
    double ratio_min = 0.0;
    OracleArgmin argmin;
    int restarts_used = 0;
    int best_restart = -1;
};

namespace detail {

/// Local basis with the Rydberg level at index 0. Only the Rydberg row of the local unitary
/// enters P_r and dS/dt, so a chain of d-1 Givens rotations (angle and phase each) reaching
/// every unit Rydberg row is a surjective parameterization for this purpose.
inline Eigen::MatrixXcd givens_chain(int d, const double* params) {
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(d, d);
    for (int k = 0; k + 1 < d; ++k) {
        const double theta = params[2 * k];
        const cd phase = std::polar(1.0, params[2 * k + 1]);
        Eigen::MatrixXcd g = Eigen::MatrixXcd::Identity(d, d);
        g(k, k) = std::cos(theta);
        g(k, k + 1) = -std::sin(theta) * std::conj(phase);
        g(k + 1, k) = std::sin(theta) * phase;
        g(k + 1, k + 1) = std::cos(theta);
        u = u * g;
    }
    return u;
}

struct RatioProblem {
    int d;
    double c1;
    double tail;  // sqrt(1 - c1^2)

    int parameter_count() const { return (d - 2) + 4 * (d - 1); }

    SchmidtForm state(const Eigen::VectorXd& p) const {
        Eigen::VectorXd c(d);
        c(0) = c1;
        if (d == 2) {
            c(1) = tail;
        } else {
            c(1) = tail * std::cos(p(0));
            c(2) = tail * std::sin(p(0));
        }
        const int off = d - 2;
        SchmidtForm s{c.cwiseAbs(), givens_chain(d, p.data() + off),
                      givens_chain(d, p.data() + off + 2 * (d - 1))};
        // Keep coefficients descending; c1 dominates for every s <= 1.
        for (int i = 1; i < d; ++i) {
            for (int j = i + 1; j < d; ++j) {
                if (s.coeffs(j) > s.coeffs(i)) {
                    std::swap(s.coeffs(i), s.coeffs(j));
                    s.basis_a.col(i).swap(s.basis_a.col(j));
                    s.basis_b.col(i).swap(s.basis_b.col(j));
                }
            }
        }
        return s;
    }

    /// P_r / |dS/dt|, or +inf where the rate is unusable.
    double ratio(const Eigen::VectorXd& p) const {
        const SchmidtForm s = state(p);
        double rate = 0.0;
        try {
            rate = min_entropy_rate(s, 0);
        } catch (const DegeneracyError&) {
            return std::numeric_limits<double>::infinity();
        }
        if (!(std::abs(rate) >= 1e-12)) return std::numeric_limits<double>::infinity();
        return rydberg_population(s, 0) / std::abs(rate);
    }
};

inline OracleArgmin describe_argmin(const SchmidtForm& s) {
    OracleArgmin a;
    const int d = s.dim();
    a.coeffs = s.coeffs;
    a.weights = rydberg_weights(s, 0);
    a.overlap_a = s.basis_a.row(0).cwiseAbs().transpose();
    a.overlap_b = s.basis_b.row(0).cwiseAbs().transpose();
    a.relative_phase = Eigen::VectorXd::Zero(d);
    for (int i = 1; i < d; ++i) {
        a.relative_phase(i) = std::arg(interaction_element(s, 0, 0, i));
    }
    a.x = s.coeffs(0) * s.coeffs(0);
    a.y = a.weights(0);
    for (int i = 1; i < d; ++i) {
        a.z += s.coeffs(i) / std::sqrt(1.0 - a.x) * a.weights(i) / (1.0 - a.y);
    }
    return a;
}

}  // namespace detail

/// Multi-start simplex minimization of P_r / |dS/dt| over two-atom states of local dimension
/// d with the largest Schmidt coefficient pinned to 2^(-s/2). Restart r draws its start from
/// a generator seeded with seed + r; ties on the minimum keep the lowest restart index.
inline OracleResult minimize_ratio_numeric(double s, int d, int restarts, std::uint64_t seed,
                                           const NelderMeadOptions& options = {}) {
    if (!(s > 0.0 && s <= 1.0)) {
        throw DomainError("ratio minimization requires 0 < s <= 1");
    }
    if (d != 2 && d != 3) throw ValidationError("local dimension must be 2 or 3");
    if (restarts < 1) throw ValidationError("at least one restart is required");

    const double c1 = std::exp2(-0.5 * s);
    const detail::RatioProblem problem{d, c1, std::sqrt(-std::expm1(-s * std::numbers::ln2))};
    auto objective = [&](const Eigen::VectorXd& p) { return problem.ratio(p); };

    OracleResult out;
    out.s = s;
    out.ratio_min = std::numeric_limits<double>::infinity();
    Eigen::VectorXd best_point;
    for (int r = 0; r < restarts; ++r) {
        std::mt19937_64 rng(seed + static_cast<std::uint64_t>(r));
        std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
        Eigen::VectorXd start(problem.parameter_count());
        for (int k = 0; k < start.size(); ++k) start(k) = angle(rng);
        const NelderMeadResult res = nelder_mead(objective, start, options);
        ++out.restarts_used;
        if (res.value < out.ratio_min) {
            out.ratio_min = res.value;
            out.best_restart = r;
            best_point = res.x;
        }
    }
    if (!std::isfinite(out.ratio_min)) {
        throw OracleFailure("no restart produced a state with a usable entropy rate (s = " +
                            std::to_string(s) + ")");
    }
    out.argmin = detail::describe_argmin(problem.state(best_point));
    return out;
}

}  // namespace rydbound
