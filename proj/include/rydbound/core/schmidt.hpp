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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "rydbound/core/models.hpp"
#include "rydbound/errors.hpp"

namespace rydbound {

/// psi = sum_ab amps(a, b) |a>_A |b>_B over a local basis of size d in which
/// index `rydberg_index` is the Rydberg level.
struct BipartiteState {
    Eigen::MatrixXcd amps;
    int rydberg_index = 1;

    int dim() const { return static_cast<int>(amps.rows()); }
};

inline BipartiteState make_bipartite(Eigen::MatrixXcd amps, int rydberg_index) {
    if (amps.rows() != amps.cols() || amps.rows() < 2) {
        throw ValidationError("bipartite amplitude matrix must be square with d >= 2");
    }
    if (rydberg_index < 0 || rydberg_index >= amps.rows()) {
        throw ValidationError("rydberg index out of range");
    }
    if (std::abs(amps.norm() - 1.0) > 1e-8) {
        throw ValidationError("bipartite state is not normalized (norm " +
                              std::to_string(amps.norm()) + ")");
    }
    return {std::move(amps), rydberg_index};
}

/// Local basis (g, r) on each atom.
inline BipartiteState to_bipartite(const TwoAtomState& psi) {
    Eigen::MatrixXcd m(2, 2);
    m << psi(0), psi(1), psi(2), psi(3);
    return make_bipartite(std::move(m), 1);
}

inline BipartiteState to_bipartite(const SymmetricState& psi) {
    return to_bipartite(TwoAtomState(basis::to_two_atom(psi)));
}

/// psi = sum_i coeffs(i) |u_i>|v_i>, coefficients descending; u_i, v_i are the columns
/// of basis_a and basis_b.
struct SchmidtForm {
    Eigen::VectorXd coeffs;
    Eigen::MatrixXcd basis_a;
    Eigen::MatrixXcd basis_b;

    int dim() const { return static_cast<int>(coeffs.size()); }

    /// Amplitude matrix sum_i c_i u_i v_i^T.
    Eigen::MatrixXcd reconstruct() const {
        return basis_a * coeffs.cast<cd>().asDiagonal() * basis_b.transpose();
    }
};

/// Singular value decomposition of the amplitude matrix. Each u_i is rephased so its first
/// non-negligible component is real positive (v_i absorbs the conjugate phase), which makes
/// the output deterministic for golden tests.
inline SchmidtForm schmidt_decompose(const BipartiteState& state) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(state.amps, Eigen::ComputeFullU | Eigen::ComputeFullV);
    SchmidtForm out{svd.singularValues(), svd.matrixU(), svd.matrixV().conjugate()};
    for (int i = 0; i < out.dim(); ++i) {
        for (int k = 0; k < out.dim(); ++k) {
            const cd z = out.basis_a(k, i);
            if (std::abs(z) > 1e-12) {
                const cd phase = std::polar(1.0, -std::arg(z));
                out.basis_a.col(i) *= phase;
                out.basis_b.col(i) /= phase;
                break;
            }
        }
    }
    return out;
}

/// S = -log2 c_max^2.
inline double min_entropy(const SchmidtForm& s) {
    const double c1 = s.coeffs.maxCoeff();
    return -std::log2(c1 * c1);
}

inline double von_neumann_entropy(const SchmidtForm& s) {
    double h = 0.0;
    for (int i = 0; i < s.dim(); ++i) {
        const double p = s.coeffs(i) * s.coeffs(i);
        if (p > 0.0) h -= p * std::log2(p);
    }
    return h;
}

/// w_i = (|<r|u_i>|^2 + |<r|v_i>|^2) / 2; these sum to one.
inline Eigen::VectorXd rydberg_weights(const SchmidtForm& s, int rydberg_index) {
    return 0.5 * (s.basis_a.row(rydberg_index).cwiseAbs2() +
                  s.basis_b.row(rydberg_index).cwiseAbs2())
                     .transpose();
}

/// Number of Rydberg excitations, <psi| (|r><r| x 1 + 1 x |r><r|) |psi>.
inline double rydberg_population(const BipartiteState& state) {
    const int r = state.rydberg_index;
    return state.amps.row(r).squaredNorm() + state.amps.col(r).squaredNorm();
}

inline double rydberg_population(const SchmidtForm& s, int rydberg_index) {
    return 2.0 * s.coeffs.cwiseAbs2().dot(rydberg_weights(s, rydberg_index));
}

/// <u_i v_i| rr><rr |u_j v_j>, the matrix element of the interaction with B = 1.
inline cd interaction_element(const SchmidtForm& s, int rydberg_index, int i, int j) {
    const int r = rydberg_index;
    return std::conj(s.basis_a(r, i) * s.basis_b(r, i)) * s.basis_a(r, j) * s.basis_b(r, j);
}

inline constexpr double kDegeneracyTolerance = 1e-10;

/// dS/dt of the min-entropy under the interaction alone (local drive terms cannot change
/// Schmidt coefficients). Requires a unique largest coefficient.
inline double min_entropy_rate(const SchmidtForm& s, int rydberg_index) {
    if (s.dim() > 1 && s.coeffs(0) - s.coeffs(1) <= kDegeneracyTolerance) {
        throw DegeneracyError("largest Schmidt coefficient is degenerate (c1 - c2 = " +
                              std::to_string(s.coeffs(0) - s.coeffs(1)) + ")");
    }
    double dc1 = 0.0;
    for (int i = 0; i < s.dim(); ++i) {
        dc1 += s.coeffs(i) * interaction_element(s, rydberg_index, 0, i).imag();
    }
    return -(2.0 / std::numbers::ln2) * dc1 / s.coeffs(0);
}

inline double min_entropy_rate(const BipartiteState& state) {
    return min_entropy_rate(schmidt_decompose(state), state.rydberg_index);
}

/// dS_vN/dt = 2 sum_ij c_i c_j log2(c_j / c_i) Im <u_i v_i|H_int|u_j v_j>.
inline double von_neumann_entropy_rate(const SchmidtForm& s, int rydberg_index) {
    constexpr double kActive = 1e-8;
    for (int i = 0; i < s.dim(); ++i) {
        for (int j = i + 1; j < s.dim(); ++j) {
            if (s.coeffs(j) > kActive &&
                std::abs(s.coeffs(i) - s.coeffs(j)) <= kDegeneracyTolerance) {
                throw DegeneracyError("degenerate Schmidt spectrum");
            }
        }
    }
    double rate = 0.0;
    for (int i = 0; i < s.dim(); ++i) {
        for (int j = 0; j < s.dim(); ++j) {
            const double ci = s.coeffs(i);
            const double cj = s.coeffs(j);
            if (i == j || ci == 0.0 || cj == 0.0) continue;
            rate += ci * cj * std::log2(cj / ci) *
                    interaction_element(s, rydberg_index, i, j).imag();
        }
    }
    return 2.0 * rate;
}

}  // namespace rydbound
