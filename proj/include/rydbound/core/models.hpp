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
#include <complex>
#include <numbers>

#include <Eigen/Dense>

namespace rydbound {

using cd = std::complex<double>;
inline constexpr cd kI{0.0, 1.0};

/// Three-level ladder picture on the exchange-symmetric subspace, basis (gg, W, rr)
/// with W = (gr + rg)/sqrt(2). Energies in units of the interaction B.
struct SymmetricModel {
    static constexpr int dim = 3;
    using State = Eigen::Matrix<cd, 3, 1>;
    using Operator = Eigen::Matrix<cd, 3, 3>;
    using RealDiagonal = Eigen::Matrix<double, 3, 1>;

    static Operator hamiltonian(double omega, double delta) {
        const double c = omega / std::numbers::sqrt2;
        Operator h;
        // clang-format off
        h << 0.0, c,      0.0,
             c,   -delta, c,
             0.0, c,      1.0 - 2.0 * delta;
        // clang-format on
        return h;
    }

    /// dH/dOmega
    static Operator omega_generator() { return hamiltonian(1.0, 0.0) - hamiltonian(0.0, 0.0); }

    /// dH/dDelta = -(number of Rydberg excitations)
    static Operator delta_generator() { return (-rydberg_diagonal()).cast<cd>().asDiagonal(); }

    static RealDiagonal rydberg_diagonal() { return {0.0, 1.0, 2.0}; }
};

/// Full two-atom picture, basis (gg, gr, rg, rr).
struct TwoAtomModel {
    static constexpr int dim = 4;
    using State = Eigen::Matrix<cd, 4, 1>;
    using Operator = Eigen::Matrix<cd, 4, 4>;
    using RealDiagonal = Eigen::Matrix<double, 4, 1>;

    static Operator hamiltonian(double omega, double delta) {
        const double h = 0.5 * omega;
        Operator m;
        // clang-format off
        m << 0.0, h,      h,      0.0,
             h,   -delta, 0.0,    h,
             h,   0.0,    -delta, h,
             0.0, h,      h,      1.0 - 2.0 * delta;
        // clang-format on
        return m;
    }

    static Operator omega_generator() { return hamiltonian(1.0, 0.0) - hamiltonian(0.0, 0.0); }
    static Operator delta_generator() { return (-rydberg_diagonal()).cast<cd>().asDiagonal(); }
    static RealDiagonal rydberg_diagonal() { return {0.0, 1.0, 1.0, 2.0}; }
};

using SymmetricState = SymmetricModel::State;
using TwoAtomState = TwoAtomModel::State;

inline SymmetricModel::Operator build_symmetric_hamiltonian(double omega, double delta) {
    return SymmetricModel::hamiltonian(omega, delta);
}

inline TwoAtomModel::Operator build_two_atom_hamiltonian(double omega, double delta) {
    return TwoAtomModel::hamiltonian(omega, delta);
}

namespace basis {

inline SymmetricState gg() { return {1.0, 0.0, 0.0}; }
inline SymmetricState w() { return {0.0, 1.0, 0.0}; }
inline SymmetricState rr() { return {0.0, 0.0, 1.0}; }

/// (gg + sqrt(2) W - rr) / 2, i.e. (gg + gr + rg - rr) / 2.
inline SymmetricState bell_target() { return {0.5, std::numbers::sqrt2 / 2.0, -0.5}; }

/// Columns are gg, W, rr expressed in the (gg, gr, rg, rr) basis.
inline Eigen::Matrix<cd, 4, 3> symmetric_isometry() {
    const double s = 1.0 / std::numbers::sqrt2;
    Eigen::Matrix<cd, 4, 3> v = Eigen::Matrix<cd, 4, 3>::Zero();
    v(0, 0) = 1.0;
    v(1, 1) = s;
    v(2, 1) = s;
    v(3, 2) = 1.0;
    return v;
}

inline TwoAtomState to_two_atom(const SymmetricState& psi) { return symmetric_isometry() * psi; }

}  // namespace basis
}  // namespace rydbound
