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
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>

#include "rydbound/bound/closed_form.hpp"
#include "rydbound/core/models.hpp"
#include "rydbound/core/propagation.hpp"
#include "rydbound/core/schmidt.hpp"
#include "rydbound/errors.hpp"

namespace rydbound {

/// Two-qubit unitary over (gg, gr, rg, rr), i.e. (00, 01, 10, 11) with g -> 0, r -> 1.
using TwoQubitUnitary = Eigen::Matrix4cd;

inline double unitarity_defect(const Eigen::MatrixXcd& u) {
    return (u.adjoint() * u - Eigen::MatrixXcd::Identity(u.cols(), u.cols())).cwiseAbs().maxCoeff();
}

struct ProtocolReport {
    std::string name;
    /// B T_r for Bell-state preparation from |gg>, where applicable.
    std::optional<double> eta_state;
    /// B times the time integral of the Rydberg population averaged over the four inputs.
    std::optional<double> eta_gate;
    std::optional<double> final_fidelity;
    bool checks_passed = false;
    std::string detail;
};

/// Full unitary of a piecewise-constant pulse in the two-atom picture.
inline TwoQubitUnitary pulse_unitary(const ControlPulse& pulse) {
    TwoQubitUnitary u = TwoQubitUnitary::Identity();
    for (const auto& step : step_propagators<TwoAtomModel>(pulse)) u = step * u;
    return u;
}

/// Time integral of P_r averaged over the four computational inputs (trapezoid rule).
inline double gate_average_rydberg_time(const ControlPulse& pulse) {
    double total = 0.0;
    for (int q = 0; q < 4; ++q) {
        const auto traj = propagate<TwoAtomModel>(pulse, TwoAtomState::Unit(q));
        total += integrated_rydberg_time(traj, Quadrature::trapezoid);
    }
    return 0.25 * total;
}

/// Ideal resonant pi/2 rotation on both atoms (delta-pulse limit, zero Rydberg dwell),
/// then free evolution for BT = pi under the interaction alone.
inline ProtocolReport naive_protocol() {
    const double s = 1.0 / std::numbers::sqrt2;
    Eigen::Matrix2cd half_pi;
    half_pi << s, -s, s, s;  // exp(-i pi/4 sigma_y): g -> (g + r)/sqrt(2)
    const TwoAtomState start = Eigen::kroneckerProduct(half_pi, half_pi).eval() * TwoAtomState::Unit(0);

    const auto wait = ControlPulse::zero(std::numbers::pi, 64);
    const auto traj = propagate<TwoAtomModel>(wait, start);
    const TwoAtomState target = basis::to_two_atom(basis::bell_target());

    ProtocolReport rep;
    rep.name = "naive pi/2 + wait";
    rep.final_fidelity = state_fidelity(target, traj.states.back());
    rep.eta_state = integrated_rydberg_time(traj, Quadrature::trapezoid);
    const double entropy = min_entropy(schmidt_decompose(to_bipartite(traj.states.back())));
    rep.checks_passed = std::abs(*rep.final_fidelity - 1.0) <= 1e-12 &&
                        std::abs(entropy - 1.0) <= 1e-10;
    rep.detail = "ratio to bound " + std::to_string(*rep.eta_state / kEtaMinClosedForm);
    return rep;
}

struct CzWaitResult {
    TwoQubitUnitary unitary;
    ProtocolReport report;
};

/// Two-level atoms with g -> |0>, r -> |1>: idle for BT = pi so that |11> picks up a pi phase.
inline CzWaitResult cz_wait_protocol_d2() {
    const auto wait = ControlPulse::zero(std::numbers::pi, 64);
    CzWaitResult out;
    out.unitary = pulse_unitary(wait);
    out.report.name = "CZ wait (d=2)";
    out.report.eta_gate = gate_average_rydberg_time(wait);
    const TwoQubitUnitary cz = Eigen::Vector4cd(1.0, 1.0, 1.0, -1.0).asDiagonal();
    const double err = (out.unitary - cz).cwiseAbs().maxCoeff();
    out.report.checks_passed = err <= 1e-10;
    out.report.detail = "max |U - CZ| = " + std::to_string(err);
    return out;
}

/// Three-level atoms (|0>, |1>, |r>): ideal |1> <-> |r> pi pulses bracketing an idle wait of
/// BT = pi. Returns the gate-averaged dwell and checks the induced qubit unitary is CZ up to
/// single-qubit phases.
struct CzThreeLevelResult {
    TwoQubitUnitary unitary;
    ProtocolReport report;
};

inline CzThreeLevelResult cz_wait_protocol_d3() {
    constexpr int d = 3;
    constexpr int r = 2;
    // exp(-i pi/2 (|1><r| + |r><1|)) on one atom.
    Eigen::Matrix3cd pi_pulse = Eigen::Matrix3cd::Zero();
    pi_pulse(0, 0) = 1.0;
    pi_pulse(1, r) = -kI;
    pi_pulse(r, 1) = -kI;
    const Eigen::MatrixXcd pulses = Eigen::kroneckerProduct(pi_pulse, pi_pulse);

    auto excitations = [&](int index) { return int(index / d == r) + int(index % d == r); };
    const double wait = std::numbers::pi;
    Eigen::VectorXcd idle(d * d);
    for (int k = 0; k < d * d; ++k) {
        idle(k) = (excitations(k) == 2) ? std::exp(-kI * wait) : cd(1.0);
    }
    const Eigen::MatrixXcd full = pulses * idle.asDiagonal() * pulses;

    const std::array<int, 4> qubits{0 * d + 0, 0 * d + 1, 1 * d + 0, 1 * d + 1};
    CzThreeLevelResult out;
    double averaged = 0.0;
    for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) out.unitary(a, b) = full(qubits[a], qubits[b]);
        // During the wait the input sits in the pulsed state, which is stationary.
        const Eigen::VectorXcd during = pulses.col(qubits[a]);
        for (int k = 0; k < d * d; ++k) averaged += excitations(k) * std::norm(during(k));
    }
    out.report.name = "CZ pi-wait-pi (d=3)";
    out.report.eta_gate = 0.25 * averaged * wait;

    const cd invariant = out.unitary(3, 3) * out.unitary(0, 0) /
                         (out.unitary(1, 1) * out.unitary(2, 2));
    const bool diagonal =
        (out.unitary - Eigen::Matrix4cd(out.unitary.diagonal().asDiagonal())).cwiseAbs().maxCoeff() <=
        1e-10;
    out.report.checks_passed = diagonal && std::abs(invariant + 1.0) <= 1e-10 &&
                               unitarity_defect(out.unitary) <= 1e-10;
    out.report.detail = "U11 U00 / (U01 U10) = " + std::to_string(invariant.real());
    return out;
}

struct WeylCoordinates {
    /// Canonical chamber pi - c2 >= c1 >= c2 >= c3 >= 0 (c1 may exceed pi/2).
    std::array<double, 3> canonical{};
    /// Mirror image folded to c1 <= pi/2: (pi - c1, c2, c3) whenever c1 > pi/2.
    std::array<double, 3> folded{};
};

namespace detail {

inline Eigen::Matrix4cd magic_basis() {
    const double s = 1.0 / std::numbers::sqrt2;
    Eigen::Matrix4cd q;
    // clang-format off
    q << s,       0.0,     0.0,  kI * s,
         0.0,     kI * s,  s,    0.0,
         0.0,     kI * s, -s,    0.0,
         s,       0.0,     0.0, -kI * s;
    // clang-format on
    return q;
}

}  // namespace detail

/// Nonlocal coordinates (c1, c2, c3) with U ~ k1 exp(i/2 (c1 XX + c2 YY + c3 ZZ)) k2.
/// Eigenphases of U_B^T U_B in the magic basis give the coordinates up to the Weyl group
/// (permutations, pairwise sign flips, shifts by pi); the chamber representative is chosen
/// by enumerating that group.
inline WeylCoordinates weyl_coordinates(const TwoQubitUnitary& u) {
    if (unitarity_defect(u) > 1e-8) {
        throw ValidationError("weyl_coordinates requires a unitary matrix");
    }
    const cd det = u.determinant();
    const TwoQubitUnitary su = u * std::pow(det, -0.25);
    const Eigen::Matrix4cd q = detail::magic_basis();
    const Eigen::Matrix4cd ub = q.adjoint() * su * q;
    const Eigen::Matrix4cd m = ub.transpose() * ub;
    Eigen::ComplexEigenSolver<Eigen::Matrix4cd> eig(m, false);

    std::array<double, 4> h{};
    double sum = 0.0;
    for (int k = 0; k < 4; ++k) {
        h[k] = 0.5 * std::arg(eig.eigenvalues()(k));
        sum += h[k];
    }
    h[3] -= sum;
    const std::array<double, 3> raw{h[0] + h[1], h[1] + h[3], h[0] + h[3]};

    constexpr double pi = std::numbers::pi;
    constexpr double tol = 1e-9;
    auto reduce = [&](double c) {
        double r = std::fmod(c, pi);
        if (r < 0.0) r += pi;
        if (pi - r < tol) r = 0.0;
        return r;
    };
    std::array<double, 3> best{};
    bool found = false;
    std::array<int, 3> perm{0, 1, 2};
    constexpr std::array<std::array<double, 3>, 4> signs{
        {{1, 1, 1}, {-1, -1, 1}, {-1, 1, -1}, {1, -1, -1}}};
    do {
        for (const auto& sg : signs) {
            std::array<double, 3> c{};
            for (int i = 0; i < 3; ++i) c[i] = reduce(sg[i] * raw[perm[i]]);
            const bool in_chamber = c[0] + tol >= c[1] && c[1] + tol >= c[2] && c[2] >= 0.0 &&
                                    c[0] + c[1] <= pi + tol;
            if (!in_chamber) continue;
            // On the c3 = 0 face (c1, c2, 0) ~ (pi - c1, c2, 0); keep c1 <= pi/2 there.
            if (c[2] < tol && c[0] > pi / 2.0 + tol) continue;
            if (!found || c < best) {
                best = c;
                found = true;
            }
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    if (!found) throw ValidationError("weyl_coordinates: no chamber representative found");

    for (double& c : best) {
        if (std::abs(c) < tol) c = 0.0;
    }
    WeylCoordinates out;
    out.canonical = best;
    out.folded = best;
    if (best[0] > pi / 2.0) out.folded[0] = pi - best[0];
    return out;
}

}  // namespace rydbound
