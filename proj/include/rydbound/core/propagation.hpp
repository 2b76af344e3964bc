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
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "rydbound/core/models.hpp"
#include "rydbound/core/pulse.hpp"
#include "rydbound/errors.hpp"

namespace rydbound {

inline constexpr double kNormTolerance = 1e-8;

/// exp(-i dt (H - i gamma/2 Pi_r)) for one constant step.
///
/// The Hermitian case goes through an eigendecomposition; with decay the generator is
/// non-Hermitian and the Pade scaling-and-squaring exponential is used instead.
template <class Model>
typename Model::Operator step_propagator(double omega, double delta, double dt,
                                         double gamma_over_b = 0.0) {
    using Operator = typename Model::Operator;
    const Operator h = Model::hamiltonian(omega, delta);
    if (gamma_over_b == 0.0) {
        Eigen::SelfAdjointEigenSolver<Operator> eig(h);
        const typename Model::State phases =
            (-kI * dt * eig.eigenvalues().template cast<cd>()).array().exp().matrix();
        return eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().adjoint();
    }
    const Operator decay =
        (0.5 * gamma_over_b * Model::rydberg_diagonal()).template cast<cd>().asDiagonal();
    const Operator generator = -kI * dt * (h - kI * decay);
    return generator.exp();
}

template <class Model>
std::vector<typename Model::Operator> step_propagators(const ControlPulse& pulse,
                                                       double gamma_over_b = 0.0) {
    std::vector<typename Model::Operator> steps;
    steps.reserve(pulse.steps());
    const double dt = pulse.dt();
    for (std::size_t n = 0; n < pulse.steps(); ++n) {
        steps.push_back(
            step_propagator<Model>(pulse.omega()[n], pulse.delta()[n], dt, gamma_over_b));
    }
    return steps;
}

/// States sampled at t_n = n dt, n = 0..N.
template <class Model>
struct Trajectory {
    ControlPulse pulse;
    std::vector<typename Model::State> states;
    double gamma_over_b = 0.0;

    double time(std::size_t n) const { return static_cast<double>(n) * pulse.dt(); }
};

template <class Model>
void require_normalized(const typename Model::State& psi, const char* what) {
    const double norm = psi.norm();
    if (!(std::abs(norm - 1.0) <= kNormTolerance)) {
        throw ValidationError(std::string(what) + " is not normalized (norm " +
                              std::to_string(norm) + ")");
    }
}

template <class Model>
Trajectory<Model> propagate(const ControlPulse& pulse, const typename Model::State& initial,
                            double gamma_over_b = 0.0) {
    require_normalized<Model>(initial, "initial state");
    if (!(gamma_over_b >= 0.0) || !std::isfinite(gamma_over_b)) {
        throw ValidationError("decay rate gamma/B must be finite and non-negative");
    }
    Trajectory<Model> traj{pulse, {}, gamma_over_b};
    traj.states.reserve(pulse.steps() + 1);
    traj.states.push_back(initial);
    const double dt = pulse.dt();
    for (std::size_t n = 0; n < pulse.steps(); ++n) {
        const auto u =
            step_propagator<Model>(pulse.omega()[n], pulse.delta()[n], dt, gamma_over_b);
        traj.states.push_back(u * traj.states.back());
    }
    return traj;
}

/// <psi|Pi_r|psi> with the state's norm taken as-is, so that on a decaying trajectory
/// d|psi|^2/dt = -Gamma P_r holds exactly.
template <int Dim>
double rydberg_population(const Eigen::Matrix<cd, Dim, 1>& psi) {
    static_assert(Dim == 3 || Dim == 4, "symmetric (3) or two-atom (4) state expected");
    using Model = std::conditional_t<Dim == 3, SymmetricModel, TwoAtomModel>;
    return Model::rydberg_diagonal().dot(psi.cwiseAbs2());
}

enum class Quadrature {
    trapezoid,
    /// Sum over snapshots 0..N-1; matches the discretization behind the adjoint gradients.
    left_rectangle,
};

/// T_r = integral of P_r dt over the trajectory, in units of 1/B.
template <class Model>
double integrated_rydberg_time(const Trajectory<Model>& traj,
                               Quadrature rule = Quadrature::trapezoid) {
    const auto& s = traj.states;
    if (s.empty()) return 0.0;
    double sum = 0.0;
    for (std::size_t n = 0; n + 1 < s.size(); ++n) sum += rydberg_population(s[n]);
    if (rule == Quadrature::trapezoid) {
        sum += 0.5 * (rydberg_population(s.back()) - rydberg_population(s.front()));
    }
    return sum * traj.pulse.dt();
}

/// |<a|b>|^2
template <int Dim>
double state_fidelity(const Eigen::Matrix<cd, Dim, 1>& a, const Eigen::Matrix<cd, Dim, 1>& b) {
    return std::norm(a.dot(b));
}

}  // namespace rydbound
