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
#include <span>
#include <vector>

#include "rydbound/core/models.hpp"
#include "rydbound/core/propagation.hpp"
#include "rydbound/core/pulse.hpp"

namespace rydbound {

using SymmetricOperator = SymmetricModel::Operator;

/// Gradient with respect to the piecewise-constant controls, one entry per step.
struct ControlGradient {
    std::vector<double> omega;
    std::vector<double> delta;

    /// Flattened as (Omega_0..Omega_{N-1}, Delta_0..Delta_{N-1}), matching ControlPulse::controls().
    std::vector<double> flattened() const {
        std::vector<double> g(omega);
        g.insert(g.end(), delta.begin(), delta.end());
        return g;
    }
};

/// psi_0 = initial, psi_{n+1} = U_n psi_n.
inline std::vector<SymmetricState> forward_states(std::span<const SymmetricOperator> steps,
                                                  const SymmetricState& initial) {
    std::vector<SymmetricState> psi(steps.size() + 1);
    psi[0] = initial;
    for (std::size_t n = 0; n < steps.size(); ++n) psi[n + 1] = steps[n] * psi[n];
    return psi;
}

/// Forward evolution from |gg>.
inline std::vector<SymmetricState> forward_states(const ControlPulse& pulse) {
    return forward_states(step_propagators<SymmetricModel>(pulse), basis::gg());
}

/// chi_N = target, chi_n = U_n^dagger chi_{n+1}: the same Schrodinger equation run backward.
inline std::vector<SymmetricState> adjoint_states(std::span<const SymmetricOperator> steps,
                                                  const SymmetricState& target) {
    std::vector<SymmetricState> chi(steps.size() + 1);
    chi.back() = target;
    for (std::size_t n = steps.size(); n-- > 0;) chi[n] = steps[n].adjoint() * chi[n + 1];
    return chi;
}

inline std::vector<SymmetricState> adjoint_states(const ControlPulse& pulse,
                                                  const SymmetricState& target) {
    require_normalized<SymmetricModel>(target, "adjoint target");
    return adjoint_states(step_propagators<SymmetricModel>(pulse), target);
}

/// Costate of i d(xi)/dt = H xi + Pi_r psi with xi(T) = 0, discretized as
/// xi_N = 0, xi_n = U_n^dagger xi_{n+1} + i dt Pi_r psi_n. The source uses snapshots 0..N-1,
/// the same rectangle rule as the objective's T_r.
inline std::vector<SymmetricState> inhomogeneous_adjoint(std::span<const SymmetricOperator> steps,
                                                         std::span<const SymmetricState> forward,
                                                         double dt) {
    const SymmetricState rydberg = SymmetricModel::rydberg_diagonal().cast<cd>();
    std::vector<SymmetricState> xi(steps.size() + 1);
    xi.back().setZero();
    for (std::size_t n = steps.size(); n-- > 0;) {
        xi[n] = steps[n].adjoint() * xi[n + 1] +
                (kI * dt) * rydberg.cwiseProduct(forward[n]);
    }
    return xi;
}

inline std::vector<SymmetricState> inhomogeneous_adjoint(const ControlPulse& pulse,
                                                         std::span<const SymmetricState> forward) {
    if (forward.size() != pulse.steps() + 1) {
        throw ValidationError("forward trajectory length does not match the pulse");
    }
    return inhomogeneous_adjoint(step_propagators<SymmetricModel>(pulse), forward, pulse.dt());
}

/// J = F - gamma T_r with T_r by the left rectangle rule, plus its gradient.
struct CostEvaluation {
    double cost = 0.0;
    double fidelity = 0.0;
    double rydberg_time = 0.0;
    ControlGradient gradient;
};

namespace detail {

/// First-order control derivatives: step n is differentiated through the states after it,
/// dF/du_n = 2 dt Im(<chi_{n+1}|V|psi_{n+1}> <psi_{n+1}|chi_{n+1}>),
/// dT_r/du_n = 2 dt Re <xi_{n+1}|V|psi_{n+1}>.
struct GrapeSweep {
    std::vector<SymmetricOperator> steps;
    std::vector<SymmetricState> psi;
    std::vector<SymmetricState> chi;
    std::vector<SymmetricState> xi;
    double dt = 0.0;

    GrapeSweep(const ControlPulse& pulse, const SymmetricState& target, bool with_xi)
        : steps(step_propagators<SymmetricModel>(pulse)),
          psi(forward_states(steps, basis::gg())),
          chi(adjoint_states(steps, target)),
          dt(pulse.dt()) {
        if (with_xi) xi = inhomogeneous_adjoint(steps, psi, dt);
    }

    double fidelity() const { return std::norm(chi.back().dot(psi.back())); }

    double rydberg_time_left() const {
        double sum = 0.0;
        for (std::size_t n = 0; n + 1 < psi.size(); ++n) sum += rydberg_population(psi[n]);
        return sum * dt;
    }

    ControlGradient fidelity_gradient() const {
        const std::size_t count = steps.size();
        ControlGradient g{std::vector<double>(count), std::vector<double>(count)};
        const SymmetricOperator v_omega = SymmetricModel::omega_generator();
        const auto v_delta = SymmetricModel::delta_generator();
        for (std::size_t n = 0; n < count; ++n) {
            const auto& p = psi[n + 1];
            const auto& c = chi[n + 1];
            const cd overlap = p.dot(c);
            g.omega[n] = 2.0 * dt * (c.dot(v_omega * p) * overlap).imag();
            g.delta[n] = 2.0 * dt * (c.dot(v_delta * p) * overlap).imag();
        }
        return g;
    }

    ControlGradient rydberg_time_gradient() const {
        const std::size_t count = steps.size();
        ControlGradient g{std::vector<double>(count), std::vector<double>(count)};
        const SymmetricOperator v_omega = SymmetricModel::omega_generator();
        const auto v_delta = SymmetricModel::delta_generator();
        for (std::size_t n = 0; n < count; ++n) {
            const auto& p = psi[n + 1];
            const auto& x = xi[n + 1];
            g.omega[n] = 2.0 * dt * x.dot(v_omega * p).real();
            g.delta[n] = 2.0 * dt * x.dot(v_delta * p).real();
        }
        return g;
    }
};

}  // namespace detail

inline ControlGradient fidelity_gradient(const ControlPulse& pulse,
                                         const SymmetricState& target = basis::bell_target()) {
    return detail::GrapeSweep(pulse, target, false).fidelity_gradient();
}

inline ControlGradient rydberg_time_gradient(const ControlPulse& pulse) {
    return detail::GrapeSweep(pulse, basis::bell_target(), true).rydberg_time_gradient();
}

/// Maximization convention: the optimizer minimizes -J.
inline CostEvaluation cost_and_gradient(const ControlPulse& pulse, double gamma,
                                        const SymmetricState& target = basis::bell_target()) {
    if (!(gamma >= 0.0)) throw ValidationError("penalty weight gamma must be non-negative");
    const detail::GrapeSweep sweep(pulse, target, gamma != 0.0);
    CostEvaluation out;
    out.fidelity = sweep.fidelity();
    out.rydberg_time = sweep.rydberg_time_left();
    out.cost = out.fidelity - gamma * out.rydberg_time;
    out.gradient = sweep.fidelity_gradient();
    if (gamma != 0.0) {
        const ControlGradient gt = sweep.rydberg_time_gradient();
        for (std::size_t n = 0; n < pulse.steps(); ++n) {
            out.gradient.omega[n] -= gamma * gt.omega[n];
            out.gradient.delta[n] -= gamma * gt.delta[n];
        }
    }
    return out;
}

struct FiniteDifferenceReport {
    /// max_k |analytic_k - fd_k| / max_k |fd_k|, over all knobs and per control family.
    double max_relative_deviation = 0.0;
    double omega_deviation = 0.0;
    double delta_deviation = 0.0;
    /// Index into the flattened control vector.
    std::size_t worst_knob = 0;
    double gradient_scale = 0.0;
    std::vector<double> finite_difference;
    std::vector<double> analytic;
};

namespace detail {

/// Discrete J with step k replaced by `u_step`, evaluated exactly in O(1) from cached
/// quantities: F through chi_{k+1}, and the T_r tail through
/// A_{k+1} = dt sum_{m>k, m<N} W^dagger Pi_r W (W propagating from k+1 to m).
struct SingleStepReplay {
    std::vector<SymmetricOperator> steps;
    std::vector<SymmetricState> psi;
    std::vector<SymmetricState> chi;
    std::vector<SymmetricOperator> tail;
    std::vector<double> head;  // head[k] = dt sum_{m<=k} P_r(psi_m)
    double dt;

    SingleStepReplay(const ControlPulse& pulse, const SymmetricState& target)
        : steps(step_propagators<SymmetricModel>(pulse)),
          psi(forward_states(steps, basis::gg())),
          chi(adjoint_states(steps, target)),
          tail(steps.size() + 1),
          head(steps.size()),
          dt(pulse.dt()) {
        const SymmetricOperator rydberg =
            SymmetricModel::rydberg_diagonal().cast<cd>().asDiagonal();
        tail.back().setZero();
        for (std::size_t n = steps.size(); n-- > 1;) {
            tail[n] = dt * rydberg + steps[n].adjoint() * tail[n + 1] * steps[n];
        }
        double acc = 0.0;
        for (std::size_t k = 0; k < steps.size(); ++k) {
            acc += dt * rydberg_population(psi[k]);
            head[k] = acc;
        }
    }

    double cost(std::size_t k, const SymmetricOperator& u_step, double gamma) const {
        const SymmetricState phi = u_step * psi[k];
        const double fidelity = std::norm(chi[k + 1].dot(phi));
        const double tr = head[k] + phi.dot(tail[k + 1] * phi).real();
        return fidelity - gamma * tr;
    }
};

}  // namespace detail

/// Central differences of the discrete J (exact step exponentials, no first-order
/// approximation) against cost_and_gradient.
inline FiniteDifferenceReport finite_difference_check(
    const ControlPulse& pulse, double gamma, double epsilon,
    const SymmetricState& target = basis::bell_target()) {
    if (!(epsilon >= 1e-8 && epsilon <= 1e-3)) {
        throw ValidationError("finite-difference step must lie in [1e-8, 1e-3]");
    }
    const std::size_t count = pulse.steps();
    const detail::SingleStepReplay replay(pulse, target);
    FiniteDifferenceReport rep;
    rep.analytic = cost_and_gradient(pulse, gamma, target).gradient.flattened();
    rep.finite_difference.resize(2 * count);
    const double dt = pulse.dt();
    for (std::size_t k = 0; k < count; ++k) {
        const double om = pulse.omega()[k];
        const double de = pulse.delta()[k];
        auto j = [&](double o, double d) {
            return replay.cost(k, step_propagator<SymmetricModel>(o, d, dt), gamma);
        };
        rep.finite_difference[k] = (j(om + epsilon, de) - j(om - epsilon, de)) / (2.0 * epsilon);
        rep.finite_difference[count + k] =
            (j(om, de + epsilon) - j(om, de - epsilon)) / (2.0 * epsilon);
    }
    for (double v : rep.finite_difference) rep.gradient_scale = std::max(rep.gradient_scale, std::abs(v));
    const double scale = rep.gradient_scale > 0.0 ? rep.gradient_scale : 1.0;
    for (std::size_t i = 0; i < 2 * count; ++i) {
        const double dev = std::abs(rep.analytic[i] - rep.finite_difference[i]) / scale;
        double& family = i < count ? rep.omega_deviation : rep.delta_deviation;
        family = std::max(family, dev);
        if (dev > rep.max_relative_deviation) {
            rep.max_relative_deviation = dev;
            rep.worst_knob = i;
        }
    }
    return rep;
}

}  // namespace rydbound
