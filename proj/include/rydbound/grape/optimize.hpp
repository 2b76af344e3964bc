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
#include <atomic>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Dense>

#include "rydbound/bound/closed_form.hpp"
#include "rydbound/core/propagation.hpp"
#include "rydbound/core/pulse.hpp"
#include "rydbound/errors.hpp"
#include "rydbound/grape/bfgs.hpp"
#include "rydbound/grape/gradients.hpp"

namespace rydbound {

/// Starting pulse: Omega(t) = A sin^2(pi t / T) with area drawn from [area_min, area_max],
/// constant Delta drawn from [delta_min, delta_max], each sample scaled by 1 + jitter * U(-1, 1).
struct InitStrategy {
    std::string name = "sin2";
    std::uint64_t seed = 7;
    double area_min = 2.0;
    double area_max = 3.0;
    double delta_min = -0.5;
    double delta_max = 0.5;
    double jitter = 0.2;
};

struct OptimizationConfig {
    double duration = 6.8;
    std::size_t steps = 400;
    std::vector<double> gamma_schedule{1e-3, 3e-4, 1e-4, 3e-5, 1e-5, 0.0};
    InitStrategy init;
    BfgsOptions bfgs;
    int restarts = 8;
    /// Infidelity below which restarts are ranked by eta rather than by infidelity.
    double accept_infidelity = 1e-6;
    /// Infidelity above which the best run is reported as a failure.
    double failure_infidelity = 1e-3;
    /// Optional |Omega|, |Delta| <= bound enforced by projection.
    std::optional<double> control_bound;
    unsigned threads = 1;

    void validate() const {
        if (!(duration > std::numbers::pi)) {
            throw ValidationError("pulse duration BT must exceed pi, got " +
                                  std::to_string(duration));
        }
        if (steps < 2) throw ValidationError("at least 2 control steps are required");
        if (gamma_schedule.empty() || gamma_schedule.back() != 0.0) {
            throw ValidationError("gamma schedule must end with 0");
        }
        if (gamma_schedule.front() > 1e-2) {
            throw ValidationError("gamma schedule must start at or below 1e-2");
        }
        for (std::size_t k = 1; k < gamma_schedule.size(); ++k) {
            if (!(gamma_schedule[k] < gamma_schedule[k - 1])) {
                throw ValidationError("gamma schedule must be strictly descending");
            }
        }
        if (restarts < 1) throw ValidationError("restarts must be at least 1");
        if (init.name != "sin2") throw ValidationError("unknown init strategy '" + init.name + "'");
        if (control_bound && !(*control_bound > 0.0)) {
            throw ValidationError("control bound must be positive");
        }
    }
};

struct StageTrace {
    double gamma = 0.0;
    int iterations = 0;
    double cost = 0.0;
    double fidelity = 0.0;
    /// Left-rectangle T_r, the quantity the stage optimized.
    double rydberg_time = 0.0;
    bool converged = false;
};

struct OptimizationReport {
    ControlPulse pulse = ControlPulse::zero(1.0, 2);
    double infidelity = 1.0;
    /// Trapezoidal integral of P_r over the Gamma = 0 trajectory, units 1/B.
    double rydberg_time = 0.0;
    /// B T_r
    double eta = 0.0;
    double pulse_area = 0.0;
    std::vector<StageTrace> trace;
    std::uint64_t seed = 0;
    int restart = 0;
    bool success = false;
};

inline ControlPulse initial_pulse(double duration, std::size_t steps, const InitStrategy& init,
                                  std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::uniform_real_distribution<double> area(init.area_min, init.area_max);
    std::uniform_real_distribution<double> detuning(init.delta_min, init.delta_max);
    const double theta = area(rng);
    const double delta0 = detuning(rng);
    const double dt = duration / static_cast<double>(steps);

    std::vector<double> shape(steps);
    double norm = 0.0;
    for (std::size_t n = 0; n < steps; ++n) {
        const double t = (static_cast<double>(n) + 0.5) * dt;
        const double s = std::sin(std::numbers::pi * t / duration);
        shape[n] = s * s;
        norm += shape[n] * dt;
    }
    std::vector<double> omega(steps);
    std::vector<double> delta(steps);
    for (std::size_t n = 0; n < steps; ++n) {
        omega[n] = theta / norm * shape[n] * (1.0 + init.jitter * unit(rng));
        delta[n] = delta0 * (1.0 + init.jitter * unit(rng));
    }
    return {duration, std::move(omega), std::move(delta)};
}

namespace detail {

inline void fill_report_metrics(OptimizationReport& rep) {
    const auto traj = propagate<SymmetricModel>(rep.pulse, basis::gg());
    rep.infidelity = std::max(0.0, 1.0 - state_fidelity(basis::bell_target(), traj.states.back()));
    rep.rydberg_time = integrated_rydberg_time(traj, Quadrature::trapezoid);
    rep.eta = rep.rydberg_time;
    rep.pulse_area = rep.pulse.area();
}

/// Strict weak ordering used to pick the reported restart.
inline bool better_report(const OptimizationReport& a, const OptimizationReport& b,
                          double accept_infidelity) {
    const bool a_ok = a.infidelity <= accept_infidelity;
    const bool b_ok = b.infidelity <= accept_infidelity;
    if (a_ok != b_ok) return a_ok;
    if (a_ok) {
        if (a.eta != b.eta) return a.eta < b.eta;
    } else if (a.infidelity != b.infidelity) {
        return a.infidelity < b.infidelity;
    }
    return a.seed < b.seed;
}

}  // namespace detail

/// Penalty continuation from one starting pulse: minimizes -(F - gamma_k T_r) for each
/// gamma_k in the schedule, warm-starting every stage from the previous optimum.
inline OptimizationReport optimize_from(const OptimizationConfig& config, ControlPulse start,
                                        std::uint64_t seed = 0) {
    config.validate();
    const double duration = start.duration();
    Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(start.controls().data(),
                                                          static_cast<Eigen::Index>(2 * start.steps()));
    BfgsOptions bfgs = config.bfgs;
    if (config.control_bound) {
        const double bound = *config.control_bound;
        bfgs.projection = [bound](Eigen::VectorXd& v) { v = v.cwiseMax(-bound).cwiseMin(bound); };
    }

    OptimizationReport rep;
    rep.seed = seed;
    for (double gamma : config.gamma_schedule) {
        auto objective = [&](const Eigen::VectorXd& v, Eigen::VectorXd& grad) {
            const auto pulse = ControlPulse::from_controls(
                duration, std::span<const double>(v.data(), static_cast<std::size_t>(v.size())));
            const CostEvaluation ev = cost_and_gradient(pulse, gamma);
            const auto g = ev.gradient.flattened();
            grad = -Eigen::Map<const Eigen::VectorXd>(g.data(), v.size());
            return -ev.cost;
        };
        const BfgsResult res = bfgs_minimize(objective, x, bfgs);
        x = res.x;
        const auto pulse = ControlPulse::from_controls(
            duration, std::span<const double>(x.data(), static_cast<std::size_t>(x.size())));
        const CostEvaluation ev = cost_and_gradient(pulse, gamma);
        rep.trace.push_back({gamma, res.iterations, ev.cost, ev.fidelity, ev.rydberg_time,
                             res.converged});
    }
    rep.pulse = ControlPulse::from_controls(
        duration, std::span<const double>(x.data(), static_cast<std::size_t>(x.size())));
    detail::fill_report_metrics(rep);
    rep.success = rep.infidelity <= config.failure_infidelity;
    return rep;
}

/// Every restart of the multi-start search, indexed by restart. Restart r starts from
/// initial_pulse(..., init.seed + r); restarts are spread over config.threads workers.
inline std::vector<OptimizationReport> run_restarts(const OptimizationConfig& config) {
    config.validate();
    const int total = config.restarts;
    std::vector<OptimizationReport> runs(static_cast<std::size_t>(total));
    std::atomic<int> next{0};
    auto worker = [&] {
        for (int r = next++; r < total; r = next++) {
            const std::uint64_t seed = config.init.seed + static_cast<std::uint64_t>(r);
            auto rep = optimize_from(
                config, initial_pulse(config.duration, config.steps, config.init, seed), seed);
            rep.restart = r;
            runs[static_cast<std::size_t>(r)] = std::move(rep);
        }
    };
    const unsigned workers =
        std::max(1u, std::min(config.threads, static_cast<unsigned>(total)));
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    }
    return runs;
}

inline OptimizationReport select_best(std::vector<OptimizationReport> runs,
                                      double accept_infidelity) {
    if (runs.empty()) throw ValidationError("no optimization runs to select from");
    std::size_t best = 0;
    for (std::size_t r = 1; r < runs.size(); ++r) {
        if (detail::better_report(runs[r], runs[best], accept_infidelity)) best = r;
    }
    return std::move(runs[best]);
}

/// Multi-start GRAPE search for a pulse taking |gg> to (gg + sqrt(2) W - rr)/2 with minimal
/// Rydberg dwell time, reduced deterministically over restarts.
inline OptimizationReport optimize_bell_preparation(const OptimizationConfig& config) {
    return select_best(run_restarts(config), config.accept_infidelity);
}

/// Control sample count keeping dt at the default resolution (400 steps for BT = 6.8).
inline std::size_t default_steps(double duration) {
    return static_cast<std::size_t>(std::ceil(duration * 400.0 / 6.8 - 1e-9));
}

struct SweepPoint {
    double duration = 0.0;
    OptimizationReport report;
};

/// One multi-start optimization per duration; steps scale with the duration when
/// `scale_steps` is set.
inline std::vector<SweepPoint> sweep_durations(const OptimizationConfig& base,
                                               const std::vector<double>& durations,
                                               bool scale_steps = true) {
    std::vector<SweepPoint> out;
    for (double bt : durations) {
        OptimizationConfig cfg = base;
        cfg.duration = bt;
        if (scale_steps) cfg.steps = default_steps(bt);
        out.push_back({bt, optimize_bell_preparation(cfg)});
    }
    return out;
}

}  // namespace rydbound
