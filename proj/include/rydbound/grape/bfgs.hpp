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
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace rydbound {

struct BfgsOptions {
    int max_iterations = 2000;
    /// Stop once the gradient max-norm falls to this level.
    double gradient_tolerance = 1e-9;
    double wolfe_c1 = 1e-4;
    double wolfe_c2 = 0.9;
    int max_line_search_evaluations = 40;
    /// Optional projection applied to every trial point (box constraints).
    std::function<void(Eigen::VectorXd&)> projection;
};

struct BfgsResult {
    Eigen::VectorXd x;
    double value = 0.0;
    Eigen::VectorXd gradient;
    int iterations = 0;
    int evaluations = 0;
    bool converged = false;
    std::string message;
    /// Objective at the start point and after every accepted step.
    std::vector<double> history;
};

namespace detail {

/// Minimizer of the cubic through (a, fa, ga) and (b, fb, gb), clamped to the interval.
inline double cubic_step(double a, double fa, double ga, double b, double fb, double gb) {
    const double d1 = ga + gb - 3.0 * (fa - fb) / (a - b);
    const double disc = d1 * d1 - ga * gb;
    const double lo = std::min(a, b);
    const double hi = std::max(a, b);
    if (disc >= 0.0) {
        const double d2 = std::copysign(std::sqrt(disc), b - a);
        const double t = b - (b - a) * (gb + d2 - d1) / (gb - ga + 2.0 * d2);
        const double margin = 0.1 * (hi - lo);
        if (std::isfinite(t) && t > lo + margin && t < hi - margin) return t;
    }
    return 0.5 * (a + b);
}

}  // namespace detail

/// Quasi-Newton minimization with a dense inverse-Hessian BFGS update and a line search
/// enforcing the strong Wolfe conditions (bracketing + cubic zoom).
///
/// `f(x, grad)` returns the objective and writes the gradient. On line-search failure the
/// inverse Hessian is reset once; a second failure ends the run with converged = false and
/// the best accepted iterate.
template <class Objective>
BfgsResult bfgs_minimize(Objective&& f, Eigen::VectorXd x0, const BfgsOptions& opt = {}) {
    using Eigen::VectorXd;
    const Eigen::Index n = x0.size();
    if (opt.projection) opt.projection(x0);

    BfgsResult res;
    res.x = std::move(x0);
    res.gradient.resize(n);
    res.value = f(res.x, res.gradient);
    res.evaluations = 1;
    res.history.push_back(res.value);

    Eigen::MatrixXd hinv = Eigen::MatrixXd::Identity(n, n);
    bool fresh_hessian = true;
    VectorXd trial(n);
    VectorXd trial_grad(n);

    auto evaluate = [&](const VectorXd& p, double alpha, double& fv, double& dv) {
        trial = res.x + alpha * p;
        if (opt.projection) opt.projection(trial);
        fv = f(trial, trial_grad);
        dv = trial_grad.dot(p);
        ++res.evaluations;
    };

    while (true) {
        if (res.gradient.cwiseAbs().maxCoeff() <= opt.gradient_tolerance) {
            res.converged = true;
            res.message = "gradient tolerance reached";
            return res;
        }
        if (res.iterations >= opt.max_iterations) {
            res.message = "iteration limit reached";
            return res;
        }

        VectorXd p = -(hinv * res.gradient);
        double d0 = res.gradient.dot(p);
        if (!(d0 < 0.0)) {
            hinv.setIdentity();
            fresh_hessian = true;
            p = -res.gradient;
            d0 = res.gradient.dot(p);
        }
        const double f0 = res.value;
        double alpha = fresh_hessian ? std::min(1.0, 1.0 / res.gradient.norm()) : 1.0;

        // Strong Wolfe line search.
        double a_prev = 0.0, f_prev = f0, d_prev = d0;
        double f_new = 0.0, d_new = 0.0;
        bool found = false;
        int budget = opt.max_line_search_evaluations;
        auto zoom = [&](double lo, double flo, double dlo, double hi, double fhi, double dhi) {
            while (budget-- > 0) {
                const double a = detail::cubic_step(lo, flo, dlo, hi, fhi, dhi);
                evaluate(p, a, f_new, d_new);
                if (!std::isfinite(f_new) || f_new > f0 + opt.wolfe_c1 * a * d0 || f_new >= flo) {
                    hi = a;
                    fhi = f_new;
                    dhi = d_new;
                } else {
                    if (std::abs(d_new) <= -opt.wolfe_c2 * d0) {
                        alpha = a;
                        return true;
                    }
                    if (d_new * (hi - lo) >= 0.0) {
                        hi = lo;
                        fhi = flo;
                        dhi = dlo;
                    }
                    lo = a;
                    flo = f_new;
                    dlo = d_new;
                }
                if (std::abs(hi - lo) <= 1e-16 * std::max(1.0, std::abs(lo))) break;
            }
            // Accept a sufficient-decrease point even if curvature failed.
            if (lo > 0.0 && flo < f0) {
                alpha = lo;
                evaluate(p, lo, f_new, d_new);
                return true;
            }
            return false;
        };
        for (int k = 0; budget-- > 0; ++k) {
            evaluate(p, alpha, f_new, d_new);
            if (!std::isfinite(f_new) || f_new > f0 + opt.wolfe_c1 * alpha * d0 ||
                (k > 0 && f_new >= f_prev)) {
                found = zoom(a_prev, f_prev, d_prev, alpha, f_new, d_new);
                break;
            }
            if (std::abs(d_new) <= -opt.wolfe_c2 * d0) {
                found = true;
                break;
            }
            if (d_new >= 0.0) {
                found = zoom(alpha, f_new, d_new, a_prev, f_prev, d_prev);
                break;
            }
            a_prev = alpha;
            f_prev = f_new;
            d_prev = d_new;
            alpha *= 2.0;
        }

        if (!found || !(f_new <= f0)) {
            if (fresh_hessian) {
                res.message = "line search failed";
                return res;
            }
            hinv.setIdentity();
            fresh_hessian = true;
            continue;
        }

        const VectorXd s = trial - res.x;
        const VectorXd y = trial_grad - res.gradient;
        res.x = trial;
        res.value = f_new;
        res.gradient = trial_grad;
        res.history.push_back(f_new);
        ++res.iterations;

        const double sy = s.dot(y);
        if (sy > 1e-12 * s.norm() * y.norm()) {
            if (fresh_hessian) {
                hinv *= sy / y.squaredNorm();
                fresh_hessian = false;
            }
            const double rho = 1.0 / sy;
            const VectorXd hy = hinv * y;
            const double yhy = y.dot(hy);
            // H <- (I - rho s y^T) H (I - rho y s^T) + rho s s^T, expanded as rank-2 terms.
            hinv.noalias() -= rho * (s * hy.transpose() + hy * s.transpose());
            hinv.noalias() += (rho * rho * yhy + rho) * (s * s.transpose());
        }
    }
}

}  // namespace rydbound
