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
#include <numeric>
#include <vector>

#include <Eigen/Dense>

namespace rydbound {

struct NelderMeadOptions {
    double initial_step = 0.5;
    double f_tolerance = 1e-14;
    double x_tolerance = 1e-10;
    int max_evaluations = 20000;
    /// Fresh simplices built around the incumbent after convergence.
    int polish_rounds = 4;
};

struct NelderMeadResult {
    Eigen::VectorXd x;
    double value = 0.0;
    int evaluations = 0;
};

/// Derivative-free simplex minimization with dimension-adaptive coefficients
/// (reflection 1, expansion 1 + 2/n, contraction 3/4 - 1/(2n), shrink 1 - 1/n).
template <class Objective>
NelderMeadResult nelder_mead(Objective&& f, const Eigen::VectorXd& start,
                             const NelderMeadOptions& opt = {}) {
    const int n = static_cast<int>(start.size());
    const double nd = static_cast<double>(n);
    const double alpha = 1.0;
    const double beta = 1.0 + 2.0 / nd;
    const double gamma = 0.75 - 0.5 / nd;
    const double delta = 1.0 - 1.0 / nd;

    NelderMeadResult best{start, f(start), 1};
    double step = opt.initial_step;

    for (int round = 0; round <= opt.polish_rounds; ++round) {
        std::vector<Eigen::VectorXd> pts(n + 1, best.x);
        std::vector<double> vals(n + 1, best.value);
        for (int i = 0; i < n; ++i) {
            pts[i + 1](i) += step;
            vals[i + 1] = f(pts[i + 1]);
            ++best.evaluations;
        }
        std::vector<int> order(n + 1);
        while (best.evaluations < opt.max_evaluations) {
            std::iota(order.begin(), order.end(), 0);
            std::stable_sort(order.begin(), order.end(),
                             [&](int a, int b) { return vals[a] < vals[b]; });
            const int lo = order.front();
            const int hi = order.back();
            const int second = order[n - 1];

            double diameter = 0.0;
            for (int i = 0; i <= n; ++i) {
                diameter = std::max(diameter, (pts[i] - pts[lo]).cwiseAbs().maxCoeff());
            }
            if (vals[hi] - vals[lo] <= opt.f_tolerance * (std::abs(vals[lo]) + 1e-300) &&
                diameter <= opt.x_tolerance) {
                break;
            }

            Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
            for (int i = 0; i <= n; ++i) {
                if (i != hi) centroid += pts[i];
            }
            centroid /= nd;

            const Eigen::VectorXd reflected = centroid + alpha * (centroid - pts[hi]);
            const double fr = f(reflected);
            ++best.evaluations;
            if (fr < vals[lo]) {
                const Eigen::VectorXd expanded = centroid + beta * (reflected - centroid);
                const double fe = f(expanded);
                ++best.evaluations;
                if (fe < fr) {
                    pts[hi] = expanded;
                    vals[hi] = fe;
                } else {
                    pts[hi] = reflected;
                    vals[hi] = fr;
                }
                continue;
            }
            if (fr < vals[second]) {
                pts[hi] = reflected;
                vals[hi] = fr;
                continue;
            }
            const bool outside = fr < vals[hi];
            const Eigen::VectorXd contracted =
                outside ? Eigen::VectorXd(centroid + gamma * (reflected - centroid))
                        : Eigen::VectorXd(centroid - gamma * (centroid - pts[hi]));
            const double fc = f(contracted);
            ++best.evaluations;
            if (fc < (outside ? fr : vals[hi])) {
                pts[hi] = contracted;
                vals[hi] = fc;
                continue;
            }
            for (int i = 0; i <= n; ++i) {
                if (i == lo) continue;
                pts[i] = pts[lo] + delta * (pts[i] - pts[lo]);
                vals[i] = f(pts[i]);
                ++best.evaluations;
            }
        }
        const auto it = std::min_element(vals.begin(), vals.end());
        const bool improved = *it < best.value;
        if (*it <= best.value) {
            best.value = *it;
            best.x = pts[static_cast<std::size_t>(it - vals.begin())];
        }
        if (best.evaluations >= opt.max_evaluations) break;
        if (!improved && round > 0) break;
        step *= 0.1;
    }
    return best;
}

}  // namespace rydbound
