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
#include <optional>
#include <vector>

#include "rydbound/core/propagation.hpp"
#include "rydbound/core/schmidt.hpp"

namespace rydbound {

/// One row of the entropy-vs-population comparison along a trajectory.
struct EntropySample {
    double time = 0.0;
    double entropy = 0.0;
    double rydberg_population = 0.0;
    double entropy_rate = 0.0;
    bool analytic_rate = true;
    /// P_r / |dS/dt| and 1 / (dS/dt); empty where |dS/dt| < kMinRate.
    std::optional<double> ratio;
    std::optional<double> inverse_rate;

    bool valid() const { return ratio.has_value(); }
};

inline constexpr double kMinEntropyRate = 1e-9;

/// Min-entropy and Rydberg population at every snapshot, with dS/dt from the Schmidt data
/// where the spectrum allows it and from centered differences of S otherwise.
/// Snapshots are renormalized before the Schmidt analysis.
template <class Model>
std::vector<EntropySample> trajectory_entropy_analysis(const Trajectory<Model>& traj) {
    const std::size_t count = traj.states.size();
    std::vector<EntropySample> out(count);
    std::vector<SchmidtForm> forms;
    forms.reserve(count);
    for (std::size_t n = 0; n < count; ++n) {
        const typename Model::State psi = traj.states[n].normalized();
        forms.push_back(schmidt_decompose(to_bipartite(psi)));
        out[n].time = traj.time(n);
        out[n].entropy = min_entropy(forms.back());
        out[n].rydberg_population = rydberg_population(psi);
    }
    const double dt = traj.pulse.dt();
    for (std::size_t n = 0; n < count; ++n) {
        auto& row = out[n];
        try {
            row.entropy_rate = min_entropy_rate(forms[n], 1);
        } catch (const DegeneracyError&) {
            row.analytic_rate = false;
            if (count < 2) {
                row.entropy_rate = 0.0;
            } else if (n == 0) {
                row.entropy_rate = (out[1].entropy - out[0].entropy) / dt;
            } else if (n + 1 == count) {
                row.entropy_rate = (out[n].entropy - out[n - 1].entropy) / dt;
            } else {
                row.entropy_rate = (out[n + 1].entropy - out[n - 1].entropy) / (2.0 * dt);
            }
        }
        if (std::abs(row.entropy_rate) >= kMinEntropyRate) {
            row.ratio = row.rydberg_population / std::abs(row.entropy_rate);
            row.inverse_rate = 1.0 / row.entropy_rate;
        }
    }
    return out;
}

}  // namespace rydbound
