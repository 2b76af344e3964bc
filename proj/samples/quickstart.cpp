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

// Bound constants, one short GRAPE run and the resulting trajectory diagnostics.

#include <iomanip>
#include <iostream>

#include "rydbound/rydbound.hpp"

int main() {
    using namespace rydbound;

    const EtaMin eta = eta_min();
    std::cout << std::setprecision(10) << "eta_min = " << eta.closed_form << " (quadrature "
              << eta.quadrature << ")\n";
    std::cout << "G(0.5) = " << g_of_s(0.5) << ", weak-bound rate constant "
              << weak_bound_constants().rate_constant << "\n";

    OptimizationConfig config;
    config.duration = 6.8;
    config.steps = 200;
    config.restarts = 1;
    const OptimizationReport rep = optimize_bell_preparation(config);
    std::cout << "GRAPE at BT = 6.8: infidelity " << rep.infidelity << ", eta " << rep.eta
              << ", area " << rep.pulse_area << "\n";

    const auto traj = propagate<SymmetricModel>(rep.pulse, basis::gg());
    double worst_gap = 0.0;
    for (const auto& row : trajectory_entropy_analysis(traj)) {
        if (!row.valid() || row.entropy <= 0.0 || row.entropy > 1.0) continue;
        worst_gap = std::min(worst_gap, *row.ratio - g_of_s(row.entropy));
    }
    std::cout << "min over trajectory of P_r/|dS/dt| - G(S): " << worst_gap << "\n";

    const auto w = weyl_coordinates(pulse_unitary(rep.pulse));
    std::cout << "Weyl coordinates " << w.canonical[0] << ", " << w.canonical[1] << ", "
              << w.canonical[2] << "\n";
    return rep.success ? 0 : 1;
}
