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

// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion.
//
//   rydbound_acceptance [--only 1,5,9] [--json results.json] [--record-only]
//   rydbound_acceptance --check results.json --criterion 4

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <unsupported/Eigen/KroneckerProduct>

#include "rydbound/rydbound.hpp"

namespace {

using namespace rydbound;
using nlohmann::json;
using std::numbers::pi;

struct Verdict {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

std::string fmt(double v, int precision = 6) {
    std::ostringstream os;
    os << std::setprecision(precision) << v;
    return os.str();
}

void print(const Verdict& v) {
    std::cout << (v.pass ? "[PASS] " : "[FAIL] ") << std::setw(2) << v.id << "  " << v.name
              << "  (" << std::fixed << std::setprecision(1) << v.seconds << " s)"
              << std::defaultfloat << "\n        " << v.detail << std::endl;
}

// Smooth random controls sampled at any resolution: same continuous pulse for every N.
ControlPulse smooth_random_pulse(double duration, std::size_t steps, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::array<double, 5> om{};
    std::array<double, 5> de{};
    for (int m = 0; m < 5; ++m) {
        om[m] = u(rng);
        de[m] = 0.5 * u(rng);
    }
    std::vector<double> omega(steps);
    std::vector<double> delta(steps);
    for (std::size_t n = 0; n < steps; ++n) {
        const double x = (static_cast<double>(n) + 0.5) / static_cast<double>(steps);
        double a = 1.0;
        double d = de[0];
        for (int m = 1; m < 5; ++m) {
            a += 0.5 * om[m] * std::sin(pi * m * x);
            d += de[m] * std::cos(pi * m * x);
        }
        omega[n] = 2.4 * std::sin(pi * x) * std::sin(pi * x) * a * (1.0 + 0.3 * om[0]);
        delta[n] = d;
    }
    return {duration, std::move(omega), std::move(delta)};
}

class Acceptance {
   public:
    Verdict eta_min_constant() {
        const auto e = eta_min();
        const bool ok = std::abs(e.closed_form - (1.0 + pi / 2.0)) <= 1e-15 &&
                        std::abs(e.quadrature - e.closed_form) <= 1e-9;
        return {1, "bound constant eta_min", ok,
                "closed form " + fmt(e.closed_form, 12) + ", quadrature " + fmt(e.quadrature, 12) +
                    ", |diff| " + fmt(std::abs(e.quadrature - e.closed_form), 3) + " <= 1e-9"};
    }

    Verdict oracle() {
        double worst_rel = 0.0;
        double worst_c3 = 0.0;
        for (int d : {2, 3}) {
            for (double s : {0.1, 0.3, 0.5, 0.7, 0.9}) {
                const auto res = minimize_ratio_numeric(s, d, 64, 1);
                worst_rel = std::max(worst_rel, std::abs(res.ratio_min / g_of_s(s) - 1.0));
                if (d == 3) worst_c3 = std::max(worst_c3, res.argmin.coeffs(2));
            }
        }
        return {2, "numerical ratio minimum vs closed form", worst_rel <= 1e-3 && worst_c3 <= 1e-3,
                "max relative error " + fmt(worst_rel, 3) + " <= 1e-3, max c3 (d=3) " +
                    fmt(worst_c3, 3) + " <= 1e-3"};
    }

    const std::vector<OptimizationReport>& headline_runs() {
        if (!headline_) {
            OptimizationConfig c;
            c.duration = 6.8;
            c.steps = 400;
            c.restarts = 8;
            headline_ = run_restarts(c);
        }
        return *headline_;
    }

    const OptimizationReport& converged() {
        if (!best_) best_ = select_best(headline_runs(), OptimizationConfig{}.accept_infidelity);
        return *best_;
    }

    Verdict headline() {
        const auto& r = converged();
        const bool ok = r.infidelity <= 1e-6 && r.eta <= 2.60 && r.pulse_area >= 2.2 &&
                        r.pulse_area <= 2.5;
        return {3, "GRAPE at BT = 6.8, N = 400, 8 restarts", ok,
                "infidelity " + fmt(r.infidelity, 3) + " <= 1e-6, eta " + fmt(r.eta, 8) +
                    " <= 2.60, area " + fmt(r.pulse_area) + " in [2.2, 2.5], seed " +
                    std::to_string(r.seed)};
    }

    Verdict sweep() {
        const double floor = eta_min().closed_form;
        const std::vector<double> grid{4.0, 5.0, 6.0, 6.8, 8.0, 10.0, 12.0};
        std::vector<double> eta;
        bool consistent = true;
        double lowest_accepted = std::numeric_limits<double>::infinity();
        std::ostringstream rows;
        for (double bt : grid) {
            std::vector<OptimizationReport> runs;
            if (bt == 6.8) {
                runs = headline_runs();
            } else {
                OptimizationConfig c;
                c.duration = bt;
                c.steps = default_steps(bt);
                c.restarts = 8;
                runs = run_restarts(c);
            }
            for (const auto& r : runs) {
                if (r.infidelity <= 1e-4) {
                    lowest_accepted = std::min(lowest_accepted, r.eta);
                    if (r.eta < floor - 0.05) consistent = false;
                }
            }
            const auto best = select_best(runs, OptimizationConfig{}.accept_infidelity);
            eta.push_back(best.eta);
            rows << " " << fmt(bt, 3) << ":" << fmt(best.eta, 7);
            std::cout << "        sweep BT " << bt << ": infidelity " << best.infidelity
                      << ", eta " << std::setprecision(8) << best.eta << std::endl;
        }
        bool monotone = true;
        for (std::size_t k = 1; k < eta.size(); ++k) monotone = monotone && eta[k] <= eta[k - 1] + 0.01;
        bool near = true;
        for (std::size_t k = 0; k < grid.size(); ++k) {
            if (grid[k] >= 6.0) near = near && std::abs(eta[k] - floor) <= 0.01 * floor;
        }
        return {4, "eta vs duration sweep", monotone && near && consistent,
                "eta by BT" + rows.str() + "; non-increasing within 0.01: " +
                    (monotone ? "yes" : "no") + "; within 1% of eta_min for BT >= 6: " +
                    (near ? "yes" : "no") + "; lowest eta with infidelity <= 1e-4: " +
                    fmt(lowest_accepted, 8) + " >= " + fmt(floor - 0.05, 8)};
    }

    Verdict trajectory_vs_bound() {
        const auto traj = propagate<SymmetricModel>(converged().pulse, basis::gg());
        const auto rows = trajectory_entropy_analysis(traj);
        double worst = std::numeric_limits<double>::infinity();
        int valid = 0;
        std::optional<double> crossing;
        for (std::size_t n = 0; n < rows.size(); ++n) {
            const auto& r = rows[n];
            if (!r.valid() || r.entropy <= 0.0) continue;
            ++valid;
            worst = std::min(worst, *r.ratio - g_of_s(std::min(r.entropy, 1.0)));
            if (!crossing && n > 0 && rows[n - 1].valid() && rows[n - 1].entropy < 0.5 &&
                r.entropy >= 0.5) {
                const double w = (0.5 - rows[n - 1].entropy) / (r.entropy - rows[n - 1].entropy);
                crossing = (1.0 - w) * *rows[n - 1].ratio + w * *r.ratio;
            }
        }
        const double g = g_of_s(0.5);
        const bool cross_ok = crossing && std::abs(*crossing / g - 1.0) <= 0.05;
        return {5, "trajectory ratio vs pointwise bound", valid > 0 && worst >= -0.02 && cross_ok,
                std::to_string(valid) + " valid samples, min(P_r/|dS/dt| - G(S)) " + fmt(worst) +
                    " >= -0.02; ratio at S = 0.5 " + (crossing ? fmt(*crossing) : "n/a") +
                    " vs G(0.5) = " + fmt(g) + " within 5%"};
    }

    Verdict gradients() {
        double worst = 0.0;
        double worst_halving = 0.0;
        for (double gamma : {0.0, 1.0}) {
            for (int k = 0; k < 10; ++k) {
                const double d1 =
                    finite_difference_check(smooth_random_pulse(6.8, 2000, 100 + k), gamma, 1e-6)
                        .max_relative_deviation;
                const double d2 =
                    finite_difference_check(smooth_random_pulse(6.8, 4000, 100 + k), gamma, 1e-6)
                        .max_relative_deviation;
                worst = std::max(worst, d1);
                worst_halving = std::max(worst_halving, std::abs(d1 / d2 / 2.0 - 1.0));
            }
        }
        return {6, "finite-difference gradient check", worst <= 5e-3 && worst_halving <= 0.2,
                "max deviation at N = 2000: " + fmt(worst, 3) +
                    " <= 5e-3; worst |dev(N)/dev(2N)/2 - 1| " + fmt(worst_halving, 3) +
                    " <= 0.2 (10 pulses, gamma 0 and 1)"};
    }

    Verdict weak_bound() {
        const auto m = weak_bound_max();
        const auto c = weak_bound_constants();
        std::mt19937_64 rng(2024);
        std::normal_distribution<double> g;
        int violations = 0;
        for (int k = 0; k < 1000; ++k) {
            Eigen::MatrixXcd amps(2, 2);
            for (int i = 0; i < 4; ++i) amps(i / 2, i % 2) = cd(g(rng), g(rng));
            amps /= amps.norm();
            if (!vn_rate_bound_check(make_bipartite(amps, 1)).satisfied) ++violations;
        }
        const bool ok = std::abs(m.value - 0.478) <= 1e-3 &&
                        std::abs(c.rate_constant - 0.956) <= 1e-3 &&
                        std::abs(c.eta_weak - 1.05) <= 0.01 && violations == 0;
        return {7, "von Neumann weak bound", ok,
                "max f " + fmt(m.value) + ", rate constant " + fmt(c.rate_constant) +
                    ", eta_weak " + fmt(c.eta_weak) + ", violations " +
                    std::to_string(violations) + "/1000"};
    }

    Verdict protocols() {
        const auto naive = naive_protocol();
        const auto cz2 = cz_wait_protocol_d2();
        const auto cz3 = cz_wait_protocol_d3();
        const double ratio = *naive.eta_state / eta_min().closed_form;
        const bool ok = std::abs(*naive.eta_state - pi) <= 1e-12 &&
                        std::abs(*naive.final_fidelity - 1.0) <= 1e-12 &&
                        std::abs(ratio - 1.2220) <= 1e-4 && naive.checks_passed &&
                        std::abs(*cz2.report.eta_gate - pi) <= 1e-12 && cz2.report.checks_passed &&
                        std::abs(*cz3.report.eta_gate - pi) <= 1e-12 && cz3.report.checks_passed;
        return {8, "reference protocols", ok,
                "naive eta " + fmt(*naive.eta_state, 12) + ", fidelity " +
                    fmt(*naive.final_fidelity, 15) + ", ratio " + fmt(ratio) + "; CZ d=2 eta_gate " +
                    fmt(*cz2.report.eta_gate, 12) + " (" + cz2.report.detail + "); CZ d=3 eta_gate " +
                    fmt(*cz3.report.eta_gate, 12) + " (" + cz3.report.detail + ")"};
    }

    Verdict decay_law() {
        constexpr double gamma = 1e-4;
        const auto& pulse = converged().pulse;
        const auto closed = propagate<SymmetricModel>(pulse, basis::gg());
        const auto open = propagate<SymmetricModel>(pulse, basis::gg(), gamma);
        const double deficit = 1.0 - open.states.back().squaredNorm();
        const double expected = gamma * integrated_rydberg_time(closed);
        const double rel = std::abs(deficit / expected - 1.0);
        return {9, "norm deficit vs Gamma T_r", rel <= 1e-2,
                "1 - |psi(T)|^2 = " + fmt(deficit, 8) + ", Gamma T_r = " + fmt(expected, 8) +
                    ", relative difference " + fmt(rel, 3) + " <= 1e-2"};
    }

    Verdict weyl() {
        const TwoQubitUnitary cz = Eigen::Vector4cd(1, 1, 1, -1).asDiagonal();
        const auto wcz = weyl_coordinates(cz);
        const bool cz_ok = std::abs(wcz.canonical[0] - pi / 2.0) <= 1e-8 &&
                           std::abs(wcz.canonical[1]) <= 1e-8 && std::abs(wcz.canonical[2]) <= 1e-8;

        const TwoQubitUnitary u = pulse_unitary(converged().pulse);
        const auto w = weyl_coordinates(u);
        const std::array<double, 3> expected{1.7, 0.31, 0.31};
        auto matches = [&](const std::array<double, 3>& c) {
            for (int i = 0; i < 3; ++i) {
                if (std::abs(c[i] - expected[i]) > 0.1) return false;
            }
            return true;
        };
        auto triple = [](const std::array<double, 3>& c) {
            return "(" + fmt(c[0], 4) + ", " + fmt(c[1], 4) + ", " + fmt(c[2], 4) + ")";
        };
        TwoQubitUnitary swap = TwoQubitUnitary::Zero();
        swap(0, 0) = swap(3, 3) = swap(1, 2) = swap(2, 1) = 1.0;
        const auto exchanged = weyl_coordinates(u * swap);
        const bool pulse_ok = matches(w.canonical) || matches(w.folded);
        return {10, "Weyl coordinates", cz_ok && pulse_ok,
                "CZ " + triple(wcz.canonical) + "; converged pulse canonical " +
                    triple(w.canonical) + ", folded " + triple(w.folded) +
                    " vs (1.7, 0.31, 0.31) +- 0.1; for reference, with atoms relabeled (U SWAP) " +
                    triple(exchanged.canonical) + ", folded " + triple(exchanged.folded)};
    }

   private:
    std::optional<std::vector<OptimizationReport>> headline_;
    std::optional<OptimizationReport> best_;
};

json to_json(const Verdict& v) {
    return {{"id", v.id}, {"name", v.name}, {"pass", v.pass}, {"detail", v.detail},
            {"seconds", v.seconds}};
}

int check_recorded(const std::string& path, int criterion) {
    std::ifstream in(path);
    if (!in) {
        std::cerr << "cannot read " << path << "\n";
        return 2;
    }
    const json all = json::parse(in);
    for (const auto& v : all.at("criteria")) {
        if (v.at("id").get<int>() != criterion) continue;
        print({criterion, v.at("name"), v.at("pass"), v.at("detail"), v.at("seconds")});
        return v.at("pass").get<bool>() ? 0 : 1;
    }
    std::cerr << "criterion " << criterion << " not recorded in " << path << "\n";
    return 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"rydbound acceptance checks"};
    std::vector<int> only;
    std::string json_path;
    std::string check_path;
    int criterion = 0;
    bool record_only = false;
    app.add_option("--only", only, "Run only these criteria")->delimiter(',');
    app.add_option("--json", json_path, "Write verdicts to this file");
    app.add_flag("--record-only", record_only, "Exit 0 once all verdicts are recorded");
    app.add_option("--check", check_path, "Report a recorded verdict instead of running");
    app.add_option("--criterion", criterion, "Criterion for --check");
    CLI11_PARSE(app, argc, argv);

    if (!check_path.empty()) return check_recorded(check_path, criterion);

    Acceptance acc;
    const std::vector<std::pair<int, std::function<Verdict()>>> table{
        {1, [&] { return acc.eta_min_constant(); }}, {2, [&] { return acc.oracle(); }},
        {3, [&] { return acc.headline(); }},         {4, [&] { return acc.sweep(); }},
        {5, [&] { return acc.trajectory_vs_bound(); }}, {6, [&] { return acc.gradients(); }},
        {7, [&] { return acc.weak_bound(); }},       {8, [&] { return acc.protocols(); }},
        {9, [&] { return acc.decay_law(); }},        {10, [&] { return acc.weyl(); }}};
    // Wall-clock limits for the criteria that state one.
    const std::map<int, double> limits{{1, 1.0}, {2, 60.0}, {6, 60.0}, {8, 1.0}};

    const std::set<int> selected(only.begin(), only.end());
    std::vector<Verdict> verdicts;
    int failures = 0;
    for (const auto& [id, run] : table) {
        if (!selected.empty() && !selected.count(id)) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = run();
        } catch (const std::exception& e) {
            v = {id, "criterion " + std::to_string(id), false, std::string("exception: ") + e.what()};
        }
        v.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (const auto it = limits.find(id); it != limits.end() && v.seconds > it->second) {
            v.pass = false;
            v.detail += "; runtime " + fmt(v.seconds, 3) + " s exceeds " + fmt(it->second) + " s";
        }
        print(v);
        if (!v.pass) ++failures;
        verdicts.push_back(v);
    }
    std::cout << verdicts.size() - failures << "/" << verdicts.size() << " criteria passed\n";

    if (!json_path.empty()) {
        json all{{"criteria", json::array()}};
        for (const auto& v : verdicts) all["criteria"].push_back(to_json(v));
        std::ofstream(json_path) << all.dump(2) << '\n';
    }
    return (failures == 0 || record_only) ? 0 : 1;
}
