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

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "rydbound/rydbound.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using rydbound::io::format_real;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitValidation = 2;
constexpr int kExitOptimization = 3;
constexpr int kExitIo = 4;

constexpr std::uint64_t kDefaultSeed = 7;

unsigned default_threads() {
    unsigned n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* cap = std::getenv("RYDBOUND_THREADS")) {
        try {
            const long v = std::stol(cap);
            if (v >= 1) n = std::min(n, static_cast<unsigned>(v));
        } catch (const std::exception&) {
            throw rydbound::ValidationError(std::string("RYDBOUND_THREADS is not an integer: ") + cap);
        }
    }
    return n;
}

struct Context {
    std::vector<std::string> argv;
    std::string manifest_override;
};

void emit_manifest(const Context& ctx, const std::string& subcommand, json config,
                   std::uint64_t seed, const std::vector<std::string>& outputs) {
    rydbound::io::RunManifest m;
    m.subcommand = subcommand;
    config["argv"] = ctx.argv;
    m.config = std::move(config);
    m.seed = seed;
    m.outputs = outputs;
    if (!ctx.manifest_override.empty()) {
        rydbound::io::write_json(ctx.manifest_override, m.to_json());
    } else if (!outputs.empty()) {
        rydbound::io::write_manifest(m, {});
    }
}

// ---------------------------------------------------------------------------------------------

struct BoundArgs {
    double s_min = 0.05;
    double s_max = 1.0;
    int points = 20;
    std::string out = "bound.csv";
};

int run_bound(const Context& ctx, const BoundArgs& a) {
    if (!(a.s_min > 0.0 && a.s_min <= a.s_max && a.s_max <= 1.0) || a.points < 1) {
        throw rydbound::ValidationError("s grid must satisfy 0 < s-min <= s-max <= 1, points >= 1");
    }
    auto out = rydbound::io::open_output(a.out);
    out << "s,G,Sdot,T_of_s0\n";
    for (int k = 0; k < a.points; ++k) {
        const double s = a.points == 1 ? a.s_max
                                       : a.s_min + (a.s_max - a.s_min) * k / (a.points - 1);
        const double t = s < 1.0 ? rydbound::optimal_duration(s) : 0.0;
        out << format_real(s) << ',' << format_real(rydbound::g_of_s(s)) << ','
            << format_real(rydbound::sdot_optimal(s)) << ',' << format_real(t) << '\n';
    }
    const auto eta = rydbound::eta_min();
    out << "eta_min," << format_real(eta.closed_form) << ',' << format_real(eta.quadrature) << ','
        << '\n';
    rydbound::io::check_written(out, a.out);
    std::cout << "eta_min closed form " << format_real(eta.closed_form) << ", quadrature "
              << format_real(eta.quadrature) << '\n';
    emit_manifest(ctx, "bound",
                  {{"s_min", a.s_min}, {"s_max", a.s_max}, {"points", a.points}, {"out", a.out}},
                  0, {a.out});
    return kExitOk;
}

// ---------------------------------------------------------------------------------------------

struct OptimizeArgs {
    double bt = 6.8;
    std::size_t steps = 0;
    std::uint64_t seed = kDefaultSeed;
    int restarts = 8;
    unsigned threads = 0;
    std::string out = "pulse.json";
    std::string trace;
    std::string report;
};

rydbound::OptimizationConfig make_config(double bt, std::size_t steps, std::uint64_t seed,
                                         int restarts, unsigned threads) {
    rydbound::OptimizationConfig c;
    c.duration = bt;
    c.steps = steps == 0 ? rydbound::default_steps(bt) : steps;
    c.init.seed = seed;
    c.restarts = restarts;
    c.threads = threads == 0 ? default_threads() : threads;
    return c;
}

int run_optimize(const Context& ctx, const OptimizeArgs& a) {
    const auto config = make_config(a.bt, a.steps, a.seed, a.restarts, a.threads);
    config.validate();
    std::cout << "seed " << config.init.seed << ", " << config.restarts << " restarts, "
              << config.threads << " threads, N = " << config.steps << '\n';
    const auto rep = rydbound::optimize_bell_preparation(config);

    std::vector<std::string> outputs{a.out};
    rydbound::io::write_pulse(a.out, rep.pulse);
    if (!a.trace.empty()) {
        auto out = rydbound::io::open_output(a.trace);
        rydbound::io::write_trace_csv(out, rep);
        rydbound::io::check_written(out, a.trace);
        outputs.push_back(a.trace);
    }
    if (!a.report.empty()) {
        rydbound::io::write_json(a.report, rydbound::io::report_to_json(rep));
        outputs.push_back(a.report);
    }
    json cfg = rydbound::io::config_to_json(config);
    cfg["out"] = a.out;
    cfg["trace"] = a.trace;
    cfg["report"] = a.report;
    emit_manifest(ctx, "optimize", cfg, config.init.seed, outputs);

    std::cout << "infidelity " << rep.infidelity << ", eta " << std::setprecision(8) << rep.eta
              << ", area " << rep.pulse_area << ", seed " << rep.seed << '\n';
    if (!rep.success) {
        std::cerr << "optimization failed: best infidelity " << rep.infidelity << '\n';
        return kExitOptimization;
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------------------------

struct SweepArgs {
    double bt_min = 4.0;
    double bt_max = 12.0;
    int points = 9;
    std::vector<double> bt_list;
    std::uint64_t seed = kDefaultSeed;
    int restarts = 8;
    unsigned threads = 0;
    std::string out = "sweep.csv";
};

int run_sweep(const Context& ctx, const SweepArgs& a) {
    std::vector<double> grid = a.bt_list;
    if (grid.empty()) {
        if (a.points < 1 || a.bt_max < a.bt_min) throw rydbound::ValidationError("empty BT range");
        for (int k = 0; k < a.points; ++k) {
            grid.push_back(a.points == 1 ? a.bt_min
                                         : a.bt_min + (a.bt_max - a.bt_min) * k / (a.points - 1));
        }
    }
    const auto base = make_config(grid.front(), 0, a.seed, a.restarts, a.threads);
    for (double bt : grid) {
        auto c = base;
        c.duration = bt;
        c.validate();
    }
    auto out = rydbound::io::open_output(a.out);
    out << "BT,infidelity,eta,area,seed\n";
    int failures = 0;
    for (double bt : grid) {
        const auto point = rydbound::sweep_durations(base, {bt}).front();
        const auto& r = point.report;
        if (!r.success) ++failures;
        out << format_real(bt) << ',' << format_real(r.infidelity) << ',' << format_real(r.eta)
            << ',' << format_real(r.pulse_area) << ',' << r.seed << '\n';
        out.flush();
        std::cout << "BT " << bt << ": infidelity " << r.infidelity << ", eta "
                  << std::setprecision(8) << r.eta << '\n';
    }
    rydbound::io::check_written(out, a.out);
    json cfg = rydbound::io::config_to_json(base);
    cfg["BT_grid"] = grid;
    cfg["out"] = a.out;
    emit_manifest(ctx, "sweep", cfg, a.seed, {a.out});
    if (failures > 0) {
        std::cerr << failures << " sweep point(s) failed to converge\n";
        return kExitOptimization;
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------------------------

struct SimulateArgs {
    std::string pulse;
    double gamma = 0.0;
    std::string out = "trajectory.csv";
};

int run_simulate(const Context& ctx, const SimulateArgs& a) {
    const auto pulse = rydbound::io::read_pulse(a.pulse);
    const auto traj =
        rydbound::propagate<rydbound::SymmetricModel>(pulse, rydbound::basis::gg(), a.gamma);
    rydbound::io::write_trajectory_csv(a.out, traj);
    const auto& last = traj.states.back();
    std::cout << "final populations gg " << std::norm(last(0)) << ", W " << std::norm(last(1))
              << ", rr " << std::norm(last(2)) << "; norm deficit " << 1.0 - last.squaredNorm()
              << '\n';
    emit_manifest(ctx, "simulate", {{"pulse", a.pulse}, {"gamma", a.gamma}, {"out", a.out}}, 0,
                  {a.out});
    return kExitOk;
}

// ---------------------------------------------------------------------------------------------

struct VerifyArgs {
    std::string suite = "all";
    std::uint64_t seed = kDefaultSeed;
    std::string out;
    std::string oracle_csv;
};

json check(const std::string& name, bool pass, json detail) {
    return {{"check", name}, {"pass", pass}, {"detail", std::move(detail)}};
}

json verify_gradients(std::uint64_t seed) {
    json checks = json::array();
    const rydbound::InitStrategy init;
    for (double gamma : {0.0, 1.0}) {
        double worst = 0.0;
        double worst_ratio_error = 0.0;
        for (int k = 0; k < 10; ++k) {
            const auto coarse = rydbound::initial_pulse(6.8, 2000, init, seed + k);
            const auto fine = rydbound::initial_pulse(6.8, 4000, init, seed + k);
            const double d1 =
                rydbound::finite_difference_check(coarse, gamma, 1e-6).max_relative_deviation;
            const double d2 =
                rydbound::finite_difference_check(fine, gamma, 1e-6).max_relative_deviation;
            worst = std::max(worst, d1);
            worst_ratio_error = std::max(worst_ratio_error, std::abs(d1 / d2 / 2.0 - 1.0));
        }
        checks.push_back(check("fd_deviation_N2000_gamma" + format_real(gamma), worst <= 5e-3,
                               {{"max_deviation", worst}, {"tolerance", 5e-3}}));
        checks.push_back(check("fd_first_order_gamma" + format_real(gamma),
                               worst_ratio_error <= 0.2,
                               {{"max_halving_error", worst_ratio_error}, {"tolerance", 0.2}}));
    }
    return checks;
}

json verify_oracle(std::uint64_t seed, const std::string& csv_path) {
    json checks = json::array();
    std::ofstream csv;
    if (!csv_path.empty()) {
        csv = rydbound::io::open_output(csv_path);
        csv << "s,ratio_min,G,rel_err,restarts,d\n";
    }
    for (int d : {2, 3}) {
        for (double s : {0.1, 0.3, 0.5, 0.7, 0.9}) {
            const auto res = rydbound::minimize_ratio_numeric(s, d, 64, seed);
            const double g = rydbound::g_of_s(s);
            const double rel = std::abs(res.ratio_min / g - 1.0);
            const bool support = d == 2 || res.argmin.coeffs(2) <= 1e-3;
            checks.push_back(check("oracle_d" + std::to_string(d) + "_s" + format_real(s),
                                   rel <= 1e-3 && support,
                                   {{"ratio_min", res.ratio_min}, {"G", g}, {"rel_err", rel}}));
            if (csv.is_open()) {
                csv << format_real(s) << ',' << format_real(res.ratio_min) << ',' << format_real(g)
                    << ',' << format_real(rel) << ',' << res.restarts_used << ',' << d << '\n';
            }
        }
    }
    if (csv.is_open()) rydbound::io::check_written(csv, csv_path);
    return checks;
}

json verify_weak_bound(std::uint64_t seed) {
    json checks = json::array();
    const auto m = rydbound::weak_bound_max();
    const auto c = rydbound::weak_bound_constants();
    checks.push_back(check("max_f", std::abs(m.value - 0.478) <= 1e-3,
                           {{"value", m.value}, {"theta", m.theta}}));
    checks.push_back(check("rate_constant", std::abs(c.rate_constant - 0.956) <= 1e-3,
                           {{"value", c.rate_constant}}));
    checks.push_back(check("eta_weak", std::abs(c.eta_weak - 1.05) <= 0.01, {{"value", c.eta_weak}}));
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    int violations = 0;
    for (int k = 0; k < 1000; ++k) {
        Eigen::MatrixXcd amps(2, 2);
        for (int i = 0; i < 4; ++i) amps(i / 2, i % 2) = rydbound::cd(g(rng), g(rng));
        amps /= amps.norm();
        if (!rydbound::vn_rate_bound_check(rydbound::make_bipartite(amps, 1)).satisfied) {
            ++violations;
        }
    }
    checks.push_back(check("vn_rate_inequality", violations == 0,
                           {{"states", 1000}, {"violations", violations}}));
    return checks;
}

int run_verify(const Context& ctx, const VerifyArgs& a) {
    json checks = json::array();
    auto append = [&](const json& more) {
        for (const auto& c : more) checks.push_back(c);
    };
    if (a.suite == "gradients" || a.suite == "all") append(verify_gradients(a.seed));
    if (a.suite == "oracle" || a.suite == "all") append(verify_oracle(a.seed, a.oracle_csv));
    if (a.suite == "weakbound" || a.suite == "all") append(verify_weak_bound(a.seed));
    bool ok = true;
    for (const auto& c : checks) ok = ok && c.at("pass").get<bool>();
    const json verdict{{"suite", a.suite}, {"seed", a.seed}, {"pass", ok}, {"checks", checks}};
    std::cout << verdict.dump(2) << '\n';
    std::vector<std::string> outputs;
    if (!a.out.empty()) {
        rydbound::io::write_json(a.out, verdict);
        outputs.push_back(a.out);
    }
    if (!a.oracle_csv.empty()) outputs.push_back(a.oracle_csv);
    emit_manifest(ctx, "verify",
                  {{"suite", a.suite}, {"out", a.out}, {"oracle_csv", a.oracle_csv}}, a.seed,
                  outputs);
    return ok ? kExitOk : kExitCheckFailed;
}

// ---------------------------------------------------------------------------------------------

int run_protocols() {
    const auto naive = rydbound::naive_protocol();
    const auto cz2 = rydbound::cz_wait_protocol_d2();
    const auto cz3 = rydbound::cz_wait_protocol_d3();
    auto field = [](const std::optional<double>& v) {
        std::ostringstream os;
        if (v) os << std::fixed << std::setprecision(6) << *v;
        else os << "-";
        return os.str();
    };
    std::cout << std::left << std::setw(24) << "name" << std::setw(12) << "eta_state"
              << std::setw(12) << "eta_gate" << "checks\n";
    bool ok = true;
    for (const auto* r : {&naive, &cz2.report, &cz3.report}) {
        std::cout << std::setw(24) << r->name << std::setw(12) << field(r->eta_state)
                  << std::setw(12) << field(r->eta_gate) << (r->checks_passed ? "pass" : "FAIL")
                  << '\n';
        ok = ok && r->checks_passed;
    }
    return ok ? kExitOk : kExitCheckFailed;
}

int run_weyl(const std::string& pulse_path) {
    const auto pulse = rydbound::io::read_pulse(pulse_path);
    const auto w = rydbound::weyl_coordinates(rydbound::pulse_unitary(pulse));
    std::cout << std::setprecision(8) << "canonical " << w.canonical[0] << ' ' << w.canonical[1]
              << ' ' << w.canonical[2] << '\n'
              << "folded    " << w.folded[0] << ' ' << w.folded[1] << ' ' << w.folded[2] << '\n';
    return kExitOk;
}

int dispatch(std::vector<std::string> args, const std::string& manifest_override);

int run_replay(const std::string& manifest_path) {
    std::ifstream in(manifest_path);
    if (!in) throw rydbound::IoError("cannot open '" + manifest_path + "' for reading");
    json m;
    try {
        m = json::parse(in);
    } catch (const json::parse_error& e) {
        throw rydbound::ValidationError(manifest_path + ": " + e.what());
    }
    if (!m.contains("config") || !m["config"].contains("argv")) {
        throw rydbound::ValidationError(manifest_path + ": missing config.argv");
    }
    return dispatch(m["config"]["argv"].get<std::vector<std::string>>(), {});
}

int dispatch(std::vector<std::string> args, const std::string& manifest_override) {
    CLI::App app{"Rydberg entanglement error bound and GRAPE pulse toolkit", "rydbound"};
    app.set_version_flag("--version", std::string(RYDBOUND_VERSION));
    app.require_subcommand(1);

    Context ctx{args, manifest_override};
    app.add_option("--manifest", ctx.manifest_override, "Write the run manifest to this path");

    BoundArgs bound;
    auto* b = app.add_subcommand("bound", "Tabulate G(s), optimal rate and duration");
    b->add_option("--s-min", bound.s_min)->capture_default_str();
    b->add_option("--s-max", bound.s_max)->capture_default_str();
    b->add_option("--points", bound.points)->capture_default_str();
    b->add_option("--out", bound.out)->capture_default_str();

    OptimizeArgs opt;
    auto* o = app.add_subcommand("optimize", "GRAPE Bell-state preparation");
    o->add_option("--BT", opt.bt, "Pulse duration in units of 1/B")->capture_default_str();
    o->add_option("--N", opt.steps, "Control steps (default scales with BT)");
    o->add_option("--seed", opt.seed)->capture_default_str();
    o->add_option("--restarts", opt.restarts)->capture_default_str();
    o->add_option("--threads", opt.threads, "Worker threads (default: RYDBOUND_THREADS or all)");
    o->add_option("--out", opt.out)->capture_default_str();
    o->add_option("--trace", opt.trace, "Per-stage trace CSV");
    o->add_option("--report", opt.report, "Report JSON");

    SweepArgs sw;
    auto* s = app.add_subcommand("sweep", "Optimize over a range of pulse durations");
    s->add_option("--BT-min", sw.bt_min)->capture_default_str();
    s->add_option("--BT-max", sw.bt_max)->capture_default_str();
    s->add_option("--points", sw.points)->capture_default_str();
    s->add_option("--BT", sw.bt_list, "Explicit durations (overrides the range)")->delimiter(',');
    s->add_option("--seed", sw.seed)->capture_default_str();
    s->add_option("--restarts", sw.restarts)->capture_default_str();
    s->add_option("--threads", sw.threads);
    s->add_option("--out", sw.out)->capture_default_str();

    SimulateArgs sim;
    auto* m = app.add_subcommand("simulate", "Propagate a pulse from |gg> and export the trajectory");
    m->add_option("--pulse", sim.pulse)->required();
    m->add_option("--gamma", sim.gamma, "Decay rate in units of B")->capture_default_str();
    m->add_option("--out", sim.out)->capture_default_str();

    VerifyArgs ver;
    auto* v = app.add_subcommand("verify", "Run verification suites, JSON verdict on stdout");
    v->add_option("--suite", ver.suite)
        ->check(CLI::IsMember({"gradients", "oracle", "weakbound", "all"}))
        ->capture_default_str();
    v->add_option("--seed", ver.seed)->capture_default_str();
    v->add_option("--out", ver.out, "Also write the verdict to this file");
    v->add_option("--oracle-csv", ver.oracle_csv, "Oracle table s,ratio_min,G,rel_err,restarts,d");

    app.add_subcommand("protocols", "Reference protocol table");

    std::string weyl_pulse;
    auto* w = app.add_subcommand("weyl", "Weyl coordinates of a pulse's two-atom unitary");
    w->add_option("--pulse", weyl_pulse)->required();

    std::string replay_path;
    auto* r = app.add_subcommand("replay", "Re-run the command recorded in a manifest");
    r->add_option("manifest", replay_path)->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend() - 1);
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitValidation;
    }

    if (b->parsed()) return run_bound(ctx, bound);
    if (o->parsed()) return run_optimize(ctx, opt);
    if (s->parsed()) return run_sweep(ctx, sw);
    if (m->parsed()) return run_simulate(ctx, sim);
    if (v->parsed()) return run_verify(ctx, ver);
    if (w->parsed()) return run_weyl(weyl_pulse);
    if (r->parsed()) return run_replay(replay_path);
    return run_protocols();
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    try {
        return dispatch(args, {});
    } catch (const rydbound::IoError& e) {
        std::cerr << "I/O error: " << e.what() << '\n';
        return kExitIo;
    } catch (const rydbound::ValidationError& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return kExitValidation;
    } catch (const rydbound::DomainError& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitOptimization;
    }
}
