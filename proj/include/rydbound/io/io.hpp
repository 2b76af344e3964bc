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

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rydbound/core/analysis.hpp"
#include "rydbound/core/propagation.hpp"
#include "rydbound/core/pulse.hpp"
#include "rydbound/errors.hpp"
#include "rydbound/grape/optimize.hpp"

namespace rydbound::io {

using nlohmann::json;

/// Shortest decimal that round-trips a double.
inline std::string format_real(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << (v == 0.0 ? 0.0 : v);
    return os.str();
}

inline std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    return out;
}

inline void check_written(std::ofstream& out, const std::filesystem::path& path) {
    out.flush();
    if (!out) throw IoError("write to '" + path.string() + "' failed");
}

inline json pulse_to_json(const ControlPulse& pulse) {
    const auto om = pulse.omega();
    const auto de = pulse.delta();
    return json{{"BT", pulse.duration()},
                {"N", pulse.steps()},
                {"omega", std::vector<double>(om.begin(), om.end())},
                {"delta", std::vector<double>(de.begin(), de.end())}};
}

namespace detail {

inline std::size_t line_of_offset(const std::string& text, std::size_t offset) {
    std::size_t line = 1;
    for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
        if (text[i] == '\n') ++line;
    }
    return line;
}

inline std::vector<double> real_array(const json& j, const char* field) {
    if (!j.contains(field)) throw ValidationError(std::string("pulse: missing field '") + field + "'");
    const json& a = j.at(field);
    if (!a.is_array()) throw ValidationError(std::string("pulse: field '") + field + "' must be an array");
    std::vector<double> out;
    out.reserve(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (!a[k].is_number()) {
            throw ValidationError(std::string("pulse: field '") + field + "[" + std::to_string(k) +
                                  "]' is not a number");
        }
        out.push_back(a[k].get<double>());
    }
    return out;
}

}  // namespace detail

inline ControlPulse pulse_from_json(const json& j) {
    if (!j.is_object()) throw ValidationError("pulse: top level must be an object");
    if (!j.contains("BT") || !j.at("BT").is_number()) {
        throw ValidationError("pulse: field 'BT' missing or not a number");
    }
    if (!j.contains("N") || !j.at("N").is_number_integer()) {
        throw ValidationError("pulse: field 'N' missing or not an integer");
    }
    const auto n = j.at("N").get<std::int64_t>();
    auto omega = detail::real_array(j, "omega");
    auto delta = detail::real_array(j, "delta");
    if (n < 0 || omega.size() != static_cast<std::size_t>(n) ||
        delta.size() != static_cast<std::size_t>(n)) {
        throw ValidationError("pulse: field 'N' = " + std::to_string(n) +
                              " does not match omega/delta lengths " + std::to_string(omega.size()) +
                              "/" + std::to_string(delta.size()));
    }
    return {j.at("BT").get<double>(), std::move(omega), std::move(delta)};
}

inline ControlPulse parse_pulse(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError("pulse: parse error at line " +
                              std::to_string(detail::line_of_offset(text, e.byte)) + ": " + e.what());
    }
    return pulse_from_json(j);
}

inline ControlPulse read_pulse(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
    std::stringstream buf;
    buf << in.rdbuf();
    try {
        return parse_pulse(buf.str());
    } catch (const ValidationError& e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
}

inline void write_json(const std::filesystem::path& path, const json& j) {
    auto out = open_output(path);
    out << j.dump(2) << '\n';
    check_written(out, path);
}

inline void write_pulse(const std::filesystem::path& path, const ControlPulse& pulse) {
    write_json(path, pulse_to_json(pulse));
}

/// Rows `t,P_gg,P_W,P_rr,P_r,S,ratio,inv_Sdot,norm_deficit`; populations are those of the
/// (possibly decayed) state, entropy columns of its normalized version.
inline void write_trajectory_csv(std::ostream& out, const Trajectory<SymmetricModel>& traj) {
    const auto samples = trajectory_entropy_analysis(traj);
    out << "t,P_gg,P_W,P_rr,P_r,S,ratio,inv_Sdot,norm_deficit\n";
    auto opt = [](const std::optional<double>& v) { return v ? format_real(*v) : std::string(); };
    for (std::size_t n = 0; n < traj.states.size(); ++n) {
        const SymmetricState& psi = traj.states[n];
        out << format_real(traj.time(n)) << ',' << format_real(std::norm(psi(0))) << ','
            << format_real(std::norm(psi(1))) << ',' << format_real(std::norm(psi(2))) << ','
            << format_real(rydberg_population<3>(psi)) << ',' << format_real(samples[n].entropy)
            << ',' << opt(samples[n].ratio) << ',' << opt(samples[n].inverse_rate) << ','
            << format_real(1.0 - psi.squaredNorm()) << '\n';
    }
}

inline void write_trajectory_csv(const std::filesystem::path& path,
                                 const Trajectory<SymmetricModel>& traj) {
    auto out = open_output(path);
    write_trajectory_csv(out, traj);
    check_written(out, path);
}

inline void write_trace_csv(std::ostream& out, const OptimizationReport& rep) {
    out << "stage,gamma,iterations,J,F,Tr,converged\n";
    for (std::size_t k = 0; k < rep.trace.size(); ++k) {
        const auto& s = rep.trace[k];
        out << k << ',' << format_real(s.gamma) << ',' << s.iterations << ',' << format_real(s.cost)
            << ',' << format_real(s.fidelity) << ',' << format_real(s.rydberg_time) << ','
            << (s.converged ? 1 : 0) << '\n';
    }
}

inline json report_to_json(const OptimizationReport& rep) {
    return json{{"BT", rep.pulse.duration()},
                {"N", rep.pulse.steps()},
                {"infidelity", rep.infidelity},
                {"Tr", rep.rydberg_time},
                {"eta", rep.eta},
                {"area", rep.pulse_area},
                {"seed", rep.seed},
                {"restart", rep.restart},
                {"success", rep.success}};
}

inline json config_to_json(const OptimizationConfig& c) {
    json j{{"BT", c.duration},
           {"N", c.steps},
           {"gamma_schedule", c.gamma_schedule},
           {"restarts", c.restarts},
           {"accept_infidelity", c.accept_infidelity},
           {"failure_infidelity", c.failure_infidelity},
           {"threads", c.threads},
           {"init",
            {{"name", c.init.name},
             {"seed", c.init.seed},
             {"area_min", c.init.area_min},
             {"area_max", c.init.area_max},
             {"delta_min", c.init.delta_min},
             {"delta_max", c.init.delta_max},
             {"jitter", c.init.jitter}}},
           {"bfgs",
            {{"max_iterations", c.bfgs.max_iterations},
             {"gradient_tolerance", c.bfgs.gradient_tolerance},
             {"wolfe_c1", c.bfgs.wolfe_c1},
             {"wolfe_c2", c.bfgs.wolfe_c2},
             {"max_line_search_evaluations", c.bfgs.max_line_search_evaluations}}}};
    j["control_bound"] = c.control_bound ? json(*c.control_bound) : json(nullptr);
    return j;
}

struct RunManifest {
    std::string subcommand;
    json config = json::object();
    std::uint64_t seed = 0;
    std::string version = RYDBOUND_VERSION;
    std::vector<std::string> outputs;

    json to_json() const {
        return json{{"subcommand", subcommand},
                    {"config", config},
                    {"seed", seed},
                    {"version", version},
                    {"outputs", outputs}};
    }
};

/// Writes `<first output>.manifest.json` (or `<fallback>` when there are no outputs).
inline std::filesystem::path write_manifest(const RunManifest& m,
                                            const std::filesystem::path& fallback) {
    const std::filesystem::path path =
        m.outputs.empty() ? fallback : std::filesystem::path(m.outputs.front() + ".manifest.json");
    write_json(path, m.to_json());
    return path;
}

}  // namespace rydbound::io
