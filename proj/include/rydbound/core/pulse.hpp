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
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "rydbound/errors.hpp"

namespace rydbound {

/// Piecewise-constant drive: sample n holds on [n dt, (n+1) dt) with dt = duration / steps.
/// Rabi frequencies and detunings are in units of B, the duration in units of 1/B.
class ControlPulse {
   public:
    ControlPulse(double duration, std::vector<double> omega, std::vector<double> delta)
        : duration_(duration), omega_(std::move(omega)), delta_(std::move(delta)) {
        if (!(duration_ > 0.0) || !std::isfinite(duration_)) {
            throw ValidationError("pulse duration must be finite and positive, got " +
                                  std::to_string(duration_));
        }
        if (omega_.size() != delta_.size()) {
            throw ValidationError("pulse omega and delta sample counts differ (" +
                                  std::to_string(omega_.size()) + " vs " +
                                  std::to_string(delta_.size()) + ")");
        }
        if (omega_.size() < 2) {
            throw ValidationError("pulse needs at least 2 steps");
        }
        for (std::size_t n = 0; n < omega_.size(); ++n) {
            if (!std::isfinite(omega_[n]) || !std::isfinite(delta_[n])) {
                throw ValidationError("pulse sample " + std::to_string(n) + " is not finite");
            }
        }
    }

    static ControlPulse zero(double duration, std::size_t steps) {
        return {duration, std::vector<double>(steps, 0.0), std::vector<double>(steps, 0.0)};
    }

    static ControlPulse constant(double duration, std::size_t steps, double omega, double delta) {
        return {duration, std::vector<double>(steps, omega), std::vector<double>(steps, delta)};
    }

    /// Inverse of controls(): first half Omega, second half Delta.
    static ControlPulse from_controls(double duration, std::span<const double> x) {
        if (x.size() % 2 != 0) {
            throw ValidationError("control vector must have even length");
        }
        const std::size_t n = x.size() / 2;
        return {duration, std::vector<double>(x.begin(), x.begin() + n),
                std::vector<double>(x.begin() + n, x.end())};
    }

    std::vector<double> controls() const {
        std::vector<double> x(omega_);
        x.insert(x.end(), delta_.begin(), delta_.end());
        return x;
    }

    double duration() const { return duration_; }
    std::size_t steps() const { return omega_.size(); }
    double dt() const { return duration_ / static_cast<double>(omega_.size()); }
    std::span<const double> omega() const { return omega_; }
    std::span<const double> delta() const { return delta_; }

    /// Theta = sum |Omega_n| dt.
    double area() const {
        double a = 0.0;
        for (double o : omega_) a += std::abs(o);
        return a * dt();
    }

    bool operator==(const ControlPulse&) const = default;

   private:
    double duration_;
    std::vector<double> omega_;
    std::vector<double> delta_;
};

}  // namespace rydbound
