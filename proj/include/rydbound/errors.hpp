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

#include <stdexcept>
#include <string>

namespace rydbound {

/// Argument outside the mathematical domain of a closed-form function.
class DomainError : public std::domain_error {
   public:
    using std::domain_error::domain_error;
};

/// Malformed input: non-normalized state, invalid pulse, bad config.
class ValidationError : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

/// Analytic entropy rate requested where the Schmidt spectrum is degenerate.
class DegeneracyError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// The numerical minimization of the bound ratio found no valid state.
class OracleFailure : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

}  // namespace rydbound
