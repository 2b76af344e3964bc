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

#include "rydbound/bound/closed_form.hpp"
#include "rydbound/bound/oracle.hpp"
#include "rydbound/core/analysis.hpp"
#include "rydbound/core/models.hpp"
#include "rydbound/core/propagation.hpp"
#include "rydbound/core/pulse.hpp"
#include "rydbound/core/schmidt.hpp"
#include "rydbound/errors.hpp"
#include "rydbound/grape/bfgs.hpp"
#include "rydbound/grape/gradients.hpp"
#include "rydbound/grape/optimize.hpp"
#include "rydbound/io/io.hpp"
#include "rydbound/protocols/protocols.hpp"
