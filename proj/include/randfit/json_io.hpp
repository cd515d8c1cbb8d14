// Copyright 2026 The randfit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <json.hpp>

#include "randfit/state.hpp"

// JSON forms of simulator objects. Complex numbers are [re, im] pairs.
//
//   state: {"n": 2, "amplitudes": [[re, im], ...]}
//   gate:  {"matrix": [[[re, im], ...], ...], "targets": [..], "controls": [..]}

namespace randfit {

using Json = nlohmann::json;

Json state_to_json(const PureState& state);
PureState state_from_json(const Json& j);

Json gate_to_json(const GateOp& gate);
GateOp gate_from_json(const Json& j);

Json circuit_to_json(const Circuit& circuit);
Circuit circuit_from_json(const Json& j);

}  // namespace randfit
