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

#include "randfit/json_io.hpp"

#include <stdexcept>

namespace randfit {

namespace {

Json complex_to_json(const Complex& c) { return Json::array({c.real(), c.imag()}); }

Complex complex_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2) {
    throw std::invalid_argument("complex value must be a [re, im] pair");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

Json state_to_json(const PureState& state) {
  Json amps = Json::array();
  for (const auto& a : state.amplitudes()) amps.push_back(complex_to_json(a));
  return {{"n", state.num_qubits()}, {"amplitudes", std::move(amps)}};
}

PureState state_from_json(const Json& j) {
  std::vector<Complex> amps;
  for (const auto& a : j.at("amplitudes")) amps.push_back(complex_from_json(a));
  auto state = PureState::from_amplitudes(std::move(amps), 1e-9);
  if (j.contains("n") && j.at("n").get<std::size_t>() != state.num_qubits()) {
    throw std::invalid_argument("state JSON: n does not match amplitude count");
  }
  return state;
}

Json gate_to_json(const GateOp& gate) {
  Json rows = Json::array();
  const auto& m = gate.matrix();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return {{"matrix", std::move(rows)},
          {"targets", gate.targets()},
          {"controls", gate.controls()}};
}

GateOp gate_from_json(const Json& j) {
  const auto& rows = j.at("matrix");
  const auto dim = static_cast<Eigen::Index>(rows.size());
  Eigen::MatrixXcd m(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r) {
    if (rows[r].size() != rows.size()) {
      throw std::invalid_argument("gate JSON: matrix must be square");
    }
    for (Eigen::Index c = 0; c < dim; ++c) m(r, c) = complex_from_json(rows[r][c]);
  }
  std::vector<Qubit> controls;
  if (j.contains("controls")) controls = j.at("controls").get<std::vector<Qubit>>();
  return GateOp(std::move(m), j.at("targets").get<std::vector<Qubit>>(),
                std::move(controls));
}

Json circuit_to_json(const Circuit& circuit) {
  Json out = Json::array();
  for (const auto& g : circuit) out.push_back(gate_to_json(g));
  return out;
}

Circuit circuit_from_json(const Json& j) {
  Circuit c;
  for (const auto& g : j) c.push_back(gate_from_json(g));
  return c;
}

}  // namespace randfit
