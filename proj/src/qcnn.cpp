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


#include "randfit/qcnn.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>

#include "randfit/gates.hpp"

namespace randfit {

namespace {

bool valid_size(std::size_t n) { return n == 4 || n == 8 || n == 16; }

std::span<const double, 15> conv_params(std::span<const double> theta,
                                        std::size_t offset) {
  return theta.subspan(offset).first<15>();
}

Eigen::Matrix2cd pool_matrix(std::span<const double> theta, std::size_t offset) {
  return gates::euler(theta[offset], theta[offset + 1], theta[offset + 2]);
}

void check_theta(const QcnnSpec& spec, std::span<const double> theta) {
  if (theta.size() != spec.param_count()) {
    throw std::invalid_argument("theta has " + std::to_string(theta.size()) +
                                " entries, QCNN needs " +
                                std::to_string(spec.param_count()));
  }
  for (double t : theta) {
    if (!std::isfinite(t)) throw std::invalid_argument("theta is not finite");
  }
}

void check_probs(std::span<const double> probs) {
  if (probs.size() != 4) throw std::invalid_argument("expected 4 outcome probabilities");
  double sum = 0.0;
  for (double p : probs) {
    if (!(p >= -1e-12) || !std::isfinite(p)) {
      throw std::invalid_argument("outcome probabilities must be nonnegative");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-6) {
    throw std::invalid_argument("outcome probabilities must sum to 1");
  }
}

}  // namespace

QcnnSpec build_qcnn(std::size_t n) {
  std::vector<Qubit> order(n);
  std::iota(order.begin(), order.end(), Qubit{0});
  return build_qcnn(n, order);
}

QcnnSpec build_qcnn(std::size_t n, std::span<const Qubit> initial_order) {
  if (!valid_size(n)) {
    throw std::invalid_argument("QCNN size must be 4, 8 or 16, got " +
                                std::to_string(n));
  }
  if (initial_order.size() != n) {
    throw std::invalid_argument("initial qubit order has the wrong length");
  }
  std::vector<Qubit> sorted(initial_order.begin(), initial_order.end());
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < n; ++i) {
    if (sorted[i] != i) throw std::invalid_argument("initial order is not a permutation");
  }

  QcnnSpec spec;
  spec.n_ = n;
  std::vector<Qubit> active(initial_order.begin(), initial_order.end());
  std::size_t offset = 0;
  while (active.size() > 2) {
    QcnnStage stage;
    stage.active = active;
    const std::size_t m = active.size();
    for (std::size_t i = 0; i + 1 < m; i += 2) {
      stage.conv_pairs.emplace_back(active[i], active[i + 1]);
    }
    for (std::size_t i = 1; i < m; i += 2) {
      stage.conv_pairs.emplace_back(active[i], active[(i + 1) % m]);
    }
    std::vector<Qubit> survivors;
    // Pooling orientation alternates between neighbouring pairs so the
    // two output qubits are not exchanged by a translation of the chain.
    for (std::size_t i = 0; i + 1 < m; i += 2) {
      const bool flip = (i / 2) % 2 == 1;
      const Qubit ctrl = flip ? active[i + 1] : active[i];
      const Qubit tgt = flip ? active[i] : active[i + 1];
      stage.pool_pairs.emplace_back(ctrl, tgt);
      survivors.push_back(tgt);
    }
    stage.conv_offset = offset;
    stage.pool_offset = offset + gates::kTwoQubitParams;
    offset += QcnnSpec::kParamsPerStage;
    spec.stages_.push_back(std::move(stage));
    active = std::move(survivors);
  }
  spec.output_ = {active[0], active[1]};
  return spec;
}

std::vector<std::pair<std::size_t, std::size_t>> QcnnSpec::sharing_map() const {
  std::vector<std::pair<std::size_t, std::size_t>> slots;
  for (const auto& st : stages_) {
    for (std::size_t k = 0; k < st.conv_pairs.size(); ++k) {
      slots.emplace_back(st.conv_offset, gates::kTwoQubitParams);
    }
    for (std::size_t k = 0; k < st.pool_pairs.size(); ++k) {
      slots.emplace_back(st.pool_offset, gates::kSingleQubitParams);
    }
  }
  return slots;
}

Circuit QcnnSpec::circuit(std::span<const double> theta) const {
  check_theta(*this, theta);
  Circuit c;
  for (const auto& st : stages_) {
    const Eigen::MatrixXcd u = gates::two_qubit_unitary(conv_params(theta, st.conv_offset));
    for (const auto& [a, b] : st.conv_pairs) c.emplace_back(u, std::vector<Qubit>{a, b});
    const Eigen::MatrixXcd v = pool_matrix(theta, st.pool_offset);
    for (const auto& [ctrl, tgt] : st.pool_pairs) {
      c.emplace_back(v, std::vector<Qubit>{tgt}, std::vector<Qubit>{ctrl});
    }
  }
  return c;
}

Json QcnnSpec::describe() const {
  Json stages = Json::array();
  for (const auto& st : stages_) {
    stages.push_back({{"active", st.active},
                      {"conv_pairs", st.conv_pairs},
                      {"pool_pairs", st.pool_pairs},
                      {"conv_offset", st.conv_offset},
                      {"pool_offset", st.pool_offset}});
  }
  return {{"layout", kLayoutTag},
          {"n", n_},
          {"stage_count", stages_.size()},
          {"param_count", param_count()},
          {"output", output_},
          {"stages", std::move(stages)}};
}

QcnnEvaluator::QcnnEvaluator(const QcnnSpec& spec, std::span<const double> theta)
    : spec_(spec), buffer_(std::size_t{1} << spec.num_qubits()) {
  gates_ = spec.circuit(theta);
}

std::array<double, 4> QcnnEvaluator::operator()(const PureState& state) {
  const std::size_t n = spec_.num_qubits();
  if (state.num_qubits() != n) {
    throw std::invalid_argument("state has " + std::to_string(state.num_qubits()) +
                                " qubits, QCNN expects " + std::to_string(n));
  }
  std::copy(state.amplitudes().begin(), state.amplitudes().end(), buffer_.begin());
  kernels::apply(buffer_, n, gates_);
  const auto [q0, q1] = spec_.output_qubits();
  const std::size_t s0 = n - 1 - q0, s1 = n - 1 - q1;
  std::array<double, 4> probs{};
  for (std::size_t i = 0; i < buffer_.size(); ++i) {
    const std::size_t b = (((i >> s0) & 1U) << 1) | ((i >> s1) & 1U);
    probs[b] += std::norm(buffer_[i]);
  }
  return probs;
}

std::array<double, 4> forward(const QcnnSpec& spec, std::span<const double> theta,
                              const PureState& state) {
  QcnnEvaluator eval(spec, theta);
  return eval(state);
}

PhaseLabel predict(std::span<const double> probs) {
  check_probs(probs);
  std::size_t best = 0;
  for (std::size_t b = 1; b < 4; ++b) {
    if (probs[b] < probs[best]) best = b;
  }
  return PhaseLabel::from_index(static_cast<unsigned>(best));
}

double sample_loss(std::span<const double> probs, PhaseLabel y) {
  check_probs(probs);
  return std::clamp(probs[y.index()], 0.0, 1.0);
}

double empirical_risk(const QcnnSpec& spec, std::span<const double> theta,
                      const LabeledDataset& dataset) {
  if (dataset.empty()) throw std::invalid_argument("empirical risk of an empty dataset");
  QcnnEvaluator eval(spec, theta);
  double sum = 0.0;
  for (const auto& item : dataset.items) sum += sample_loss(eval(item.state), item.label);
  return sum / static_cast<double>(dataset.size());
}

Json params_to_json(const QcnnSpec& spec, std::span<const double> theta) {
  check_theta(spec, theta);
  return {{"layout", QcnnSpec::kLayoutTag},
          {"n", spec.num_qubits()},
          {"stage_count", spec.stages().size()},
          {"theta", std::vector<double>(theta.begin(), theta.end())}};
}

ParamVector params_from_json(const Json& j, const QcnnSpec& spec) {
  if (j.value("layout", std::string()) != QcnnSpec::kLayoutTag) {
    throw std::invalid_argument("parameter file has an unknown layout tag");
  }
  if (j.at("n").get<std::size_t>() != spec.num_qubits() ||
      j.at("stage_count").get<std::size_t>() != spec.stages().size()) {
    throw std::invalid_argument("parameter file was made for a different QCNN");
  }
  auto theta = j.at("theta").get<ParamVector>();
  check_theta(spec, theta);
  return theta;
}

void write_params_binary(std::ostream& out, std::span<const double> theta) {
  auto put = [&out](std::uint64_t v) {
    char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<char>(v >> (8 * i));
    out.write(b, 8);
  };
  put(theta.size());
  for (double t : theta) put(std::bit_cast<std::uint64_t>(t));
  if (!out) throw std::runtime_error("failed to write parameters");
}

ParamVector read_params_binary(std::istream& in) {
  auto get = [&in]() {
    unsigned char b[8];
    if (!in.read(reinterpret_cast<char*>(b), 8)) {
      throw std::runtime_error("truncated parameter record");
    }
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
  };
  const std::uint64_t count = get();
  if (count > (1U << 20)) throw std::runtime_error("implausible parameter count");
  ParamVector theta(count);
  for (auto& t : theta) t = std::bit_cast<double>(get());
  return theta;
}

}  // namespace randfit
