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


#include "randfit/memorization.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "randfit/gates.hpp"
#include "randfit/parallel.hpp"

namespace randfit {

namespace {

void check_same_size(std::span<const PureState> states) {
  if (states.empty()) throw std::invalid_argument("need at least one state");
  for (const auto& s : states) {
    if (s.num_qubits() != states[0].num_qubits()) {
      throw std::invalid_argument("states have different qubit counts");
    }
  }
}

Eigen::VectorXd to_vector(std::span<const double> v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

std::size_t register_size(std::size_t terms) {
  std::size_t a = 0;
  while ((std::size_t{1} << a) < terms) ++a;
  return std::max<std::size_t>(a, 1);
}

}  // namespace

double condition_number(const Eigen::MatrixXd& m) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& s = svd.singularValues();
  if (s.size() == 0) return std::numeric_limits<double>::infinity();
  const double lo = s[s.size() - 1];
  if (!(lo > 0.0)) return std::numeric_limits<double>::infinity();
  return s[0] / lo;
}

GramSystem gram_matrix(std::span<const PureState> states, const GramOptions& options) {
  check_same_size(states);
  const std::size_t N = states.size();
  GramSystem sys;
  sys.W.resize(static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(N));
  if (options.mode == GramMode::swap && options.shots == 0) {
    throw std::invalid_argument("swap-mode Gram estimation needs shots >= 1");
  }
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < N; ++i) {
    for (std::size_t j = i; j < N; ++j) pairs.emplace_back(i, j);
  }
  parallel_for(pairs.size(), options.workers, [&](std::size_t p) {
    const auto [i, j] = pairs[p];
    double v;
    if (options.mode == GramMode::exact) {
      v = overlap(states[i], states[j]);
    } else {
      Rng rng(derive_seed(options.seed, "gram-swap", p));
      v = swap_test_estimate(states[i], states[j], options.shots, rng);
    }
    const auto a = static_cast<Eigen::Index>(i), b = static_cast<Eigen::Index>(j);
    sys.W(a, b) = v;
    sys.W(b, a) = v;
  });
  sys.condition = condition_number(sys.W);
  return sys;
}

GramSystem cross_gram_matrix(std::span<const PureState> states,
                             std::span<const PureState> approximations) {
  check_same_size(states);
  if (approximations.size() != states.size()) {
    throw std::invalid_argument("need one approximation per state");
  }
  const auto N = static_cast<Eigen::Index>(states.size());
  GramSystem sys;
  sys.hatted = true;
  sys.W.resize(N, N);
  for (Eigen::Index i = 0; i < N; ++i) {
    for (Eigen::Index j = 0; j < N; ++j) {
      sys.W(i, j) = overlap(states[static_cast<std::size_t>(i)],
                            approximations[static_cast<std::size_t>(j)]);
    }
  }
  sys.condition = condition_number(sys.W);
  return sys;
}

const Eigen::VectorXd& solve_weights(GramSystem& sys, std::span<const double> y) {
  if (sys.W.rows() != sys.W.cols()) throw std::invalid_argument("W is not square");
  if (static_cast<Eigen::Index>(y.size()) != sys.W.rows()) {
    throw std::invalid_argument("target vector length does not match W");
  }
  sys.condition = condition_number(sys.W);
  if (sys.singular()) {
    throw IllConditionedError(sys.condition, "Gram matrix condition number " +
                                                 std::to_string(sys.condition) +
                                                 " exceeds the solve threshold");
  }
  sys.y = to_vector(y);
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(sys.W);
  Eigen::VectorXd z = qr.solve(sys.y);
  for (int it = 0; it < 3; ++it) {
    const Eigen::VectorXd r = sys.y - sys.W * z;
    z += qr.solve(r);
  }
  const double tol = 1e-8 * std::max(1.0, sys.y.cwiseAbs().maxCoeff());
  if ((sys.W * z - sys.y).cwiseAbs().maxCoeff() > tol) {
    throw std::runtime_error("linear solve did not reach the residual tolerance");
  }
  sys.z = std::move(z);
  sys.solved = true;
  return sys.z;
}

double exact_label_readout(std::span<const PureState> states,
                           std::span<const double> z, std::size_t i) {
  if (z.size() != states.size()) throw std::invalid_argument("z length does not match state count");
  if (i >= states.size()) throw std::out_of_range("readout index out of range");
  double sum = 0.0;
  for (std::size_t k = 0; k < states.size(); ++k) {
    if (z[k] != 0.0) sum += z[k] * overlap(states[i], states[k]);
  }
  return sum;
}

SamplingPlan make_sampling_plan(std::span<const double> z) {
  SamplingPlan plan;
  for (double v : z) plan.scale += std::abs(v);
  plan.probabilities.resize(z.size(), 0.0);
  plan.signs.resize(z.size(), 1.0);
  for (std::size_t k = 0; k < z.size(); ++k) {
    plan.signs[k] = z[k] < 0.0 ? -1.0 : 1.0;
    if (plan.scale > 0.0) plan.probabilities[k] = std::abs(z[k]) / plan.scale;
  }
  return plan;
}

double sampling_estimator(std::span<const PureState> states,
                          std::span<const double> z, std::size_t i,
                          std::uint64_t shots, Rng& rng, std::uint64_t batch) {
  if (shots < 1) throw std::invalid_argument("sampling estimator needs shots >= 1");
  if (batch < 1) throw std::invalid_argument("SWAP-test batch must be >= 1");
  if (z.size() != states.size()) throw std::invalid_argument("z length does not match state count");
  if (i >= states.size()) throw std::out_of_range("estimator index out of range");
  const SamplingPlan plan = make_sampling_plan(z);
  if (plan.scale == 0.0) return 0.0;
  std::discrete_distribution<std::size_t> pick(plan.probabilities.begin(),
                                               plan.probabilities.end());
  double acc = 0.0;
  for (std::uint64_t s = 0; s < shots; ++s) {
    const std::size_t k = pick(rng);
    acc += plan.signs[k] * swap_test_estimate(states[i], states[k], batch, rng);
  }
  return plan.scale * acc / static_cast<double>(shots);
}

AngleTree amplitude_encoding_angles(std::span<const double> p) {
  if (p.empty()) throw std::invalid_argument("empty probability vector");
  double sum = 0.0;
  for (double v : p) {
    if (!(v >= 0.0)) throw std::invalid_argument("probabilities must be nonnegative");
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-10) throw std::invalid_argument("probabilities must sum to 1");
  const std::size_t levels = register_size(p.size());
  const std::size_t L = std::size_t{1} << levels;
  std::vector<double> padded(L, 0.0);
  std::copy(p.begin(), p.end(), padded.begin());
  // Prefix sums make every subtree mass an O(1) lookup.
  std::vector<double> prefix(L + 1, 0.0);
  for (std::size_t j = 0; j < L; ++j) prefix[j + 1] = prefix[j] + padded[j];

  AngleTree tree(levels);
  for (std::size_t l = 0; l < levels; ++l) {
    const std::size_t width = L >> l, half = width / 2;
    tree[l].resize(std::size_t{1} << l);
    for (std::size_t b = 0; b < tree[l].size(); ++b) {
      const std::size_t start = b * width;
      const double left = std::max(0.0, prefix[start + half] - prefix[start]);
      const double right = std::max(0.0, prefix[start + width] - prefix[start + half]);
      tree[l][b] = (left + right > 0.0) ? 2.0 * std::atan2(std::sqrt(right), std::sqrt(left)) : 0.0;
    }
  }
  return tree;
}

Circuit amplitude_encoding_circuit(const AngleTree& angles, std::span<const Qubit> qubits) {
  if (qubits.size() != angles.size()) {
    throw std::invalid_argument("angle tree depth does not match register size");
  }
  const Eigen::MatrixXcd x = gates::pauli_x();
  Circuit c;
  for (std::size_t l = 0; l < angles.size(); ++l) {
    const std::vector<Qubit> controls(qubits.begin(), qubits.begin() + static_cast<std::ptrdiff_t>(l));
    for (std::size_t b = 0; b < angles[l].size(); ++b) {
      if (angles[l][b] == 0.0) continue;
      std::vector<GateOp> flips;
      for (std::size_t t = 0; t < l; ++t) {
        if (((b >> (l - 1 - t)) & 1U) == 0) flips.emplace_back(x, std::vector<Qubit>{qubits[t]});
      }
      c.insert(c.end(), flips.begin(), flips.end());
      c.emplace_back(gates::ry(angles[l][b]), std::vector<Qubit>{qubits[l]}, controls);
      c.insert(c.end(), flips.begin(), flips.end());
    }
  }
  return c;
}

std::vector<PureState> prepared_states(std::span<const Circuit> preps, std::size_t n) {
  std::vector<PureState> out;
  out.reserve(preps.size());
  for (const auto& c : preps) out.push_back(apply_circuit(PureState(n), c));
  return out;
}

LcuCircuit lcu_build(std::span<const Circuit> preps, std::span<const double> z,
                     std::size_t n) {
  if (preps.empty()) throw std::invalid_argument("LCU needs at least one prep circuit");
  if (z.size() != preps.size()) throw std::invalid_argument("z length does not match prep count");
  for (const auto& c : preps) {
    for (const auto& g : c) {
      if (g.min_qubits() > n) throw std::invalid_argument("prep circuit acts outside the input register");
    }
  }
  LcuCircuit lcu;
  lcu.num_input = n;
  lcu.num_terms = preps.size();
  lcu.num_aux = register_size(preps.size());
  const std::size_t L = std::size_t{1} << lcu.num_aux;

  const SamplingPlan plan = make_sampling_plan(z);
  lcu.scale = plan.scale;
  lcu.probabilities.assign(L, 0.0);
  lcu.aux_signs.assign(L, 0.0);
  if (plan.scale > 0.0) {
    for (std::size_t k = 0; k < preps.size(); ++k) {
      lcu.probabilities[k] = plan.probabilities[k];
      lcu.aux_signs[k] = plan.signs[k];
    }
  } else {
    lcu.probabilities[0] = 1.0;
  }
  std::vector<Qubit> aux(lcu.num_aux);
  for (std::size_t t = 0; t < lcu.num_aux; ++t) aux[t] = n + t;
  lcu.angles = amplitude_encoding_angles(lcu.probabilities);
  lcu.prep = amplitude_encoding_circuit(lcu.angles, aux);

  const Eigen::MatrixXcd x = gates::pauli_x();
  for (std::size_t k = 0; k < preps.size(); ++k) {
    Circuit flips;
    for (std::size_t t = 0; t < lcu.num_aux; ++t) {
      if (((k >> (lcu.num_aux - 1 - t)) & 1U) == 0) flips.emplace_back(x, std::vector<Qubit>{aux[t]});
    }
    Circuit cu = flips;
    for (const auto& g : inverse(preps[k])) cu.push_back(g.with_extra_controls(aux));
    cu.insert(cu.end(), flips.begin(), flips.end());
    lcu.controlled.push_back(std::move(cu));
  }
  return lcu;
}

double lcu_evaluate(const LcuCircuit& lcu, const PureState& input) {
  if (input.num_qubits() != lcu.num_input) {
    throw std::invalid_argument("input has " + std::to_string(input.num_qubits()) +
                                " qubits, LCU expects " + std::to_string(lcu.num_input));
  }
  if (lcu.scale == 0.0) return 0.0;
  const std::size_t total = lcu.num_qubits();
  std::vector<Complex> amps(std::size_t{1} << total, Complex(0.0));
  const auto in = input.amplitudes();
  for (std::size_t i = 0; i < in.size(); ++i) amps[i << lcu.num_aux] = in[i];
  kernels::apply(amps, total, lcu.prep);
  for (const auto& cu : lcu.controlled) kernels::apply(amps, total, cu);
  const PureState out = PureState::from_amplitudes(std::move(amps), 1e-8);

  DiagonalObservable obs;
  for (std::size_t t = 0; t < lcu.num_aux; ++t) obs.qubits.push_back(lcu.num_input + t);
  obs.values = lcu.aux_signs;
  std::vector<Qubit> proj(lcu.num_input);
  for (std::size_t q = 0; q < lcu.num_input; ++q) proj[q] = q;
  return lcu.scale * expectation(out, obs, proj);
}

Json gram_to_json(const GramSystem& sys) {
  Json W = Json::array();
  for (Eigen::Index i = 0; i < sys.W.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < sys.W.cols(); ++j) row.push_back(sys.W(i, j));
    W.push_back(std::move(row));
  }
  auto vec = [](const Eigen::VectorXd& v) {
    return std::vector<double>(v.data(), v.data() + v.size());
  };
  Json j = {{"W", std::move(W)}, {"hatted", sys.hatted}, {"solved", sys.solved}};
  j["condition"] = std::isfinite(sys.condition) ? Json(sys.condition) : Json(nullptr);
  if (sys.y.size()) j["y"] = vec(sys.y);
  if (sys.solved) j["z"] = vec(sys.z);
  return j;
}

Json sampling_plan_to_json(const SamplingPlan& plan) {
  return {{"probabilities", plan.probabilities}, {"signs", plan.signs}, {"scale", plan.scale}};
}

Json lcu_to_json(const LcuCircuit& lcu) {
  Json controlled = Json::array();
  for (const auto& c : lcu.controlled) controlled.push_back(circuit_to_json(c));
  return {{"num_input", lcu.num_input},
          {"num_aux", lcu.num_aux},
          {"num_terms", lcu.num_terms},
          {"angles", lcu.angles},
          {"probabilities", lcu.probabilities},
          {"prep", circuit_to_json(lcu.prep)},
          {"controlled", std::move(controlled)},
          {"aux_signs", lcu.aux_signs},
          {"scale", lcu.scale}};
}

LcuCircuit lcu_from_json(const Json& j) {
  LcuCircuit lcu;
  lcu.num_input = j.at("num_input").get<std::size_t>();
  lcu.num_aux = j.at("num_aux").get<std::size_t>();
  lcu.num_terms = j.at("num_terms").get<std::size_t>();
  lcu.angles = j.at("angles").get<AngleTree>();
  lcu.probabilities = j.at("probabilities").get<std::vector<double>>();
  lcu.prep = circuit_from_json(j.at("prep"));
  for (const auto& c : j.at("controlled")) lcu.controlled.push_back(circuit_from_json(c));
  lcu.aux_signs = j.at("aux_signs").get<std::vector<double>>();
  lcu.scale = j.at("scale").get<double>();
  if (lcu.aux_signs.size() != (std::size_t{1} << lcu.num_aux) ||
      lcu.controlled.size() != lcu.num_terms) {
    throw std::invalid_argument("inconsistent LCU JSON");
  }
  return lcu;
}

}  // namespace randfit
