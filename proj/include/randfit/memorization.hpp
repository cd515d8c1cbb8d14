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

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "randfit/json_io.hpp"
#include "randfit/rng.hpp"
#include "randfit/state.hpp"

// Exact label-fitting observables built from state overlaps, a sampling
// estimator for their expectation values, and an LCU circuit realizing the
// same observable from state-preparation circuits.

namespace randfit {

inline constexpr double kMaxCondition = 1e8;

class IllConditionedError : public std::runtime_error {
 public:
  IllConditionedError(double condition, const std::string& what)
      : std::runtime_error(what), condition_(condition) {}
  double condition() const { return condition_; }

 private:
  double condition_;
};

enum class GramMode { exact, swap };

struct GramOptions {
  GramMode mode = GramMode::exact;
  std::uint64_t shots = 0;  // swap mode only
  std::uint64_t seed = 0;
  std::size_t workers = 1;
};

/// W z = y. `hatted` marks a cross-Gram matrix W_ij = Tr(rho_i rho_hat_j),
/// which need not be symmetric.
struct GramSystem {
  Eigen::MatrixXd W;
  Eigen::VectorXd y;
  Eigen::VectorXd z;
  double condition = std::numeric_limits<double>::quiet_NaN();
  bool solved = false;
  bool hatted = false;

  /// Condition number above the solve threshold (including singular W).
  bool singular() const { return !(condition <= kMaxCondition); }
};

/// Euclidean condition number sigma_max / sigma_min (infinity if singular).
double condition_number(const Eigen::MatrixXd& m);

/// W_ij = |<psi_i|psi_j>|^2. Swap mode estimates each unordered pair once
/// with `shots` SWAP tests and mirrors it.
GramSystem gram_matrix(std::span<const PureState> states,
                       const GramOptions& options = {});

/// W_ij = |<psi_i|phi_j>|^2 for approximations phi_j.
GramSystem cross_gram_matrix(std::span<const PureState> states,
                             std::span<const PureState> approximations);

/// Solves W z = y (column-pivoted QR plus iterative refinement), stores z
/// and the condition number. Throws IllConditionedError if the condition
/// number exceeds kMaxCondition.
const Eigen::VectorXd& solve_weights(GramSystem& system, std::span<const double> y);

/// sum_k z_k |<psi_i|psi_k>|^2.
double exact_label_readout(std::span<const PureState> states,
                           std::span<const double> z, std::size_t i);

/// z_k = signs_k * probabilities_k * scale.
struct SamplingPlan {
  std::vector<double> probabilities;
  std::vector<double> signs;
  double scale = 0.0;
};

SamplingPlan make_sampling_plan(std::span<const double> z);

/// Monte-Carlo estimate of sum_k z_k Tr(rho_i rho_k): draw k ~ p, run
/// `batch` SWAP tests of (psi_i, psi_k), average s_k times the +-1 outcome,
/// multiply by the scale. batch == 1 is one Bernoulli draw per sample.
double sampling_estimator(std::span<const PureState> states,
                          std::span<const double> z, std::size_t i,
                          std::uint64_t shots, Rng& rng, std::uint64_t batch = 1);

/// Rotation tree for amplitude encoding: level l holds 2^l RY angles, one
/// per prefix of the first l register qubits. p is zero-padded to a power
/// of two (at least 2).
using AngleTree = std::vector<std::vector<double>>;
AngleTree amplitude_encoding_angles(std::span<const double> p);

/// Uniformly controlled RY cascade on `qubits` (qubits[0] most significant)
/// mapping |0...0> to sum_j sqrt(p_j) |j>.
Circuit amplitude_encoding_circuit(const AngleTree& angles,
                                   std::span<const Qubit> qubits);

struct LcuCircuit {
  std::size_t num_input = 0;  // input register: qubits [0, num_input)
  std::size_t num_aux = 0;    // auxiliary register follows the input
  std::size_t num_terms = 0;
  AngleTree angles;
  std::vector<double> probabilities;  // padded to 2^num_aux
  Circuit prep;                       // V on the auxiliary register
  std::vector<Circuit> controlled;    // CU_k: U_k^dagger controlled on |k>
  std::vector<double> aux_signs;      // +-1 for k < N, 0 for padding
  double scale = 0.0;

  std::size_t num_qubits() const { return num_input + num_aux; }
};

/// Builds the LCU for sum_k z_k U_k|0><0|U_k^dagger. Each prep circuit acts
/// on qubits [0, n).
LcuCircuit lcu_build(std::span<const Circuit> preps, std::span<const double> z,
                     std::size_t n);

/// scale * <|0><0|_input (x) O_aux> on CU V (|psi> (x) |0>).
double lcu_evaluate(const LcuCircuit& circuit, const PureState& input);

/// States U_k|0> for each prep.
std::vector<PureState> prepared_states(std::span<const Circuit> preps, std::size_t n);

Json gram_to_json(const GramSystem& system);
Json sampling_plan_to_json(const SamplingPlan& plan);
Json lcu_to_json(const LcuCircuit& circuit);
LcuCircuit lcu_from_json(const Json& j);

}  // namespace randfit
