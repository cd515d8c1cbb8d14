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
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "randfit/json_io.hpp"
#include "randfit/rng.hpp"
#include "randfit/state.hpp"

namespace randfit {

/// Maps input state `index` to a prep circuit for an approximation of it.
/// std::nullopt signals failure; the failure state |0...0> is used instead.
struct ApproximationProtocol {
  using Procedure =
      std::function<std::optional<Circuit>(const PureState&, std::size_t index, Rng&)>;

  std::string tag;
  Procedure run;
  std::size_t gate_bound = 0;  // every produced circuit has at most this many gates
};

/// Returns the recorded prep of input `index` itself.
ApproximationProtocol exact_clone_protocol(std::vector<Circuit> preps);
/// Always fails.
ApproximationProtocol all_failure_protocol();
/// Random brickwork U of the given depth, measure U|psi> once in the
/// computational basis with outcome b, return a prep of U^dagger|b>.
ApproximationProtocol brickwork_snapshot_protocol(std::size_t n, std::size_t layers);

/// T[i][j][k] = Tr(rho_i sigma^j_k) with sigma^j_k = A_k(rho_j).
struct CrossGram {
  std::size_t N = 0;
  std::size_t m = 0;
  std::vector<double> values;             // row-major [i][j][k]
  std::vector<Circuit> preps;             // [j * m + k]
  std::vector<bool> failed;               // [j * m + k]
  std::vector<std::string> tags;          // per protocol

  double operator()(std::size_t i, std::size_t j, std::size_t k) const {
    return values[(i * N + j) * m + k];
  }
};

CrossGram build_crossgram(std::span<const PureState> states,
                          std::span<const ApproximationProtocol> protocols,
                          std::uint64_t seed, std::size_t workers = 1);

struct WhatReport {
  Eigen::MatrixXd W;
  double lambda_min_sym;  // smallest eigenvalue of (W + W^T) / 2
  double sigma_min;       // smallest singular value of W
  double norm;            // spectral norm of W
};

/// W_ij = sum_k alpha[j * m + k] T[i][j][k].
WhatReport assemble_what(const CrossGram& cg, std::span<const double> alpha);

enum class AlphaObjective { feasible_only, min_l1, min_l2 };

std::string to_string(AlphaObjective o);
AlphaObjective alpha_objective_from_string(const std::string& s);

struct SolverBudget {
  std::size_t iterations = 2000;  // per restart
  std::size_t restarts = 10;
  std::uint64_t seed = 0;
  std::size_t workers = 1;
};

struct AlphaSolution {
  std::vector<double> alpha;
  double lambda_min_sym;
  double sigma_min;
  double norm;
  AlphaObjective objective;
};

/// Either a certified solution or the failure sentinel.
struct AlphaResult {
  std::optional<AlphaSolution> solution;
  double best_lambda_min;  // best certificate reached over all restarts

  bool success() const { return solution.has_value(); }
};

/// Projected subgradient ascent on lambda_min((W + W^T) / 2) over alpha,
/// keeping ||W|| = N by rescaling. Succeeds once lambda_min >= kappa, which
/// certifies sigma_min(W) >= kappa. The step rule does not depend on kappa,
/// so lowering kappa cannot turn a success into a failure.
AlphaResult find_alpha(const CrossGram& cg, double kappa, AlphaObjective objective,
                       const SolverBudget& budget = {});

Json crossgram_to_json(const CrossGram& cg);
/// The failure sentinel serializes as {"alpha": 0, ...}.
Json alpha_result_to_json(const AlphaResult& result, double kappa);

}  // namespace randfit
