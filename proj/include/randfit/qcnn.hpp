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

#include <array>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "randfit/dataset.hpp"
#include "randfit/json_io.hpp"
#include "randfit/phase.hpp"
#include "randfit/state.hpp"

namespace randfit {

/// One convolution + pooling stage of the QCNN.
///
/// Convolution: the stage's shared two-qubit unitary on every pair in
/// `conv_pairs` (even brick, then odd brick with periodic wrap).
/// Pooling: for each (control, target) in `pool_pairs`, the shared
/// single-qubit unitary on `target` controlled by `control` on |1>. The
/// control qubit is discarded afterwards (deferred measurement).
struct QcnnStage {
  std::vector<Qubit> active;
  std::vector<std::pair<Qubit, Qubit>> conv_pairs;
  std::vector<std::pair<Qubit, Qubit>> pool_pairs;
  std::size_t conv_offset;  // first flat index of the 15 conv parameters
  std::size_t pool_offset;  // first flat index of the 3 pooling parameters
};

class QcnnSpec {
 public:
  static constexpr const char* kLayoutTag = "qcnn-brick-v1";
  static constexpr std::size_t kParamsPerStage = 18;

  std::size_t num_qubits() const { return n_; }
  const std::vector<QcnnStage>& stages() const { return stages_; }
  std::array<Qubit, 2> output_qubits() const { return output_; }
  std::size_t param_count() const { return stages_.size() * kParamsPerStage; }

  /// Every gate slot as (first parameter index, parameter count).
  std::vector<std::pair<std::size_t, std::size_t>> sharing_map() const;

  /// Explicit gate list for parameters `theta` (controlled pooling gates
  /// included). Used by oracles and for export.
  Circuit circuit(std::span<const double> theta) const;

  Json describe() const;

 private:
  friend QcnnSpec build_qcnn(std::size_t, std::span<const Qubit>);
  std::size_t n_ = 0;
  std::vector<QcnnStage> stages_;
  std::array<Qubit, 2> output_{};
};

/// QCNN on n in {4, 8, 16} qubits with log2(n) - 1 stages. The active
/// qubits of the first stage are 0..n-1 in order.
QcnnSpec build_qcnn(std::size_t n);
/// Same layout with the chain read in the order given by `initial_order`
/// (a permutation of 0..n-1). Used to check translation covariance.
QcnnSpec build_qcnn(std::size_t n, std::span<const Qubit> initial_order);

using ParamVector = std::vector<double>;

/// Output distribution (p00, p01, p10, p11) on the output qubit pair.
std::array<double, 4> forward(const QcnnSpec& spec, std::span<const double> theta,
                              const PureState& state);

/// Reusable evaluator that builds the gate list once per theta.
/// Not thread-safe; use one per thread.
class QcnnEvaluator {
 public:
  QcnnEvaluator(const QcnnSpec& spec, std::span<const double> theta);
  std::array<double, 4> operator()(const PureState& state);

 private:
  const QcnnSpec& spec_;
  Circuit gates_;
  std::vector<Complex> buffer_;
};

/// argmin_b p_b; ties go to the lowest outcome index.
PhaseLabel predict(std::span<const double> probs);

/// Probability mass on the true label.
double sample_loss(std::span<const double> probs, PhaseLabel y);

/// Mean sample loss over the dataset (ordered summation).
double empirical_risk(const QcnnSpec& spec, std::span<const double> theta,
                      const LabeledDataset& dataset);

Json params_to_json(const QcnnSpec& spec, std::span<const double> theta);
ParamVector params_from_json(const Json& j, const QcnnSpec& spec);

// Binary: little-endian {u64 count, count x f64}.
void write_params_binary(std::ostream& out, std::span<const double> theta);
ParamVector read_params_binary(std::istream& in);

}  // namespace randfit
