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

#include <complex>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "randfit/rng.hpp"

// Dense statevector simulation.
//
// Qubit ordering: qubit 0 is the most significant bit of a basis-state
// index. For n = 3 the index of |q0 q1 q2> is 4*q0 + 2*q1 + q2.

namespace randfit {

using Complex = std::complex<double>;
using Qubit = std::size_t;

inline constexpr double kNormTolerance = 1e-10;
inline constexpr double kUnitaryTolerance = 1e-10;

/// Normalized pure state over n qubits. Immutable: every operation that
/// changes amplitudes returns a new state.
class PureState {
 public:
  /// |0...0> on `num_qubits` qubits.
  explicit PureState(std::size_t num_qubits);

  /// Validates length 2^n and unit norm within `tolerance`.
  static PureState from_amplitudes(std::vector<Complex> amplitudes,
                                   double tolerance = kNormTolerance);
  /// Normalizes first; throws if the vector is zero or not length 2^n.
  static PureState normalized(std::vector<Complex> amplitudes);
  static PureState basis(std::size_t num_qubits, std::uint64_t index);

  std::size_t num_qubits() const { return n_; }
  std::size_t dimension() const { return amps_.size(); }
  std::span<const Complex> amplitudes() const { return amps_; }
  const Complex& operator[](std::size_t i) const { return amps_[i]; }

  double norm() const;

  friend bool operator==(const PureState&, const PureState&) = default;

 private:
  PureState(std::size_t n, std::vector<Complex> amps)
      : n_(n), amps_(std::move(amps)) {}

  std::size_t n_;
  std::vector<Complex> amps_;
};

/// A 1- or 2-qubit unitary with an optional list of control qubits that
/// activate on |1>. For two targets (t0, t1) the matrix row index is
/// 2*bit(t0) + bit(t1).
class GateOp {
 public:
  GateOp(Eigen::MatrixXcd matrix, std::vector<Qubit> targets,
         std::vector<Qubit> controls = {});

  const Eigen::MatrixXcd& matrix() const { return matrix_; }
  const std::vector<Qubit>& targets() const { return targets_; }
  const std::vector<Qubit>& controls() const { return controls_; }

  /// Largest qubit index touched, plus one.
  std::size_t min_qubits() const;

  GateOp adjoint() const;
  GateOp with_extra_controls(std::span<const Qubit> extra) const;
  GateOp remapped(std::span<const Qubit> mapping) const;

 private:
  Eigen::MatrixXcd matrix_;
  std::vector<Qubit> targets_;
  std::vector<Qubit> controls_;
};

/// Ordered gate list applied left to right.
using Circuit = std::vector<GateOp>;

/// Inverse circuit: reversed order, each gate adjointed.
Circuit inverse(const Circuit& circuit);

/// Real diagonal observable on a qubit subset; values are indexed by the
/// subset's computational basis with qubits[0] as the most significant bit.
struct DiagonalObservable {
  std::vector<Qubit> qubits;
  std::vector<double> values;
};

PureState apply_gate(const PureState& state, const GateOp& gate);
PureState apply_circuit(const PureState& state, const Circuit& circuit);

/// Outcome distribution on `qubits` (qubits[0] is the most significant bit
/// of the outcome index), every other qubit traced out.
std::vector<double> marginal_probs(const PureState& state,
                                   std::span<const Qubit> qubits);

/// <psi| (|0><0| on projector qubits) (x) diag(obs) (x) I |psi>.
double expectation(const PureState& state, const DiagonalObservable& obs,
                   std::span<const Qubit> projector_qubits);

/// |<a|b>|^2, equal to Tr(rho_a rho_b) for pure states.
double overlap(const PureState& a, const PureState& b);

/// SWAP-test estimate of Tr(rho_a rho_b): 2 * (#zeros / shots) - 1 with the
/// auxiliary outcome drawn from P(0) = (1 + overlap) / 2.
double swap_test_estimate(const PureState& a, const PureState& b,
                          std::uint64_t shots, Rng& rng);

// Serialization. Binary: little-endian {u32 n, 2^n x (f64 re, f64 im)}.
void write_state_binary(std::ostream& out, const PureState& state);
PureState read_state_binary(std::istream& in);

namespace kernels {

// In-place fast paths over raw amplitude buffers. Callers own the buffer;
// nothing here is visible through PureState.
void apply(std::span<Complex> amps, std::size_t num_qubits,
           const GateOp& gate);
void apply(std::span<Complex> amps, std::size_t num_qubits,
           const Circuit& circuit);

}  // namespace kernels

}  // namespace randfit
