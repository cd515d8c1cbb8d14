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

#include <span>

#include <Eigen/Dense>

#include "randfit/rng.hpp"
#include "randfit/state.hpp"

namespace randfit::gates {

Eigen::Matrix2cd pauli_x();
Eigen::Matrix2cd pauli_y();
Eigen::Matrix2cd pauli_z();
Eigen::Matrix2cd hadamard();

Eigen::Matrix2cd rx(double angle);
Eigen::Matrix2cd ry(double angle);
Eigen::Matrix2cd rz(double angle);

/// Euler form RZ(phi) RY(theta) RZ(lambda); identity at (0, 0, 0).
Eigen::Matrix2cd euler(double theta, double phi, double lambda);

/// exp(i (cx XX + cy YY + cz ZZ)).
Eigen::Matrix4cd interaction(double cx, double cy, double cz);

/// General two-qubit unitary in canonical form
///   (E(p[9..11]) (x) E(p[12..14])) * interaction(p[6..8]) *
///   (E(p[0..2]) (x) E(p[3..5]))
/// where E is `euler`. Fifteen parameters; identity when all are zero.
/// The first tensor factor acts on the first target.
Eigen::Matrix4cd two_qubit_unitary(std::span<const double, 15> params);

inline constexpr std::size_t kTwoQubitParams = 15;
inline constexpr std::size_t kSingleQubitParams = 3;

/// Haar-random unitary of size dim (QR of a complex Ginibre matrix with
/// the phase correction on R's diagonal).
Eigen::MatrixXcd haar_unitary(Eigen::Index dim, Rng& rng);

/// Brickwork circuit of Haar-random two-qubit gates on qubits
/// [offset, offset + n). Each layer covers even then odd neighbour pairs.
/// For n == 1 each layer is a single Haar single-qubit gate.
Circuit random_brickwork(std::size_t n, std::size_t layers, Rng& rng,
                         std::size_t offset = 0);

/// Haar-random pure state on n qubits.
PureState haar_state(std::size_t n, Rng& rng);

}  // namespace randfit::gates
