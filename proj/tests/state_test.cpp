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


#include "randfit/state.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <sstream>

#include "oracles.hpp"
#include "randfit/gates.hpp"

namespace randfit {
namespace {

using testing::dense_gate;
using testing::to_vec;

TEST(PureState, DefaultIsAllZeros) {
  PureState s(3);
  EXPECT_EQ(s.dimension(), 8u);
  EXPECT_EQ(s[0], Complex(1.0));
  for (std::size_t i = 1; i < 8; ++i) EXPECT_EQ(s[i], Complex(0.0));
}

TEST(PureState, RejectsBadAmplitudes) {
  EXPECT_THROW(PureState::from_amplitudes({1.0, 1.0}), std::invalid_argument);
  EXPECT_THROW(PureState::from_amplitudes({1.0, 0.0, 0.0}), std::invalid_argument);
  EXPECT_THROW(PureState::normalized({0.0, 0.0}), std::invalid_argument);
  EXPECT_NEAR(PureState::normalized({3.0, 4.0})[1].real(), 0.8, 1e-15);
}

TEST(PureState, BasisIndexUsesQubitZeroAsMostSignificant) {
  // |q0 q1 q2> = |100> has index 4.
  const PureState s = apply_gate(PureState(3), GateOp(gates::pauli_x(), {0}));
  EXPECT_EQ(s, PureState::basis(3, 4));
}

TEST(GateOp, Validation) {
  Eigen::Matrix2cd bad;
  bad << 1, 1, 0, 1;
  EXPECT_THROW(GateOp(bad, {0}), std::invalid_argument);
  EXPECT_THROW(GateOp(gates::pauli_x(), {0}, {0}), std::invalid_argument);
  EXPECT_THROW(GateOp(gates::pauli_x(), {0, 1}), std::invalid_argument);
  EXPECT_THROW(GateOp(Eigen::Matrix4cd::Identity(), {1, 1}), std::invalid_argument);
  EXPECT_THROW(GateOp(gates::pauli_x(), {0}, {1, 1}), std::invalid_argument);
  EXPECT_THROW(apply_gate(PureState(2), GateOp(gates::pauli_x(), {2})), std::out_of_range);
}

// Every kernel path (1 or 2 targets, any order, 0-2 controls) against the
// Kronecker-product expansion of the same gate.
TEST(Kernels, MatchBruteForceOperators) {
  Rng rng(11);
  for (std::size_t n = 1; n <= 3; ++n) {
    for (int trial = 0; trial < 40; ++trial) {
      std::vector<Qubit> qs(n);
      std::iota(qs.begin(), qs.end(), Qubit{0});
      std::shuffle(qs.begin(), qs.end(), rng);
      const std::size_t targets = (n >= 2 && trial % 2) ? 2 : 1;
      const std::size_t controls = std::min<std::size_t>(trial % 3, n - targets);
      std::vector<Qubit> t(qs.begin(), qs.begin() + static_cast<long>(targets));
      std::vector<Qubit> c(qs.begin() + static_cast<long>(targets),
                           qs.begin() + static_cast<long>(targets + controls));
      const GateOp g(gates::haar_unitary(Eigen::Index{1} << targets, rng), t, c);
      const PureState psi = gates::haar_state(n, rng);
      const testing::Vec expected = dense_gate(g, n) * to_vec(psi);
      const PureState got = apply_gate(psi, g);
      for (std::size_t i = 0; i < psi.dimension(); ++i) {
        EXPECT_NEAR(std::abs(got[i] - expected[static_cast<Eigen::Index>(i)]), 0.0, 1e-12);
      }
    }
  }
}

TEST(Circuit, InverseRoundTripAndNormPreservation) {
  Rng rng(5);
  for (std::size_t n = 1; n <= 5; ++n) {
    const Circuit c = gates::random_brickwork(n, 4, rng);
    const PureState psi = gates::haar_state(n, rng);
    const PureState mid = apply_circuit(psi, c);
    EXPECT_NEAR(mid.norm(), 1.0, 1e-12);
    const PureState back = apply_circuit(mid, inverse(c));
    for (std::size_t i = 0; i < psi.dimension(); ++i) {
      EXPECT_NEAR(std::abs(back[i] - psi[i]), 0.0, 1e-10);
    }
  }
}

TEST(GateOp, AdjointAndRemap) {
  Rng rng(2);
  const GateOp g(gates::haar_unitary(4, rng), {0, 2}, {1});
  const Eigen::MatrixXcd prod = g.matrix() * g.adjoint().matrix();
  EXPECT_TRUE(prod.isApprox(Eigen::Matrix4cd::Identity(), 1e-12));
  const std::vector<Qubit> map = {3, 0, 1};
  const GateOp r = g.remapped(map);
  EXPECT_EQ(r.targets(), (std::vector<Qubit>{3, 1}));
  EXPECT_EQ(r.controls(), (std::vector<Qubit>{0}));
  EXPECT_EQ(r.min_qubits(), 4u);
}

TEST(MarginalProbs, MatchesDirectSummation) {
  Rng rng(9);
  const PureState psi = gates::haar_state(4, rng);
  const std::vector<Qubit> qs = {3, 1};
  const auto p = marginal_probs(psi, qs);
  std::vector<double> ref(4, 0.0);
  for (std::size_t i = 0; i < 16; ++i) {
    const std::size_t b3 = i & 1, b1 = (i >> 2) & 1;
    ref[2 * b3 + b1] += std::norm(psi[i]);
  }
  for (int b = 0; b < 4; ++b) EXPECT_NEAR(p[b], ref[b], 1e-14);
  EXPECT_NEAR(std::accumulate(p.begin(), p.end(), 0.0), 1.0, 1e-12);
  const std::vector<Qubit> dup = {1, 1};
  EXPECT_THROW(marginal_probs(psi, dup), std::invalid_argument);
  const std::vector<Qubit> far = {4};
  EXPECT_THROW(marginal_probs(psi, far), std::out_of_range);
}

TEST(Expectation, ProjectorTimesDiagonal) {
  Rng rng(4);
  const PureState psi = gates::haar_state(3, rng);
  // |0><0| on qubit 0, diag(2, -1) on qubit 2.
  DiagonalObservable obs{{2}, {2.0, -1.0}};
  const std::vector<Qubit> proj = {0};
  double ref = 0.0;
  for (std::size_t i = 0; i < 4; ++i) ref += std::norm(psi[i]) * ((i & 1) ? -1.0 : 2.0);
  EXPECT_NEAR(expectation(psi, obs, proj), ref, 1e-14);
  const std::vector<Qubit> clash = {2};
  EXPECT_THROW(expectation(psi, obs, clash), std::invalid_argument);
}

TEST(SwapTest, EstimateIsCloseToOverlap) {
  Rng rng(8);
  const PureState a = gates::haar_state(3, rng), b = gates::haar_state(3, rng);
  const double exact = overlap(a, b);
  const std::uint64_t shots = 200000;
  const double est = swap_test_estimate(a, b, shots, rng);
  // Each outcome is +-1; variance of the mean <= 1 / shots.
  EXPECT_NEAR(est, exact, 5.0 / std::sqrt(static_cast<double>(shots)));
  EXPECT_EQ(swap_test_estimate(a, a, 100, rng), 1.0);
}

TEST(StateIo, BinaryRoundTrip) {
  Rng rng(1);
  const PureState psi = gates::haar_state(5, rng);
  std::stringstream buf;
  write_state_binary(buf, psi);
  EXPECT_EQ(buf.str().size(), 4u + 32u * 16u);
  EXPECT_EQ(read_state_binary(buf), psi);
  std::stringstream truncated(buf.str().substr(0, 20));
  EXPECT_THROW(read_state_binary(truncated), std::runtime_error);
}

}  // namespace
}  // namespace randfit
