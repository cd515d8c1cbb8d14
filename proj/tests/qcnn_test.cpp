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

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "randfit/gates.hpp"

namespace randfit {
namespace {

using namespace testing;

ParamVector random_theta(const QcnnSpec& spec, Rng& rng) {
  std::uniform_real_distribution<double> a(-M_PI, M_PI);
  ParamVector t(spec.param_count());
  for (auto& v : t) v = a(rng);
  return t;
}

TEST(BuildQcnn, CountsAndSharingMap) {
  for (auto [n, stages] : {std::pair{4u, 1u}, {8u, 2u}, {16u, 3u}}) {
    const auto spec = build_qcnn(n);
    EXPECT_EQ(spec.stages().size(), stages);
    EXPECT_EQ(spec.param_count(), 18u * stages);
    // Every gate slot points into [0, param_count); together they cover it.
    std::vector<int> used(spec.param_count(), 0);
    std::size_t gates = 0;
    for (auto [first, count] : spec.sharing_map()) {
      ++gates;
      for (std::size_t k = first; k < first + count; ++k) used.at(k)++;
    }
    for (int u : used) EXPECT_GE(u, 1);
    EXPECT_EQ(gates, spec.circuit(ParamVector(spec.param_count(), 0.0)).size());
    std::size_t active = n;
    for (const auto& st : spec.stages()) {
      EXPECT_EQ(st.active.size(), active);
      EXPECT_EQ(st.pool_pairs.size(), active / 2);
      EXPECT_EQ(st.conv_pairs.size(), active == 2 ? 1u : active);
      active /= 2;
    }
    EXPECT_EQ(active, 2u);  // the output pair
  }
  EXPECT_THROW(build_qcnn(6), std::invalid_argument);
  EXPECT_THROW(build_qcnn(2), std::invalid_argument);
}

TEST(BuildQcnn, EightQubitWiring) {
  const auto spec = build_qcnn(8);
  const auto& s0 = spec.stages()[0];
  // Even bricks then odd bricks with wrap.
  EXPECT_EQ(s0.conv_pairs.front(), (std::pair<Qubit, Qubit>{0, 1}));
  EXPECT_EQ(s0.conv_pairs.back(), (std::pair<Qubit, Qubit>{7, 0}));
  // Pooling orientation alternates between neighbouring pairs.
  const std::vector<std::pair<Qubit, Qubit>> pools = {{0, 1}, {3, 2}, {4, 5}, {7, 6}};
  EXPECT_EQ(s0.pool_pairs, pools);
  EXPECT_EQ(spec.stages()[1].active, (std::vector<Qubit>{1, 2, 5, 6}));
  EXPECT_EQ(spec.output_qubits(), (std::array<Qubit, 2>{2, 5}));
}

TEST(Forward, ZeroParametersGiveIdentity) {
  for (std::size_t n : {4u, 8u}) {
    const auto spec = build_qcnn(n);
    const ParamVector zero(spec.param_count(), 0.0);
    const auto p = forward(spec, zero, PureState(n));
    EXPECT_NEAR(p[0], 1.0, 1e-14);
    EXPECT_NEAR(p[1] + p[2] + p[3], 0.0, 1e-14);
  }
}

TEST(Forward, RejectsMismatchedInputs) {
  const auto spec = build_qcnn(4);
  const ParamVector t(spec.param_count(), 0.1);
  EXPECT_THROW(forward(spec, t, PureState(5)), std::invalid_argument);
  const ParamVector shorter(17, 0.0);
  EXPECT_THROW(forward(spec, shorter, PureState(4)), std::invalid_argument);
}

TEST(Forward, MatchesMeasureAndBranchSimulation) {
  const auto spec = build_qcnn(4);
  Rng rng(100);
  for (int draw = 0; draw < 100; ++draw) {
    const auto t = random_theta(spec, rng);
    const PureState psi = gates::haar_state(4, rng);
    const auto got = forward(spec, t, psi);
    const auto ref = branch_oracle(spec, t, to_vec(psi));
    for (int b = 0; b < 4; ++b) ASSERT_NEAR(got[b], ref[b], 1e-10) << "draw " << draw;
  }
}

TEST(Forward, EightQubitBranchSpotCheck) {
  const auto spec = build_qcnn(8);
  Rng rng(101);
  for (int draw = 0; draw < 3; ++draw) {
    const auto t = random_theta(spec, rng);
    const PureState psi = gates::haar_state(8, rng);
    const auto got = forward(spec, t, psi);
    const auto ref = branch_oracle(spec, t, to_vec(psi));
    for (int b = 0; b < 4; ++b) EXPECT_NEAR(got[b], ref[b], 1e-10);
  }
}

TEST(Forward, NormalizedAndGatesUnitary) {
  Rng rng(5);
  for (int draw = 0; draw < 1000; ++draw) {
    const auto spec = build_qcnn(draw % 2 ? 8 : 4);
    const auto t = random_theta(spec, rng);
    for (const auto& g : spec.circuit(t)) {
      const Mat& u = g.matrix();
      ASSERT_LT((u.adjoint() * u - Mat::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff(), 1e-10);
    }
    if (draw % 50 == 0) {
      const auto p = forward(spec, t, gates::haar_state(spec.num_qubits(), rng));
      EXPECT_NEAR(p[0] + p[1] + p[2] + p[3], 1.0, 1e-10);
    }
  }
}

PureState relabel(const PureState& psi, const std::vector<Qubit>& order) {
  const std::size_t n = psi.num_qubits();
  std::vector<Complex> out(psi.dimension());
  for (std::size_t i = 0; i < psi.dimension(); ++i) {
    std::size_t j = 0;
    for (std::size_t k = 0; k < n; ++k)
      if ((i >> (n - 1 - k)) & 1) j |= std::size_t{1} << (n - 1 - order[k]);
    out[j] = psi[i];
  }
  return PureState::from_amplitudes(std::move(out));
}

TEST(Forward, CyclicRelabelingCovariance) {
  Rng rng(9);
  const auto base = build_qcnn(4);
  for (Qubit shift = 1; shift < 4; ++shift) {
    std::vector<Qubit> order(4);
    for (Qubit k = 0; k < 4; ++k) order[k] = (k + shift) % 4;
    const auto rotated = build_qcnn(4, order);
    for (int draw = 0; draw < 10; ++draw) {
      const auto t = random_theta(base, rng);
      const PureState psi = gates::haar_state(4, rng);
      const auto a = forward(base, t, psi);
      const auto b = forward(rotated, t, relabel(psi, order));
      for (int k = 0; k < 4; ++k) EXPECT_NEAR(a[k], b[k], 1e-12);
    }
  }
  const std::vector<Qubit> bad = {0, 0, 1, 2};
  EXPECT_THROW(build_qcnn(4, bad), std::invalid_argument);
}

TEST(Predict, ArgminWithLowestIndexTieBreak) {
  const std::vector<double> a = {0.4, 0.3, 0.2, 0.1}, b = {0.25, 0.25, 0.25, 0.25},
                            c = {0.1, 0.2, 0.3, 0.4};
  EXPECT_EQ(predict(a), PhaseLabel::from_bits(1, 1));
  EXPECT_EQ(predict(b), PhaseLabel::from_bits(0, 0));
  EXPECT_EQ(predict(c), PhaseLabel::from_bits(0, 0));
  const std::vector<double> neg = {-0.1, 0.5, 0.3, 0.3}, three = {0.5, 0.5, 0.0},
                            off = {0.5, 0.5, 0.5, 0.5};
  EXPECT_THROW(predict(neg), std::invalid_argument);
  EXPECT_THROW(predict(three), std::invalid_argument);
  EXPECT_THROW(predict(off), std::invalid_argument);
}

TEST(SampleLoss, Examples) {
  const std::vector<double> e0 = {1, 0, 0, 0}, fit = {0, 0.2, 0.3, 0.5}, u = {0.25, 0.25, 0.25, 0.25};
  EXPECT_EQ(sample_loss(e0, PhaseLabel::spt()), 1.0);
  EXPECT_EQ(sample_loss(fit, PhaseLabel::spt()), 0.0);
  for (unsigned k = 0; k < 4; ++k) EXPECT_EQ(sample_loss(u, PhaseLabel::from_index(k)), 0.25);
}

LabeledDataset dataset_of(std::vector<std::pair<PureState, PhaseLabel>> items) {
  LabeledDataset ds;
  for (auto& [s, l] : items) ds.items.push_back({s, l, l, {}});
  ds.provenance.N = ds.items.size();
  return ds;
}

TEST(EmpiricalRisk, Examples) {
  const auto spec = build_qcnn(4);
  const ParamVector zero(spec.param_count(), 0.0);
  EXPECT_EQ(empirical_risk(spec, zero, dataset_of({{PureState(4), PhaseLabel::spt()}})), 1.0);
  EXPECT_EQ(empirical_risk(spec, zero, dataset_of({{PureState(4), PhaseLabel::trivial()}})), 0.0);
  Rng rng(3);
  const auto t = random_theta(spec, rng);
  const PureState a = gates::haar_state(4, rng), b = gates::haar_state(4, rng);
  const double la = sample_loss(forward(spec, t, a), PhaseLabel::ferromagnetic());
  const double lb = sample_loss(forward(spec, t, b), PhaseLabel::trivial());
  const auto ds = dataset_of({{a, PhaseLabel::ferromagnetic()}, {b, PhaseLabel::trivial()}});
  EXPECT_NEAR(empirical_risk(spec, t, ds), (la + lb) / 2, 1e-15);
  EXPECT_THROW(empirical_risk(spec, t, LabeledDataset{}), std::invalid_argument);
}

TEST(EmpiricalRisk, BoundedForRandomParameters) {
  const auto spec = build_qcnn(8);
  Rng rng(44);
  std::vector<std::pair<PureState, PhaseLabel>> items;
  for (unsigned i = 0; i < 6; ++i) items.emplace_back(gates::haar_state(8, rng), PhaseLabel::from_index(i % 4));
  const auto ds = dataset_of(items);
  for (int d = 0; d < 20; ++d) {
    const double r = empirical_risk(spec, random_theta(spec, rng), ds);
    EXPECT_GE(r, 0.0);
    EXPECT_LE(r, 1.0);
  }
}

TEST(QcnnEvaluator, MatchesForward) {
  const auto spec = build_qcnn(8);
  Rng rng(8);
  const auto t = random_theta(spec, rng);
  QcnnEvaluator eval(spec, t);
  for (int i = 0; i < 5; ++i) {
    const PureState psi = gates::haar_state(8, rng);
    EXPECT_EQ(eval(psi), forward(spec, t, psi));
  }
}

TEST(Params, JsonAndBinaryRoundTrip) {
  const auto spec = build_qcnn(8);
  Rng rng(2);
  const auto t = random_theta(spec, rng);
  const Json j = params_to_json(spec, t);
  EXPECT_EQ(j.at("layout"), QcnnSpec::kLayoutTag);
  EXPECT_EQ(params_from_json(Json::parse(j.dump()), spec), t);
  EXPECT_THROW(params_from_json(j, build_qcnn(4)), std::invalid_argument);
  std::stringstream s;
  write_params_binary(s, t);
  EXPECT_EQ(s.str().size(), 8u + 8u * t.size());
  EXPECT_EQ(read_params_binary(s), t);
}

}  // namespace
}  // namespace randfit
