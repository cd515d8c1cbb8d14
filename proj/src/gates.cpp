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

#include "randfit/gates.hpp"

#include <cmath>
#include <random>

namespace randfit::gates {

namespace {
const Complex kI(0.0, 1.0);
}

Eigen::Matrix2cd pauli_x() {
  Eigen::Matrix2cd m;
  m << 0, 1, 1, 0;
  return m;
}

Eigen::Matrix2cd pauli_y() {
  Eigen::Matrix2cd m;
  m << 0, -kI, kI, 0;
  return m;
}

Eigen::Matrix2cd pauli_z() {
  Eigen::Matrix2cd m;
  m << 1, 0, 0, -1;
  return m;
}

Eigen::Matrix2cd hadamard() {
  Eigen::Matrix2cd m;
  const double s = 1.0 / std::sqrt(2.0);
  m << s, s, s, -s;
  return m;
}

Eigen::Matrix2cd rx(double angle) {
  const double c = std::cos(angle / 2), s = std::sin(angle / 2);
  Eigen::Matrix2cd m;
  m << c, -kI * s, -kI * s, c;
  return m;
}

Eigen::Matrix2cd ry(double angle) {
  const double c = std::cos(angle / 2), s = std::sin(angle / 2);
  Eigen::Matrix2cd m;
  m << c, -s, s, c;
  return m;
}

Eigen::Matrix2cd rz(double angle) {
  Eigen::Matrix2cd m;
  m << std::exp(-kI * (angle / 2)), 0, 0, std::exp(kI * (angle / 2));
  return m;
}

Eigen::Matrix2cd euler(double theta, double phi, double lambda) {
  return rz(phi) * ry(theta) * rz(lambda);
}

Eigen::Matrix4cd interaction(double cx, double cy, double cz) {
  // XX, YY and ZZ commute and are diagonal in the Bell basis, which gives
  // the closed form below (basis order |00>, |01>, |10>, |11>).
  const Complex e_p = std::exp(kI * cz);
  const Complex e_m = std::exp(-kI * cz);
  const double a = cx - cy, b = cx + cy;
  Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
  m(0, 0) = e_p * std::cos(a);
  m(3, 3) = e_p * std::cos(a);
  m(0, 3) = kI * e_p * std::sin(a);
  m(3, 0) = kI * e_p * std::sin(a);
  m(1, 1) = e_m * std::cos(b);
  m(2, 2) = e_m * std::cos(b);
  m(1, 2) = kI * e_m * std::sin(b);
  m(2, 1) = kI * e_m * std::sin(b);
  return m;
}

Eigen::Matrix4cd two_qubit_unitary(std::span<const double, 15> p) {
  const Eigen::Matrix2cd a0 = euler(p[0], p[1], p[2]);
  const Eigen::Matrix2cd a1 = euler(p[3], p[4], p[5]);
  const Eigen::Matrix2cd b0 = euler(p[9], p[10], p[11]);
  const Eigen::Matrix2cd b1 = euler(p[12], p[13], p[14]);
  Eigen::Matrix4cd pre, post;
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) {
      pre(r, c) = a0(r >> 1, c >> 1) * a1(r & 1, c & 1);
      post(r, c) = b0(r >> 1, c >> 1) * b1(r & 1, c & 1);
    }
  }
  return post * interaction(p[6], p[7], p[8]) * pre;
}

Eigen::MatrixXcd haar_unitary(Eigen::Index dim, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXcd g(dim, dim);
  for (Eigen::Index c = 0; c < dim; ++c) {
    for (Eigen::Index r = 0; r < dim; ++r) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(r, c) = Complex(re, im);
    }
  }
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(dim, dim);
  const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < dim; ++i) {
    const Complex d = r(i, i);
    const double mag = std::abs(d);
    if (mag > 0.0) q.col(i) *= d / mag;
  }
  return q;
}

Circuit random_brickwork(std::size_t n, std::size_t layers, Rng& rng,
                         std::size_t offset) {
  Circuit c;
  for (std::size_t l = 0; l < layers; ++l) {
    if (n == 1) {
      c.emplace_back(haar_unitary(2, rng), std::vector<Qubit>{offset});
      continue;
    }
    for (std::size_t parity = 0; parity < 2; ++parity) {
      for (std::size_t q = parity; q + 1 < n; q += 2) {
        c.emplace_back(haar_unitary(4, rng),
                       std::vector<Qubit>{offset + q, offset + q + 1});
      }
    }
  }
  return c;
}

PureState haar_state(std::size_t n, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Complex> amps(std::size_t{1} << n);
  for (auto& a : amps) {
    const double re = normal(rng);
    const double im = normal(rng);
    a = Complex(re, im);
  }
  return PureState::normalized(std::move(amps));
}

}  // namespace randfit::gates
