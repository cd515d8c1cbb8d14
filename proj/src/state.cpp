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

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

namespace randfit {

namespace {

constexpr std::size_t kMaxQubits = 30;

std::size_t checked_dimension(std::size_t n) {
  if (n == 0 || n > kMaxQubits) {
    throw std::invalid_argument("qubit count must be in [1, " +
                                std::to_string(kMaxQubits) + "], got " +
                                std::to_string(n));
  }
  return std::size_t{1} << n;
}

std::size_t qubits_for_length(std::size_t len) {
  if (len < 2 || !std::has_single_bit(len)) {
    throw std::invalid_argument("amplitude vector length " +
                                std::to_string(len) +
                                " is not a power of two >= 2");
  }
  return static_cast<std::size_t>(std::countr_zero(len));
}

double sum_sq(std::span<const Complex> v) {
  double s = 0.0;
  for (const auto& a : v) s += std::norm(a);
  return s;
}

// Bit mask of qubit q in an n-qubit index (qubit 0 is the MSB).
inline std::size_t qmask(std::size_t n, Qubit q) {
  return std::size_t{1} << (n - 1 - q);
}

void check_distinct(std::span<const Qubit> qubits, const char* what) {
  for (std::size_t i = 0; i < qubits.size(); ++i) {
    for (std::size_t j = i + 1; j < qubits.size(); ++j) {
      if (qubits[i] == qubits[j]) {
        throw std::invalid_argument(std::string("duplicate qubit index in ") +
                                    what + ": " + std::to_string(qubits[i]));
      }
    }
  }
}

void check_range(std::span<const Qubit> qubits, std::size_t n) {
  for (Qubit q : qubits) {
    if (q >= n) {
      throw std::out_of_range("qubit index " + std::to_string(q) +
                              " out of range for " + std::to_string(n) +
                              " qubits");
    }
  }
}

void put_u32(std::ostream& out, std::uint32_t v) {
  unsigned char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), 4);
}

void put_f64(std::ostream& out, double d) {
  std::uint64_t v;
  std::memcpy(&v, &d, sizeof v);
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), 8);
}

std::uint32_t get_u32(std::istream& in) {
  unsigned char b[4];
  if (!in.read(reinterpret_cast<char*>(b), 4)) {
    throw std::runtime_error("truncated state record");
  }
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
  return v;
}

double get_f64(std::istream& in) {
  unsigned char b[8];
  if (!in.read(reinterpret_cast<char*>(b), 8)) {
    throw std::runtime_error("truncated state record");
  }
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  double d;
  std::memcpy(&d, &v, sizeof d);
  return d;
}

}  // namespace

// ---------------------------------------------------------------- PureState

PureState::PureState(std::size_t num_qubits)
    : n_(num_qubits), amps_(checked_dimension(num_qubits)) {
  amps_[0] = 1.0;
}

PureState PureState::from_amplitudes(std::vector<Complex> amplitudes,
                                     double tolerance) {
  std::size_t n = qubits_for_length(amplitudes.size());
  checked_dimension(n);
  double s = sum_sq(amplitudes);
  if (!std::isfinite(s) || std::abs(s - 1.0) > tolerance) {
    throw std::invalid_argument("amplitudes not normalized: sum |a|^2 = " +
                                std::to_string(s));
  }
  return PureState(n, std::move(amplitudes));
}

PureState PureState::normalized(std::vector<Complex> amplitudes) {
  std::size_t n = qubits_for_length(amplitudes.size());
  checked_dimension(n);
  double s = std::sqrt(sum_sq(amplitudes));
  if (!(s > 0.0) || !std::isfinite(s)) {
    throw std::invalid_argument("cannot normalize a zero or non-finite vector");
  }
  for (auto& a : amplitudes) a /= s;
  return PureState(n, std::move(amplitudes));
}

PureState PureState::basis(std::size_t num_qubits, std::uint64_t index) {
  PureState s(num_qubits);
  if (index >= s.dimension()) {
    throw std::out_of_range("basis index out of range");
  }
  s.amps_[0] = 0.0;
  s.amps_[index] = 1.0;
  return s;
}

double PureState::norm() const { return std::sqrt(sum_sq(amps_)); }

// ------------------------------------------------------------------- GateOp

GateOp::GateOp(Eigen::MatrixXcd matrix, std::vector<Qubit> targets,
               std::vector<Qubit> controls)
    : matrix_(std::move(matrix)),
      targets_(std::move(targets)),
      controls_(std::move(controls)) {
  if (targets_.empty() || targets_.size() > 2) {
    throw std::invalid_argument("gate must act on 1 or 2 target qubits");
  }
  const Eigen::Index dim = Eigen::Index{1} << targets_.size();
  if (matrix_.rows() != dim || matrix_.cols() != dim) {
    throw std::invalid_argument("gate matrix shape does not match targets");
  }
  check_distinct(targets_, "gate targets");
  check_distinct(controls_, "gate controls");
  for (Qubit c : controls_) {
    if (std::find(targets_.begin(), targets_.end(), c) != targets_.end()) {
      throw std::invalid_argument("control qubit " + std::to_string(c) +
                                  " is also a target");
    }
  }
  double err = (matrix_.adjoint() * matrix_ -
                Eigen::MatrixXcd::Identity(dim, dim))
                   .cwiseAbs()
                   .maxCoeff();
  if (!(err <= kUnitaryTolerance)) {
    throw std::invalid_argument("gate matrix is not unitary (max deviation " +
                                std::to_string(err) + ")");
  }
}

std::size_t GateOp::min_qubits() const {
  std::size_t m = 0;
  for (Qubit q : targets_) m = std::max(m, q + 1);
  for (Qubit q : controls_) m = std::max(m, q + 1);
  return m;
}

GateOp GateOp::adjoint() const {
  return GateOp(matrix_.adjoint(), targets_, controls_);
}

GateOp GateOp::with_extra_controls(std::span<const Qubit> extra) const {
  std::vector<Qubit> c = controls_;
  c.insert(c.end(), extra.begin(), extra.end());
  return GateOp(matrix_, targets_, std::move(c));
}

GateOp GateOp::remapped(std::span<const Qubit> mapping) const {
  auto map = [&](std::vector<Qubit> qs) {
    for (auto& q : qs) {
      if (q >= mapping.size()) throw std::out_of_range("qubit not in mapping");
      q = mapping[q];
    }
    return qs;
  };
  return GateOp(matrix_, map(targets_), map(controls_));
}

Circuit inverse(const Circuit& circuit) {
  Circuit out;
  out.reserve(circuit.size());
  for (auto it = circuit.rbegin(); it != circuit.rend(); ++it) {
    out.push_back(it->adjoint());
  }
  return out;
}

// ------------------------------------------------------------------ kernels

namespace kernels {

void apply(std::span<Complex> amps, std::size_t n, const GateOp& gate) {
  if (amps.size() != (std::size_t{1} << n)) {
    throw std::invalid_argument("buffer length does not match qubit count");
  }
  check_range(gate.targets(), n);
  check_range(gate.controls(), n);
  std::size_t cmask = 0;
  for (Qubit c : gate.controls()) cmask |= qmask(n, c);
  const auto& m = gate.matrix();
  const std::size_t dim = amps.size();

  if (gate.targets().size() == 1) {
    const std::size_t t = qmask(n, gate.targets()[0]);
    const Complex u00 = m(0, 0), u01 = m(0, 1), u10 = m(1, 0), u11 = m(1, 1);
    for (std::size_t i = 0; i < dim; ++i) {
      if ((i & t) || (i & cmask) != cmask) continue;
      const Complex a0 = amps[i], a1 = amps[i | t];
      amps[i] = u00 * a0 + u01 * a1;
      amps[i | t] = u10 * a0 + u11 * a1;
    }
    return;
  }

  const std::size_t t0 = qmask(n, gate.targets()[0]);
  const std::size_t t1 = qmask(n, gate.targets()[1]);
  const std::size_t both = t0 | t1;
  std::array<Complex, 16> u;
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) u[4 * r + c] = m(r, c);
  }
  for (std::size_t i = 0; i < dim; ++i) {
    if ((i & both) || (i & cmask) != cmask) continue;
    const std::size_t idx[4] = {i, i | t1, i | t0, i | both};
    const Complex a[4] = {amps[idx[0]], amps[idx[1]], amps[idx[2]],
                          amps[idx[3]]};
    for (int r = 0; r < 4; ++r) {
      amps[idx[r]] = u[4 * r] * a[0] + u[4 * r + 1] * a[1] +
                     u[4 * r + 2] * a[2] + u[4 * r + 3] * a[3];
    }
  }
}

void apply(std::span<Complex> amps, std::size_t n, const Circuit& circuit) {
  for (const auto& g : circuit) apply(amps, n, g);
}

}  // namespace kernels

// --------------------------------------------------------------- operations

PureState apply_gate(const PureState& state, const GateOp& gate) {
  std::vector<Complex> amps(state.amplitudes().begin(),
                            state.amplitudes().end());
  kernels::apply(amps, state.num_qubits(), gate);
  return PureState::from_amplitudes(std::move(amps), 1e-8);
}

PureState apply_circuit(const PureState& state, const Circuit& circuit) {
  std::vector<Complex> amps(state.amplitudes().begin(),
                            state.amplitudes().end());
  kernels::apply(amps, state.num_qubits(), circuit);
  return PureState::from_amplitudes(std::move(amps), 1e-8);
}

std::vector<double> marginal_probs(const PureState& state,
                                   std::span<const Qubit> qubits) {
  const std::size_t n = state.num_qubits();
  check_distinct(qubits, "marginal qubit list");
  check_range(qubits, n);
  const std::size_t k = qubits.size();
  std::vector<double> probs(std::size_t{1} << k, 0.0);
  const auto amps = state.amplitudes();
  for (std::size_t i = 0; i < amps.size(); ++i) {
    std::size_t out = 0;
    for (std::size_t j = 0; j < k; ++j) {
      out = (out << 1) | ((i & qmask(n, qubits[j])) ? 1u : 0u);
    }
    probs[out] += std::norm(amps[i]);
  }
  return probs;
}

double expectation(const PureState& state, const DiagonalObservable& obs,
                   std::span<const Qubit> projector_qubits) {
  const std::size_t n = state.num_qubits();
  check_distinct(obs.qubits, "observable qubits");
  check_distinct(projector_qubits, "projector qubits");
  check_range(obs.qubits, n);
  check_range(projector_qubits, n);
  for (Qubit q : projector_qubits) {
    if (std::find(obs.qubits.begin(), obs.qubits.end(), q) !=
        obs.qubits.end()) {
      throw std::invalid_argument("observable and projector qubits overlap");
    }
  }
  if (obs.values.size() != (std::size_t{1} << obs.qubits.size())) {
    throw std::invalid_argument("observable value count must be 2^|qubits|");
  }
  std::size_t pmask = 0;
  for (Qubit q : projector_qubits) pmask |= qmask(n, q);
  const auto amps = state.amplitudes();
  double acc = 0.0;
  for (std::size_t i = 0; i < amps.size(); ++i) {
    if (i & pmask) continue;
    std::size_t sub = 0;
    for (Qubit q : obs.qubits) sub = (sub << 1) | ((i & qmask(n, q)) ? 1u : 0u);
    acc += std::norm(amps[i]) * obs.values[sub];
  }
  return acc;
}

double overlap(const PureState& a, const PureState& b) {
  if (a.num_qubits() != b.num_qubits()) {
    throw std::invalid_argument("overlap of states with different qubit counts");
  }
  Complex ip = 0.0;
  for (std::size_t i = 0; i < a.dimension(); ++i) {
    ip += std::conj(a[i]) * b[i];
  }
  return std::min(1.0, std::norm(ip));
}

double swap_test_estimate(const PureState& a, const PureState& b,
                          std::uint64_t shots, Rng& rng) {
  if (shots < 1) throw std::invalid_argument("swap test needs shots >= 1");
  const double p0 = 0.5 * (1.0 + overlap(a, b));
  std::binomial_distribution<std::uint64_t> draw(shots, p0);
  const auto zeros = draw(rng);
  return 2.0 * static_cast<double>(zeros) / static_cast<double>(shots) - 1.0;
}

void write_state_binary(std::ostream& out, const PureState& state) {
  put_u32(out, static_cast<std::uint32_t>(state.num_qubits()));
  for (const auto& a : state.amplitudes()) {
    put_f64(out, a.real());
    put_f64(out, a.imag());
  }
  if (!out) throw std::runtime_error("failed to write state record");
}

PureState read_state_binary(std::istream& in) {
  const std::uint32_t n = get_u32(in);
  const std::size_t dim = checked_dimension(n);
  std::vector<Complex> amps(dim);
  for (auto& a : amps) {
    const double re = get_f64(in);
    const double im = get_f64(in);
    a = Complex(re, im);
  }
  return PureState::from_amplitudes(std::move(amps), 1e-9);
}

}  // namespace randfit
