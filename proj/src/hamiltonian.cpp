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

#include "randfit/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "randfit/rng.hpp"

namespace randfit {

std::string to_string(Boundary b) {
  return b == Boundary::periodic ? "periodic" : "open";
}

Boundary boundary_from_string(const std::string& s) {
  if (s == "periodic") return Boundary::periodic;
  if (s == "open") return Boundary::open;
  throw std::invalid_argument("unknown boundary mode: " + s);
}

// -------------------------------------------------------- SparseHamiltonian

SparseHamiltonian::SparseHamiltonian(std::size_t num_qubits,
                                     std::vector<Entry> entries)
    : n_(num_qubits) {
  const std::size_t dim = std::size_t{1} << num_qubits;
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  row_start_.assign(dim + 1, 0);
  for (std::size_t i = 0; i < entries.size();) {
    const auto& e = entries[i];
    if (e.row >= dim || e.col >= dim) {
      throw std::out_of_range("Hamiltonian entry outside matrix");
    }
    double v = 0.0;
    std::size_t j = i;
    for (; j < entries.size() && entries[j].row == e.row &&
           entries[j].col == e.col;
         ++j) {
      v += entries[j].value;
    }
    if (v != 0.0) {
      cols_.push_back(e.col);
      values_.push_back(v);
      ++row_start_[e.row + 1];
    }
    i = j;
  }
  for (std::size_t r = 0; r < dim; ++r) row_start_[r + 1] += row_start_[r];
}

std::vector<SparseHamiltonian::Entry> SparseHamiltonian::entries() const {
  std::vector<Entry> out;
  out.reserve(values_.size());
  for (std::size_t r = 0; r + 1 < row_start_.size(); ++r) {
    for (std::size_t k = row_start_[r]; k < row_start_[r + 1]; ++k) {
      out.push_back({r, cols_[k], values_[k]});
    }
  }
  return out;
}

Eigen::MatrixXd SparseHamiltonian::to_dense() const {
  const auto dim = static_cast<Eigen::Index>(dimension());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
  for (std::size_t r = 0; r + 1 < row_start_.size(); ++r) {
    for (std::size_t k = row_start_[r]; k < row_start_[r + 1]; ++k) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(cols_[k])) =
          values_[k];
    }
  }
  return m;
}

void SparseHamiltonian::multiply(std::span<const double> x,
                                 std::span<double> y) const {
  const std::size_t dim = dimension();
  for (std::size_t r = 0; r < dim; ++r) {
    double acc = 0.0;
    for (std::size_t k = row_start_[r]; k < row_start_[r + 1]; ++k) {
      acc += values_[k] * x[cols_[k]];
    }
    y[r] = acc;
  }
}

// ------------------------------------------------------------ construction

SparseHamiltonian build_hamiltonian(std::size_t n, CouplingPoint point,
                                    Boundary boundary) {
  if (n < 3) {
    throw std::invalid_argument("cluster Hamiltonian needs n >= 3, got " +
                                std::to_string(n));
  }
  if (n > 16) {
    throw std::length_error("cluster Hamiltonian limited to n <= 16");
  }
  if (!std::isfinite(point.j1) || !std::isfinite(point.j2)) {
    throw std::invalid_argument("coupling constants must be finite");
  }
  const std::size_t dim = std::size_t{1} << n;
  const bool periodic = boundary == Boundary::periodic;
  auto mask = [n](std::size_t q) { return std::size_t{1} << (n - 1 - q); };
  // Site index with wraparound; returns n when the site is off an open chain.
  auto site = [&](long j) -> std::size_t {
    const long ln = static_cast<long>(n);
    if (periodic) return static_cast<std::size_t>(((j % ln) + ln) % ln);
    return (j < 0 || j >= ln) ? n : static_cast<std::size_t>(j);
  };

  std::vector<SparseHamiltonian::Entry> entries;
  entries.reserve(dim * (1 + 2 * n));
  for (std::size_t k = 0; k < dim; ++k) {
    double diag = 0.0;
    for (std::size_t j = 0; j < n; ++j) diag += (k & mask(j)) ? -1.0 : 1.0;
    entries.push_back({k, k, diag});
  }
  for (std::size_t j = 0; j < n; ++j) {
    const long lj = static_cast<long>(j);
    const std::size_t next = site(lj + 1);
    const std::size_t prev = site(lj - 1);
    if (point.j1 != 0.0 && next != n) {
      const std::size_t flip = mask(j) | mask(next);
      for (std::size_t k = 0; k < dim; ++k) {
        entries.push_back({k ^ flip, k, -point.j1});
      }
    }
    if (point.j2 != 0.0 && next != n && prev != n) {
      const std::size_t flip = mask(prev) | mask(next);
      for (std::size_t k = 0; k < dim; ++k) {
        const double z = (k & mask(j)) ? -1.0 : 1.0;
        entries.push_back({k ^ flip, k, -point.j2 * z});
      }
    }
  }
  return SparseHamiltonian(n, std::move(entries));
}

// ------------------------------------------------------------ ground state

namespace {

PureState phase_fixed(const Eigen::VectorXd& v) {
  Eigen::VectorXd x = v / v.norm();
  const double big = x.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (std::abs(x[i]) > 1e-10 * std::max(1.0, big)) {
      if (x[i] < 0) x = -x;
      break;
    }
  }
  std::vector<Complex> amps(static_cast<std::size_t>(x.size()));
  for (Eigen::Index i = 0; i < x.size(); ++i) amps[i] = x[i];
  return PureState::normalized(std::move(amps));
}

double residual_norm(const SparseHamiltonian& h, const Eigen::VectorXd& x,
                     double energy) {
  Eigen::VectorXd hx(x.size());
  h.multiply(std::span<const double>(x.data(), x.size()),
             std::span<double>(hx.data(), hx.size()));
  return (hx - energy * x).norm();
}

GroundState dense_ground_state(const SparseHamiltonian& h) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h.to_dense());
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("dense eigensolver failed");
  }
  const Eigen::VectorXd v = es.eigenvectors().col(0);
  const double e = es.eigenvalues()[0];
  return {phase_fixed(v), e, residual_norm(h, v, e)};
}

GroundState lanczos_ground_state(const SparseHamiltonian& h,
                                 const LanczosOptions& opt) {
  const auto dim = static_cast<Eigen::Index>(h.dimension());
  const Eigen::Index m =
      std::min<Eigen::Index>(static_cast<Eigen::Index>(opt.krylov_dimension), dim);
  Rng rng(derive_seed(0x1a2c05, "lanczos-start", h.dimension()));
  std::normal_distribution<double> normal;
  Eigen::VectorXd x(dim);
  for (Eigen::Index i = 0; i < dim; ++i) x[i] = normal(rng);
  x.normalize();

  Eigen::MatrixXd basis(dim, m + 1);
  Eigen::VectorXd w(dim);
  double best_residual = std::numeric_limits<double>::infinity();
  double energy = 0.0;
  Eigen::VectorXd best = x;

  for (std::size_t restart = 0; restart <= opt.max_restarts; ++restart) {
    std::vector<double> alpha, beta;
    basis.col(0) = x;
    Eigen::Index k = 0;
    double theta = 0.0;
    Eigen::VectorXd ritz_coeffs;
    for (Eigen::Index j = 0; j < m; ++j) {
      h.multiply(std::span<const double>(basis.col(j).data(), dim),
                 std::span<double>(w.data(), dim));
      const double a = basis.col(j).dot(w);
      w -= a * basis.col(j);
      if (j > 0) w -= beta.back() * basis.col(j - 1);
      for (int pass = 0; pass < 2; ++pass) {
        const Eigen::VectorXd c = basis.leftCols(j + 1).transpose() * w;
        w -= basis.leftCols(j + 1) * c;
      }
      const double b = w.norm();
      alpha.push_back(a);
      beta.push_back(b);
      k = j + 1;
      const bool breakdown = b < 1e-12;
      if (k % 8 == 0 || k == m || breakdown) {
        Eigen::VectorXd diag = Eigen::Map<Eigen::VectorXd>(alpha.data(), k);
        Eigen::VectorXd sub(std::max<Eigen::Index>(k - 1, 0));
        for (Eigen::Index i = 0; i + 1 < k; ++i) sub[i] = beta[i];
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
        tri.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
        theta = tri.eigenvalues()[0];
        ritz_coeffs = tri.eigenvectors().col(0);
        const double estimate = b * std::abs(ritz_coeffs[k - 1]);
        if (breakdown || estimate <= opt.tolerance * std::max(1.0, std::abs(theta))) {
          break;
        }
      }
      basis.col(j + 1) = w / b;
    }
    x = basis.leftCols(k) * ritz_coeffs;
    x.normalize();
    const double r = residual_norm(h, x, theta);
    if (r < best_residual) {
      best_residual = r;
      best = x;
      energy = theta;
    }
    if (r <= 1e-10 * std::max(1.0, std::abs(theta))) break;
  }
  if (!(best_residual <= 1e-8)) {
    throw std::runtime_error("Lanczos did not converge (residual " +
                             std::to_string(best_residual) + ")");
  }
  return {phase_fixed(best), energy, best_residual};
}

}  // namespace

GroundState ground_state(const SparseHamiltonian& h, EigenMethod method,
                         const LanczosOptions& options) {
  const std::size_t dim = h.dimension();
  if (method == EigenMethod::dense) {
    if (dim > kDenseDimensionCap) {
      throw std::length_error("dense eigensolver limited to dimension " +
                              std::to_string(kDenseDimensionCap));
    }
    return dense_ground_state(h);
  }
  if (dim > kLanczosDimensionCap) {
    throw std::length_error("Lanczos eigensolver limited to dimension " +
                            std::to_string(kLanczosDimensionCap));
  }
  return lanczos_ground_state(h, options);
}

}  // namespace randfit
