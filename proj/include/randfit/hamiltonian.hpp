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
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "randfit/state.hpp"

namespace randfit {

struct CouplingPoint {
  double j1 = 0.0;
  double j2 = 0.0;
};

enum class Boundary { periodic, open };

std::string to_string(Boundary b);
Boundary boundary_from_string(const std::string& s);

/// Real symmetric sparse matrix in CSR form.
class SparseHamiltonian {
 public:
  struct Entry {
    std::uint64_t row;
    std::uint64_t col;
    double value;
  };

  /// Entries are merged (duplicates summed) and sorted by (row, col).
  SparseHamiltonian(std::size_t num_qubits, std::vector<Entry> entries);

  std::size_t num_qubits() const { return n_; }
  std::size_t dimension() const { return row_start_.size() - 1; }
  std::size_t nonzeros() const { return values_.size(); }

  std::vector<Entry> entries() const;
  Eigen::MatrixXd to_dense() const;

  /// y = H x
  void multiply(std::span<const double> x, std::span<double> y) const;

 private:
  std::size_t n_;
  std::vector<std::size_t> row_start_;
  std::vector<std::uint64_t> cols_;
  std::vector<double> values_;
};

/// H = sum_j ( Z_j - j1 X_j X_{j+1} - j2 X_{j-1} Z_j X_{j+1} ).
/// Periodic wraps indices mod n; open drops terms that leave the chain.
/// Requires n >= 3.
SparseHamiltonian build_hamiltonian(std::size_t n, CouplingPoint point,
                                    Boundary boundary = Boundary::periodic);

enum class EigenMethod { dense, lanczos };

inline constexpr std::size_t kDenseDimensionCap = 4096;
inline constexpr std::size_t kLanczosDimensionCap = 65536;

struct LanczosOptions {
  std::size_t krylov_dimension = 160;
  std::size_t max_restarts = 40;
  double tolerance = 1e-11;
};

struct GroundState {
  PureState state;
  double energy;
  double residual;  // ||H v - E v||_2
};

/// Lowest eigenpair. The returned vector has its first nonzero amplitude
/// real and positive. Throws std::length_error above the method's cap and
/// std::runtime_error if Lanczos fails to reach residual <= 1e-8.
GroundState ground_state(const SparseHamiltonian& h,
                         EigenMethod method = EigenMethod::lanczos,
                         const LanczosOptions& options = {});

}  // namespace randfit
