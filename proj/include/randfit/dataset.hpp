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
#include <iosfwd>
#include <string>
#include <vector>

#include "randfit/hamiltonian.hpp"
#include "randfit/phase.hpp"
#include "randfit/rng.hpp"
#include "randfit/state.hpp"

namespace randfit {

enum class Distribution { D0, D1, Dr, Dst };

std::string to_string(Distribution d);
Distribution distribution_from_string(const std::string& s);

struct Provenance {
  Distribution distribution = Distribution::D0;
  std::string mode = "none";  // none | labels | partial | states
  double ratio = 0.0;
  std::uint64_t seed = 0;             // sampling seed
  std::uint64_t corruption_seed = 0;  // seed of the last corruption step
  std::size_t n = 0;
  std::size_t N = 0;
  Boundary boundary = Boundary::periodic;
  std::vector<std::size_t> corrupted_indices;
};

struct LabeledItem {
  PureState state;
  PhaseLabel label;
  PhaseLabel true_label;  // label of the uncorrupted ground state
  CouplingPoint point;
};

struct LabeledDataset {
  std::vector<LabeledItem> items;
  Provenance provenance;

  std::size_t size() const { return items.size(); }
  bool empty() const { return items.empty(); }
};

struct SamplingOptions {
  Boundary boundary = Boundary::periodic;
  EigenMethod method = EigenMethod::lanczos;
  const PhaseBoundarySpec* boundary_spec = nullptr;  // nullptr: built-in
  std::size_t workers = 1;
};

inline constexpr double kCouplingMin = -4.0;
inline constexpr double kCouplingMax = 4.0;

/// N i.i.d. points (j1, j2) ~ Uniform([-4, 4]^2), each mapped to its ground
/// state and phase label. Item i draws from derive_seed(seed, "item", i).
LabeledDataset sample_dataset(std::size_t n, std::size_t N, std::uint64_t seed,
                              const SamplingOptions& options = {});
/// Convenience overload: the master seed is drawn from `rng`.
LabeledDataset sample_dataset(std::size_t n, std::size_t N, Rng& rng,
                              const SamplingOptions& options = {});

/// Dataset file: one line of JSON header (provenance, labels, couplings),
/// then N binary state records in the core-sim format.
void write_dataset(std::ostream& out, const LabeledDataset& dataset);
LabeledDataset read_dataset(std::istream& in);
void save_dataset(const std::string& path, const LabeledDataset& dataset);
LabeledDataset load_dataset(const std::string& path);

}  // namespace randfit
