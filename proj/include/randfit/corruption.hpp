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

#include <cstdint>
#include <string>

#include "randfit/dataset.hpp"

namespace randfit {

enum class CorruptionMode { labels, partial, states };

std::string to_string(CorruptionMode m);
CorruptionMode corruption_mode_from_string(const std::string& s);

struct CorruptionConfig {
  CorruptionMode mode = CorruptionMode::labels;
  double ratio = 1.0;  // partial mode only
  std::uint64_t seed = 0;
};

/// How corrupt_labels turns r * N into an item count.
enum class CountRounding {
  exact,    // r * N must be an integer within 1e-9
  nearest,  // round(r * N); used for large held-out sets
};

/// Picks round(r * N) items uniformly without replacement and resamples
/// their labels uniformly from all four classes (a draw may repeat the old
/// label). States are never touched. r == 1 tags D1, 0 < r < 1 tags Dr and
/// r == 0 returns an unchanged copy.
LabeledDataset corrupt_labels(const LabeledDataset& dataset, double ratio,
                              std::uint64_t seed,
                              CountRounding rounding = CountRounding::exact);

/// Replaces every state by i.i.d. Normal(mu, sigma) amplitudes, normalized,
/// where mu and sigma are the mean and population standard deviation of the
/// state's (real) amplitudes. Labels are kept; provenance becomes Dst.
LabeledDataset randomize_states(const LabeledDataset& dataset,
                                std::uint64_t seed);

/// Dispatches on config.mode.
LabeledDataset apply_corruption(const LabeledDataset& dataset,
                                const CorruptionConfig& config,
                                CountRounding rounding = CountRounding::exact);

}  // namespace randfit
