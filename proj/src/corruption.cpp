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

#include "randfit/corruption.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace randfit {

std::string to_string(CorruptionMode m) {
  switch (m) {
    case CorruptionMode::labels: return "labels";
    case CorruptionMode::partial: return "partial";
    case CorruptionMode::states: return "states";
  }
  return "?";
}

CorruptionMode corruption_mode_from_string(const std::string& s) {
  if (s == "labels") return CorruptionMode::labels;
  if (s == "partial") return CorruptionMode::partial;
  if (s == "states") return CorruptionMode::states;
  throw std::invalid_argument("unknown corruption mode: " + s);
}

namespace {

void require_original(const LabeledDataset& ds) {
  if (ds.provenance.distribution != Distribution::D0) {
    throw std::invalid_argument(
        "corruption expects data from the original distribution D0, got " +
        to_string(ds.provenance.distribution));
  }
  if (ds.empty()) throw std::invalid_argument("cannot corrupt an empty dataset");
}

}  // namespace

LabeledDataset corrupt_labels(const LabeledDataset& dataset, double ratio,
                              std::uint64_t seed, CountRounding rounding) {
  require_original(dataset);
  if (!(ratio >= 0.0 && ratio <= 1.0)) {
    throw std::invalid_argument("corruption ratio must lie in [0, 1]");
  }
  const std::size_t N = dataset.size();
  const double target = ratio * static_cast<double>(N);
  const double rounded = std::round(target);
  if (rounding == CountRounding::exact && std::abs(target - rounded) > 1e-9) {
    throw std::invalid_argument("ratio * N = " + std::to_string(target) +
                                " is not an integer item count");
  }
  const auto count = static_cast<std::size_t>(rounded);

  LabeledDataset out = dataset;
  if (ratio == 0.0) return out;
  out.provenance.ratio = ratio;
  out.provenance.corruption_seed = seed;
  out.provenance.mode = ratio == 1.0 ? "labels" : "partial";

  Rng rng(derive_seed(seed, "label-corruption"));
  // Partial Fisher-Yates: the first `count` slots are a uniform sample
  // without replacement.
  std::vector<std::size_t> order(N);
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t i = 0; i < count; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, N - 1);
    std::swap(order[i], order[pick(rng)]);
  }
  std::vector<std::size_t> chosen(order.begin(), order.begin() + count);
  std::sort(chosen.begin(), chosen.end());
  std::uniform_int_distribution<unsigned> label(0, kNumPhases - 1);
  for (std::size_t idx : chosen) {
    out.items[idx].label = PhaseLabel::from_index(label(rng));
  }
  out.provenance.corrupted_indices = std::move(chosen);
  out.provenance.distribution = ratio == 1.0 ? Distribution::D1 : Distribution::Dr;
  return out;
}

LabeledDataset randomize_states(const LabeledDataset& dataset,
                                std::uint64_t seed) {
  require_original(dataset);
  LabeledDataset out = dataset;
  for (std::size_t i = 0; i < out.size(); ++i) {
    auto& item = out.items[i];
    const auto amps = item.state.amplitudes();
    const double dim = static_cast<double>(amps.size());
    double mean = 0.0;
    for (const auto& a : amps) {
      if (std::abs(a.imag()) > 1e-8) {
        throw std::invalid_argument(
            "state randomization needs real amplitudes (item " +
            std::to_string(i) + ")");
      }
      mean += a.real();
    }
    mean /= dim;
    double var = 0.0;
    for (const auto& a : amps) var += (a.real() - mean) * (a.real() - mean);
    const double sigma = std::sqrt(var / dim);

    Rng rng(derive_seed(seed, "state-resample", i));
    std::vector<Complex> fresh(amps.size());
    bool ok = false;
    for (int attempt = 0; attempt < 2 && !ok; ++attempt) {
      double norm2 = 0.0;
      if (sigma > 0.0) {
        std::normal_distribution<double> normal(mean, sigma);
        for (auto& a : fresh) {
          a = normal(rng);
          norm2 += std::norm(a);
        }
      } else {
        for (auto& a : fresh) {
          a = mean;
          norm2 += mean * mean;
        }
      }
      ok = norm2 > 0.0 && std::isfinite(norm2);
    }
    if (!ok) {
      throw std::runtime_error("resampled amplitude vector is zero (item " +
                               std::to_string(i) + ")");
    }
    item.state = PureState::normalized(std::move(fresh));
  }
  out.provenance.distribution = Distribution::Dst;
  out.provenance.mode = "states";
  out.provenance.corruption_seed = seed;
  out.provenance.ratio = 1.0;
  return out;
}

LabeledDataset apply_corruption(const LabeledDataset& dataset,
                                const CorruptionConfig& config,
                                CountRounding rounding) {
  switch (config.mode) {
    case CorruptionMode::labels:
      return corrupt_labels(dataset, 1.0, config.seed, rounding);
    case CorruptionMode::partial:
      return corrupt_labels(dataset, config.ratio, config.seed, rounding);
    case CorruptionMode::states:
      return randomize_states(dataset, config.seed);
  }
  throw std::logic_error("unreachable corruption mode");
}

}  // namespace randfit
