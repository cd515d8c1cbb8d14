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
#include <functional>
#include <iosfwd>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "randfit/rng.hpp"

namespace randfit {

struct CmaesConfig {
  std::size_t dimension = 0;
  std::size_t lambda = 0;  // 0: 4 + floor(3 ln d)
  std::size_t mu = 0;      // 0: floor(lambda / 2)
  double sigma0 = 0.3;
  std::vector<double> initial_mean;  // empty: uniform in [mean_low, mean_high]^d
  double mean_low = -3.141592653589793;
  double mean_high = 3.141592653589793;
  std::size_t max_evaluations = 20000;
  double target = -std::numeric_limits<double>::infinity();
  std::uint64_t seed = 0;
  // Stop after this many generations without a best-ever improvement
  // larger than stall_tolerance. 0 disables.
  std::size_t stall_generations = 0;
  double stall_tolerance = 1e-12;
  std::size_t workers = 1;
};

struct TraceRecord {
  std::size_t generation;
  std::size_t evaluations;
  double best;   // best-ever objective
  double mean;   // mean objective of this generation's population
  double sigma;
};

struct OptimTrace {
  std::vector<TraceRecord> records;
};

enum class StopReason { max_evaluations, target, predicate, stall };

std::string to_string(StopReason r);

struct CmaesResult {
  std::vector<double> best_x;
  double best_value = std::numeric_limits<double>::infinity();
  std::size_t evaluations = 0;
  StopReason reason = StopReason::max_evaluations;
  OptimTrace trace;
  std::vector<std::string> warnings;
};

/// Must be safe to call concurrently when workers > 1.
using Objective = std::function<double(std::span<const double>)>;
/// Checked on every new best-ever point; returning true stops the run.
using StopPredicate = std::function<bool(std::span<const double>, double)>;

/// (mu/mu_w, lambda)-CMA-ES with cumulative step-size adaptation and
/// rank-one plus rank-mu covariance updates, using the default strategy
/// parameters of Hansen's tutorial. Deterministic for a fixed config.seed
/// regardless of config.workers.
CmaesResult minimize(const Objective& objective, const CmaesConfig& config,
                     const StopPredicate& stop = {});

struct RestartResult {
  CmaesResult best;               // best run
  std::vector<CmaesResult> runs;  // every run, in order
};

/// Independent runs with seeds derive_seed(config.seed, "restart", k).
/// Stops early once a run satisfies `stop` (if given).
RestartResult minimize_with_restarts(const Objective& objective,
                                     const CmaesConfig& config,
                                     std::size_t restarts,
                                     const StopPredicate& stop = {});

/// CSV: generation,evaluations,best,mean,sigma
void write_trace_csv(std::ostream& out, const OptimTrace& trace);

}  // namespace randfit
