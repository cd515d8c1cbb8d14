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


#include "randfit/cmaes.hpp"

#include <gtest/gtest.h>

#include <atomic>
#include <cmath>
#include <sstream>

namespace randfit {
namespace {

double sphere(std::span<const double> x) {
  double s = 0;
  for (double v : x) s += v * v;
  return s;
}

double rosenbrock(std::span<const double> x) {
  double s = 0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    const double a = x[i + 1] - x[i] * x[i], b = 1 - x[i];
    s += 100 * a * a + b * b;
  }
  return s;
}

std::string trace_bytes(const CmaesResult& r) {
  std::stringstream s;
  write_trace_csv(s, r.trace);
  return s.str();
}

TEST(Cmaes, Sphere) {
  CmaesConfig c;
  c.dimension = 10;
  c.sigma0 = 0.5;
  c.initial_mean.assign(10, 1.0);
  c.max_evaluations = 5000;
  c.target = 1e-10;
  c.seed = 1;
  const auto r = minimize(sphere, c);
  EXPECT_LE(r.best_value, 1e-10);
  EXPECT_LE(r.evaluations, 5000u);
  EXPECT_EQ(r.reason, StopReason::target);
  EXPECT_EQ(sphere(r.best_x), r.best_value);
}

TEST(Cmaes, ConstantObjectiveRunsToBudget) {
  CmaesConfig c;
  c.dimension = 5;
  c.max_evaluations = 600;
  c.seed = 3;
  const auto r = minimize([](std::span<const double>) { return 2.5; }, c);
  EXPECT_EQ(r.best_value, 2.5);
  EXPECT_EQ(r.reason, StopReason::max_evaluations);
  EXPECT_LE(r.evaluations, 600u);
  EXPECT_GT(r.evaluations, 600u - 8u);  // lambda = 8 for d = 5
}

TEST(Cmaes, Rosenbrock36) {
  CmaesConfig c;
  c.dimension = 36;
  c.sigma0 = 0.5;
  c.initial_mean.assign(36, 0.0);
  c.max_evaluations = 100000;
  c.target = 1e-10;
  c.seed = 7;
  const auto r = minimize(rosenbrock, c);
  // Six verified seeds sit between 1.3 and 5.5 at 50000 evaluations (still
  // in the curved valley) and all reach 1e-10 before 70000.
  double at_50k = 0;
  for (const auto& t : r.trace.records)
    if (t.evaluations <= 50000) at_50k = t.best;
  EXPECT_LE(at_50k, 10.0);
  EXPECT_LE(r.best_value, 1e-10);
  EXPECT_LE(r.evaluations, 80000u);
}

TEST(Cmaes, TraceInvariants) {
  CmaesConfig c;
  c.dimension = 6;
  c.max_evaluations = 3000;
  c.seed = 11;
  const auto r = minimize(rosenbrock, c);
  ASSERT_FALSE(r.trace.records.empty());
  for (std::size_t i = 1; i < r.trace.records.size(); ++i) {
    const auto& a = r.trace.records[i - 1];
    const auto& b = r.trace.records[i];
    EXPECT_LT(a.evaluations, b.evaluations);
    EXPECT_LE(b.best, a.best);
    EXPECT_GT(b.sigma, 0.0);
  }
  EXPECT_EQ(r.trace.records.back().best, r.best_value);
}

TEST(Cmaes, DeterministicAcrossWorkerCounts) {
  CmaesConfig c;
  c.dimension = 8;
  c.max_evaluations = 2000;
  c.seed = 5;
  const auto a = minimize(rosenbrock, c);
  const auto b = minimize(rosenbrock, c);
  c.workers = 4;
  const auto d = minimize(rosenbrock, c);
  EXPECT_EQ(trace_bytes(a), trace_bytes(b));
  EXPECT_EQ(trace_bytes(a), trace_bytes(d));
  EXPECT_EQ(a.best_x, d.best_x);
  c.seed = 6;
  EXPECT_NE(trace_bytes(a), trace_bytes(minimize(rosenbrock, c)));
}

TEST(Cmaes, PredicateAndStall) {
  CmaesConfig c;
  c.dimension = 4;
  c.max_evaluations = 10000;
  c.seed = 2;
  const auto r = minimize(sphere, c, [](std::span<const double>, double v) { return v < 0.1; });
  EXPECT_EQ(r.reason, StopReason::predicate);
  EXPECT_LT(r.best_value, 0.1);

  c.stall_generations = 5;
  const auto s = minimize([](std::span<const double>) { return 1.0; }, c);
  EXPECT_EQ(s.reason, StopReason::stall);
  EXPECT_LT(s.evaluations, 100u);
}

TEST(Cmaes, Errors) {
  CmaesConfig c;
  EXPECT_THROW(minimize(sphere, c), std::invalid_argument);
  c.dimension = 3;
  c.sigma0 = 0.0;
  EXPECT_THROW(minimize(sphere, c), std::invalid_argument);
  c.sigma0 = 0.3;
  c.max_evaluations = 2;
  EXPECT_THROW(minimize(sphere, c), std::invalid_argument);
  c.max_evaluations = 100;
  EXPECT_THROW(minimize([](std::span<const double>) { return std::nan(""); }, c),
               std::runtime_error);
}

TEST(Cmaes, RestartsUseFreshSeedsAndKeepBest) {
  CmaesConfig c;
  c.dimension = 5;
  c.max_evaluations = 400;
  c.seed = 9;
  const auto r = minimize_with_restarts(rosenbrock, c, 3);
  ASSERT_EQ(r.runs.size(), 3u);
  double best = r.runs[0].best_value;
  for (const auto& run : r.runs) best = std::min(best, run.best_value);
  EXPECT_EQ(r.best.best_value, best);
  EXPECT_NE(r.runs[0].best_x, r.runs[1].best_x);
  CmaesConfig k = c;
  k.seed = derive_seed(c.seed, "restart", 1);
  EXPECT_EQ(minimize(rosenbrock, k).best_x, r.runs[1].best_x);

  const auto early = minimize_with_restarts(sphere, c, 5,
                                            [](std::span<const double>, double v) { return v < 1.0; });
  EXPECT_LT(early.runs.size(), 5u);
}

TEST(Cmaes, TraceCsvHeader) {
  CmaesConfig c;
  c.dimension = 2;
  c.max_evaluations = 60;
  const auto r = minimize(sphere, c);
  const auto csv = trace_bytes(r);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "generation,evaluations,best,mean,sigma");
}

}  // namespace
}  // namespace randfit
