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
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "randfit/cmaes.hpp"
#include "randfit/conditioning.hpp"
#include "randfit/dataset.hpp"
#include "randfit/json_io.hpp"
#include "randfit/qcnn.hpp"

namespace randfit {

enum class Task { real, random_labels, corrupted, random_states, thm1, thm2, alg1 };

std::string to_string(Task t);
Task task_from_string(const std::string& s);
bool is_training_task(Task t);

/// Which labels the test error is measured against for corrupted tasks.
enum class TestLabels { corrupted, true_labels };

/// What CMA-ES minimizes. `risk` is the mean probability mass on the true
/// label; `risk_plus_error` adds the training misclassification rate, which
/// breaks ties where every outcome but one has vanishing probability.
enum class TrainingObjective { risk, risk_plus_error };

std::string to_string(TrainingObjective o);
TrainingObjective training_objective_from_string(const std::string& s);

struct MemorizationOptions {
  std::uint64_t shots = 1000000;
  std::uint64_t batch = 1;
  double max_condition = 1e4;      // resample state sets above this
  std::size_t prep_layers = 3;     // brickwork depth of the known preps
  double kappa_fraction = 0.5;     // kappa = fraction * sigma_min(W)
  std::vector<double> kappas;      // explicit kappas (override the fraction)
  std::vector<std::string> protocols = {"exact-clone"};
  std::size_t snapshot_layers = 2;
  AlphaObjective alpha_objective = AlphaObjective::feasible_only;
  SolverBudget solver;
};

struct ExperimentConfig {
  Task task = Task::random_labels;
  std::size_t n = 8;
  std::vector<std::size_t> sizes = {5};  // training-set sizes N
  std::vector<double> ratios = {1.0};    // corrupted task only
  std::size_t test_size = 1000;
  std::size_t repetitions = 5;
  std::size_t restarts = 5;
  CmaesConfig optimizer;  // dimension and seed are filled per cell
  TrainingObjective objective = TrainingObjective::risk_plus_error;
  TestLabels test_labels = TestLabels::corrupted;
  Boundary boundary = Boundary::periodic;
  std::uint64_t seed = 0;
  std::size_t workers = 1;
  double cell_time_limit = 1200.0;  // seconds
  MemorizationOptions memorization;

  void validate() const;
};

ExperimentConfig config_from_json(const Json& j);
Json config_to_json(const ExperimentConfig& c);
ExperimentConfig load_config(const std::filesystem::path& path);

struct ExperimentResult {
  Task task;
  std::size_t n, N;
  double r;
  std::size_t repetition;
  double train_error, test_error, gap;
  double train_loss, test_loss;
  std::size_t evaluations, runs;
  std::string stop_reason;
  std::uint64_t train_seed, test_seed, optimizer_seed;
  double wall_time;  // seconds; excluded from CSV output
  OptimTrace trace;  // best run
  ParamVector theta;
};

struct MemorizationRecord {
  Task task;
  std::size_t n, N, repetition;
  bool success;
  std::map<std::string, double> metrics;
  Json details;
};

struct FailedCell {
  Task task;
  std::size_t n, N;
  double r;
  std::size_t repetition;
  std::string error;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<ExperimentResult> results;
  std::vector<MemorizationRecord> memorization;
  std::vector<FailedCell> failures;
};

/// Fraction of items whose argmin prediction differs from the label.
double error_rate(const QcnnSpec& spec, std::span<const double> theta,
                  const LabeledDataset& dataset);

double generalization_gap(double train_error, double test_error);

/// Training and test data of one grid cell. Seeds come from disjoint
/// streams of the master seed.
struct CellData {
  LabeledDataset train, test;
  std::uint64_t train_seed, test_seed;
};
CellData make_cell_data(const ExperimentConfig& config, std::size_t N, double r,
                        std::size_t repetition);

/// Trains on cell data and evaluates. Throws on failure.
ExperimentResult train_cell(const ExperimentConfig& config, const CellData& data,
                            std::size_t N, double r, std::size_t repetition);

MemorizationRecord run_thm1(const ExperimentConfig& config, std::size_t N,
                            std::size_t repetition);
MemorizationRecord run_thm2(const ExperimentConfig& config, std::size_t N,
                            std::size_t repetition);
MemorizationRecord run_alg1(const ExperimentConfig& config, std::size_t N,
                            std::size_t repetition);

/// Runs every grid cell. A failing cell is recorded and skipped.
ExperimentReport run_experiment(const ExperimentConfig& config);

enum class ReportFormat { csv, json, plotdata };

/// Writes results.csv, results.json and/or plotdata/*.csv, plus
/// errors.json, into `dir`.
void report(const ExperimentReport& rep, const std::filesystem::path& dir,
            std::span<const ReportFormat> formats);

void write_results_csv(std::ostream& out, const ExperimentReport& rep);
Json report_to_json(const ExperimentReport& rep);
ExperimentReport report_from_json(const Json& j);

}  // namespace randfit
