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


#include "randfit/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <optional>
#include <random>
#include <stdexcept>
#include <tuple>

#include "randfit/corruption.hpp"
#include "randfit/gates.hpp"
#include "randfit/memorization.hpp"
#include "randfit/parallel.hpp"

namespace randfit {

namespace fs = std::filesystem;

// ------------------------------------------------------------------- enums

std::string to_string(Task t) {
  switch (t) {
    case Task::real: return "real";
    case Task::random_labels: return "random-labels";
    case Task::corrupted: return "corrupted";
    case Task::random_states: return "random-states";
    case Task::thm1: return "thm1";
    case Task::thm2: return "thm2";
    case Task::alg1: return "alg1";
  }
  return "?";
}

Task task_from_string(const std::string& s) {
  for (Task t : {Task::real, Task::random_labels, Task::corrupted, Task::random_states,
                 Task::thm1, Task::thm2, Task::alg1}) {
    if (to_string(t) == s) return t;
  }
  throw std::invalid_argument("unknown task: " + s);
}

bool is_training_task(Task t) {
  return t == Task::real || t == Task::random_labels || t == Task::corrupted ||
         t == Task::random_states;
}

std::string to_string(TrainingObjective o) {
  return o == TrainingObjective::risk ? "risk" : "risk+error";
}

TrainingObjective training_objective_from_string(const std::string& s) {
  if (s == "risk") return TrainingObjective::risk;
  if (s == "risk+error") return TrainingObjective::risk_plus_error;
  throw std::invalid_argument("unknown training objective: " + s);
}

namespace {

std::string to_string(TestLabels t) {
  return t == TestLabels::corrupted ? "corrupted" : "true";
}

TestLabels test_labels_from_string(const std::string& s) {
  if (s == "corrupted") return TestLabels::corrupted;
  if (s == "true") return TestLabels::true_labels;
  throw std::invalid_argument("unknown test-label mode: " + s);
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string cell_key(std::string_view stream, std::size_t N, double r) {
  return std::string(stream) + ":N=" + std::to_string(N) + ":r=" + fmt(r);
}

}  // namespace

// ------------------------------------------------------------------ config

void ExperimentConfig::validate() const {
  if (sizes.empty()) throw std::invalid_argument("config: N list is empty");
  for (std::size_t N : sizes) {
    if (N == 0) throw std::invalid_argument("config: N must be >= 1");
  }
  if (task == Task::corrupted && ratios.empty()) {
    throw std::invalid_argument("config: r list is empty");
  }
  for (double r : ratios) {
    if (!(r >= 0.0 && r <= 1.0)) throw std::invalid_argument("config: r must lie in [0, 1]");
  }
  if (test_size == 0) throw std::invalid_argument("config: test size must be >= 1");
  if (repetitions == 0) throw std::invalid_argument("config: repetitions must be >= 1");
  if (restarts == 0) throw std::invalid_argument("config: restarts must be >= 1");
  if (!(cell_time_limit > 0.0)) throw std::invalid_argument("config: cell time limit must be > 0");
}

ExperimentConfig config_from_json(const Json& j) {
  ExperimentConfig c;
  c.task = task_from_string(j.value("task", to_string(c.task)));
  c.n = j.value("n", c.n);
  if (j.contains("N")) {
    c.sizes = j["N"].is_array() ? j["N"].get<std::vector<std::size_t>>()
                                : std::vector<std::size_t>{j["N"].get<std::size_t>()};
  }
  if (j.contains("r")) {
    c.ratios = j["r"].is_array() ? j["r"].get<std::vector<double>>()
                                 : std::vector<double>{j["r"].get<double>()};
  }
  c.test_size = j.value("test_size", c.test_size);
  c.repetitions = j.value("repetitions", c.repetitions);
  c.restarts = j.value("restarts", c.restarts);
  c.objective = training_objective_from_string(j.value("objective", to_string(c.objective)));
  c.test_labels = test_labels_from_string(j.value("test_labels", to_string(c.test_labels)));
  c.boundary = boundary_from_string(j.value("boundary", to_string(c.boundary)));
  c.seed = j.value("seed", c.seed);
  c.workers = j.value("workers", c.workers);
  c.cell_time_limit = j.value("cell_time_limit", c.cell_time_limit);
  if (j.contains("optimizer")) {
    const Json& o = j["optimizer"];
    c.optimizer.sigma0 = o.value("sigma0", c.optimizer.sigma0);
    c.optimizer.lambda = o.value("lambda", c.optimizer.lambda);
    c.optimizer.mu = o.value("mu", c.optimizer.mu);
    c.optimizer.max_evaluations = o.value("max_evaluations", c.optimizer.max_evaluations);
    c.optimizer.stall_generations = o.value("stall_generations", c.optimizer.stall_generations);
    if (o.contains("target")) c.optimizer.target = o["target"].get<double>();
  }
  if (j.contains("memorization")) {
    const Json& m = j["memorization"];
    auto& mo = c.memorization;
    mo.shots = m.value("shots", mo.shots);
    mo.batch = m.value("batch", mo.batch);
    mo.max_condition = m.value("max_condition", mo.max_condition);
    mo.prep_layers = m.value("prep_layers", mo.prep_layers);
    mo.kappa_fraction = m.value("kappa_fraction", mo.kappa_fraction);
    mo.kappas = m.value("kappas", mo.kappas);
    mo.protocols = m.value("protocols", mo.protocols);
    mo.snapshot_layers = m.value("snapshot_layers", mo.snapshot_layers);
    mo.alpha_objective = alpha_objective_from_string(
        m.value("alpha_objective", to_string(mo.alpha_objective)));
    mo.solver.iterations = m.value("solver_iterations", mo.solver.iterations);
    mo.solver.restarts = m.value("solver_restarts", mo.solver.restarts);
  }
  c.validate();
  return c;
}

Json config_to_json(const ExperimentConfig& c) {
  const auto& mo = c.memorization;
  Json opt = {{"sigma0", c.optimizer.sigma0},
              {"lambda", c.optimizer.lambda},
              {"mu", c.optimizer.mu},
              {"max_evaluations", c.optimizer.max_evaluations},
              {"stall_generations", c.optimizer.stall_generations}};
  if (std::isfinite(c.optimizer.target)) opt["target"] = c.optimizer.target;
  return {{"task", to_string(c.task)},
          {"n", c.n},
          {"N", c.sizes},
          {"r", c.ratios},
          {"test_size", c.test_size},
          {"repetitions", c.repetitions},
          {"restarts", c.restarts},
          {"objective", to_string(c.objective)},
          {"test_labels", to_string(c.test_labels)},
          {"boundary", to_string(c.boundary)},
          {"seed", c.seed},
          {"workers", c.workers},
          {"cell_time_limit", c.cell_time_limit},
          {"optimizer", std::move(opt)},
          {"memorization",
           {{"shots", mo.shots},
            {"batch", mo.batch},
            {"max_condition", mo.max_condition},
            {"prep_layers", mo.prep_layers},
            {"kappa_fraction", mo.kappa_fraction},
            {"kappas", mo.kappas},
            {"protocols", mo.protocols},
            {"snapshot_layers", mo.snapshot_layers},
            {"alpha_objective", to_string(mo.alpha_objective)},
            {"solver_iterations", mo.solver.iterations},
            {"solver_restarts", mo.solver.restarts}}}};
}

ExperimentConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path.string());
  return config_from_json(Json::parse(in, nullptr, true, /*ignore_comments=*/true));
}

// ----------------------------------------------------------------- metrics

double error_rate(const QcnnSpec& spec, std::span<const double> theta,
                  const LabeledDataset& dataset) {
  if (dataset.empty()) throw std::invalid_argument("error rate of an empty dataset");
  QcnnEvaluator eval(spec, theta);
  std::size_t wrong = 0;
  for (const auto& item : dataset.items) {
    if (predict(eval(item.state)) != item.label) ++wrong;
  }
  return static_cast<double>(wrong) / static_cast<double>(dataset.size());
}

double generalization_gap(double train_error, double test_error) {
  return std::abs(test_error - train_error);
}

// ---------------------------------------------------------------- training

CellData make_cell_data(const ExperimentConfig& c, std::size_t N, double r,
                        std::size_t rep) {
  if (!is_training_task(c.task)) throw std::invalid_argument("not a training task");
  CellData d;
  d.train_seed = derive_seed(c.seed, "train:N=" + std::to_string(N), rep);
  d.test_seed = derive_seed(c.seed, "test", rep);
  if (d.train_seed == d.test_seed) throw std::logic_error("train and test seed streams collide");

  SamplingOptions opts;
  opts.boundary = c.boundary;
  opts.workers = c.workers;
  const LabeledDataset train = sample_dataset(c.n, N, d.train_seed, opts);
  const LabeledDataset test = sample_dataset(c.n, c.test_size, d.test_seed, opts);
  const std::uint64_t ctrain = derive_seed(c.seed, cell_key("corrupt-train", N, r), rep);
  const std::uint64_t ctest = derive_seed(c.seed, cell_key("corrupt-test", N, r), rep);
  switch (c.task) {
    case Task::real:
      d.train = train;
      d.test = test;
      break;
    case Task::random_labels:
      d.train = corrupt_labels(train, 1.0, ctrain);
      d.test = corrupt_labels(test, 1.0, ctest);
      break;
    case Task::corrupted:
      d.train = corrupt_labels(train, r, ctrain);
      d.test = corrupt_labels(test, r, ctest, CountRounding::nearest);
      break;
    case Task::random_states:
      d.train = randomize_states(train, ctrain);
      d.test = randomize_states(test, ctest);
      break;
    default:
      break;
  }
  if (c.test_labels == TestLabels::true_labels) {
    for (auto& item : d.test.items) item.label = item.true_label;
  }
  return d;
}

ExperimentResult train_cell(const ExperimentConfig& c, const CellData& data,
                            std::size_t N, double r, std::size_t rep) {
  const auto start = std::chrono::steady_clock::now();
  const QcnnSpec spec = build_qcnn(c.n);
  const LabeledDataset& train = data.train;

  struct Fit {
    double risk, error;
  };
  auto fit = [&](std::span<const double> theta) {
    QcnnEvaluator eval(spec, theta);
    double risk = 0.0;
    std::size_t wrong = 0;
    for (const auto& item : train.items) {
      const auto p = eval(item.state);
      risk += sample_loss(p, item.label);
      if (predict(p) != item.label) ++wrong;
    }
    const double size = static_cast<double>(train.size());
    return Fit{risk / size, static_cast<double>(wrong) / size};
  };
  const Objective objective = [&](std::span<const double> theta) {
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (elapsed > c.cell_time_limit) {
      throw std::runtime_error("cell time limit of " + fmt(c.cell_time_limit) +
                               " s exceeded");
    }
    const Fit f = fit(theta);
    return c.objective == TrainingObjective::risk ? f.risk : f.risk + f.error;
  };
  const StopPredicate perfect = [&](std::span<const double> theta, double) {
    return fit(theta).error == 0.0;
  };

  CmaesConfig cfg = c.optimizer;
  cfg.dimension = spec.param_count();
  cfg.seed = derive_seed(c.seed, cell_key("optimizer", N, r), rep);
  cfg.workers = c.optimizer.workers;
  const RestartResult opt = minimize_with_restarts(objective, cfg, c.restarts, perfect);

  ExperimentResult res;
  res.task = c.task;
  res.n = c.n;
  res.N = N;
  res.r = c.task == Task::corrupted ? r : (c.task == Task::random_labels ? 1.0 : 0.0);
  res.repetition = rep;
  res.theta = opt.best.best_x;
  res.train_error = error_rate(spec, res.theta, train);
  res.test_error = error_rate(spec, res.theta, data.test);
  res.gap = generalization_gap(res.train_error, res.test_error);
  res.train_loss = empirical_risk(spec, res.theta, train);
  res.test_loss = empirical_risk(spec, res.theta, data.test);
  res.evaluations = 0;
  for (const auto& run : opt.runs) res.evaluations += run.evaluations;
  res.runs = opt.runs.size();
  res.stop_reason = to_string(opt.best.reason);
  res.train_seed = data.train_seed;
  res.test_seed = data.test_seed;
  res.optimizer_seed = cfg.seed;
  res.trace = opt.best.trace;
  res.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return res;
}

// ------------------------------------------------------------ memorization

namespace {

struct StateSet {
  std::vector<Circuit> preps;
  std::vector<PureState> states;
  double condition;
};

// Random brickwork preps until the Gram matrix is well conditioned.
StateSet sample_state_set(const ExperimentConfig& c, std::size_t N, Rng& rng) {
  const auto& mo = c.memorization;
  for (int attempt = 0; attempt < 200; ++attempt) {
    StateSet s;
    for (std::size_t k = 0; k < N; ++k) {
      s.preps.push_back(gates::random_brickwork(c.n, mo.prep_layers, rng));
    }
    s.states = prepared_states(s.preps, c.n);
    s.condition = gram_matrix(s.states).condition;
    if (s.condition <= mo.max_condition) return s;
  }
  throw std::runtime_error("could not sample a well-conditioned state set");
}

std::vector<double> uniform_targets(std::size_t N, Rng& rng) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::vector<double> y(N);
  for (double& v : y) v = u(rng);
  return y;
}

}  // namespace

MemorizationRecord run_thm1(const ExperimentConfig& c, std::size_t N, std::size_t rep) {
  const auto& mo = c.memorization;
  Rng rng(derive_seed(c.seed, "thm1:N=" + std::to_string(N), rep));
  std::vector<PureState> states;
  GramSystem sys;
  for (int attempt = 0;; ++attempt) {
    if (attempt == 200) throw std::runtime_error("could not sample a well-conditioned state set");
    states.clear();
    for (std::size_t k = 0; k < N; ++k) states.push_back(gates::haar_state(c.n, rng));
    sys = gram_matrix(states);
    if (sys.condition <= mo.max_condition) break;
  }
  const std::vector<double> y = uniform_targets(N, rng);
  const Eigen::VectorXd z = solve_weights(sys, y);
  const std::vector<double> zv(z.data(), z.data() + z.size());
  const SamplingPlan plan = make_sampling_plan(zv);

  double max_err = 0.0, max_ratio = 0.0;
  Json rows = Json::array();
  const double bound = 5.0 * plan.scale / std::sqrt(static_cast<double>(mo.shots));
  for (std::size_t i = 0; i < N; ++i) {
    const double exact = exact_label_readout(states, zv, i);
    Rng est_rng(derive_seed(c.seed, "thm1-estimator:N=" + std::to_string(N), rep * N + i));
    const double est = sampling_estimator(states, zv, i, mo.shots, est_rng, mo.batch);
    max_err = std::max(max_err, std::abs(exact - y[i]));
    max_ratio = std::max(max_ratio, std::abs(est - exact) / bound);
    rows.push_back({{"y", y[i]}, {"readout", exact}, {"estimate", est}});
  }
  MemorizationRecord rec{Task::thm1, c.n, N, rep, max_err <= 1e-8 && max_ratio <= 1.0, {}, {}};
  rec.metrics = {{"max_readout_error", max_err},
                 {"condition", sys.condition},
                 {"scale", plan.scale},
                 {"estimator_max_deviation_over_bound", max_ratio},
                 {"shots", static_cast<double>(mo.shots)}};
  rec.details = {{"gram", gram_to_json(sys)},
                 {"plan", sampling_plan_to_json(plan)},
                 {"items", std::move(rows)}};
  return rec;
}

MemorizationRecord run_thm2(const ExperimentConfig& c, std::size_t N, std::size_t rep) {
  Rng rng(derive_seed(c.seed, "thm2:N=" + std::to_string(N), rep));
  const StateSet set = sample_state_set(c, N, rng);
  const std::vector<double> y = uniform_targets(N, rng);
  GramSystem sys = cross_gram_matrix(set.states, prepared_states(set.preps, c.n));
  const Eigen::VectorXd z = solve_weights(sys, y);
  const std::vector<double> zv(z.data(), z.data() + z.size());
  const LcuCircuit lcu = lcu_build(set.preps, zv, c.n);
  double max_err = 0.0;
  Json rows = Json::array();
  for (std::size_t i = 0; i < N; ++i) {
    const double v = lcu_evaluate(lcu, set.states[i]);
    max_err = std::max(max_err, std::abs(v - y[i]));
    rows.push_back({{"y", y[i]}, {"lcu", v}});
  }
  MemorizationRecord rec{Task::thm2, c.n, N, rep, max_err <= 1e-8, {}, {}};
  rec.metrics = {{"max_lcu_error", max_err},
                 {"condition", sys.condition},
                 {"scale", lcu.scale},
                 {"total_qubits", static_cast<double>(lcu.num_qubits())}};
  rec.details = {{"gram", gram_to_json(sys)}, {"lcu", lcu_to_json(lcu)}, {"items", std::move(rows)}};
  return rec;
}

MemorizationRecord run_alg1(const ExperimentConfig& c, std::size_t N, std::size_t rep) {
  const auto& mo = c.memorization;
  Rng rng(derive_seed(c.seed, "alg1:N=" + std::to_string(N), rep));
  const StateSet set = sample_state_set(c, N, rng);
  std::vector<ApproximationProtocol> protocols;
  for (const auto& name : mo.protocols) {
    if (name == "exact-clone") {
      protocols.push_back(exact_clone_protocol(set.preps));
    } else if (name == "all-failure") {
      protocols.push_back(all_failure_protocol());
    } else if (name == "brickwork-snapshot") {
      protocols.push_back(brickwork_snapshot_protocol(c.n, mo.snapshot_layers));
    } else {
      throw std::invalid_argument("unknown approximation protocol: " + name);
    }
  }
  const CrossGram cg = build_crossgram(set.states, protocols,
                                       derive_seed(c.seed, "alg1-protocols", rep), 1);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(gram_matrix(set.states).W);
  const double sigma_w = svd.singularValues()[svd.singularValues().size() - 1];
  std::vector<double> kappas = mo.kappas;
  if (kappas.empty()) kappas.push_back(mo.kappa_fraction * sigma_w);

  SolverBudget budget = mo.solver;
  budget.seed = derive_seed(c.seed, "alg1-solver", rep);
  Json runs = Json::array();
  MemorizationRecord rec{Task::alg1, c.n, N, rep, true, {}, {}};
  rec.metrics["sigma_min_W"] = sigma_w;
  for (std::size_t q = 0; q < kappas.size(); ++q) {
    const AlphaResult r = find_alpha(cg, kappas[q], mo.alpha_objective, budget);
    runs.push_back(alpha_result_to_json(r, kappas[q]));
    const std::string suffix = kappas.size() == 1 ? "" : "_" + std::to_string(q);
    rec.metrics["kappa" + suffix] = kappas[q];
    rec.metrics["success" + suffix] = r.success() ? 1.0 : 0.0;
    rec.metrics["best_lambda_min" + suffix] = r.best_lambda_min;
    if (r.success()) rec.metrics["sigma_min_what" + suffix] = r.solution->sigma_min;
    rec.success = rec.success && r.success();
  }
  rec.details = {{"crossgram", crossgram_to_json(cg)}, {"alpha", std::move(runs)}};
  return rec;
}

// ------------------------------------------------------------------ driver

ExperimentReport run_experiment(const ExperimentConfig& config) {
  config.validate();
  ExperimentReport rep;
  rep.config = config;

  struct Cell {
    std::size_t N;
    double r;
    std::size_t repetition;
  };
  std::vector<Cell> cells;
  const std::vector<double> ratios =
      config.task == Task::corrupted ? config.ratios : std::vector<double>{0.0};
  for (std::size_t N : config.sizes) {
    for (double r : ratios) {
      for (std::size_t k = 0; k < config.repetitions; ++k) cells.push_back({N, r, k});
    }
  }
  // Parallelize across cells; within a cell everything runs inline.
  ExperimentConfig inner = config;
  if (cells.size() > 1 && config.workers > 1) inner.workers = 1;

  std::vector<std::optional<ExperimentResult>> results(cells.size());
  std::vector<std::optional<MemorizationRecord>> records(cells.size());
  std::vector<std::optional<FailedCell>> failures(cells.size());
  parallel_for(cells.size(), cells.size() > 1 ? config.workers : 1, [&](std::size_t idx) {
    const Cell& cell = cells[idx];
    try {
      switch (config.task) {
        case Task::thm1: records[idx] = run_thm1(inner, cell.N, cell.repetition); break;
        case Task::thm2: records[idx] = run_thm2(inner, cell.N, cell.repetition); break;
        case Task::alg1: records[idx] = run_alg1(inner, cell.N, cell.repetition); break;
        default: {
          const CellData data = make_cell_data(inner, cell.N, cell.r, cell.repetition);
          results[idx] = train_cell(inner, data, cell.N, cell.r, cell.repetition);
        }
      }
    } catch (const std::exception& e) {
      const double r = config.task == Task::corrupted ? cell.r : 0.0;
      failures[idx] = FailedCell{config.task, config.n, cell.N, r, cell.repetition, e.what()};
    }
  });
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (results[i]) rep.results.push_back(std::move(*results[i]));
    if (records[i]) rep.memorization.push_back(std::move(*records[i]));
    if (failures[i]) rep.failures.push_back(std::move(*failures[i]));
  }
  return rep;
}

// ----------------------------------------------------------------- reports

namespace {

constexpr const char* kCsvVersion = "# randfit results v1";

Json trace_to_json(const OptimTrace& t) {
  Json rows = Json::array();
  for (const auto& r : t.records) {
    rows.push_back({r.generation, r.evaluations, r.best, r.mean, r.sigma});
  }
  return rows;
}

OptimTrace trace_from_json(const Json& j) {
  OptimTrace t;
  for (const auto& r : j) {
    t.records.push_back({r[0].get<std::size_t>(), r[1].get<std::size_t>(),
                         r[2].get<double>(), r[3].get<double>(), r[4].get<double>()});
  }
  return t;
}

struct Stats {
  double mean = 0.0, std = 0.0;
};

Stats stats(const std::vector<double>& v) {
  Stats s;
  if (v.empty()) return s;
  for (double x : v) s.mean += x;
  s.mean /= static_cast<double>(v.size());
  for (double x : v) s.std += (x - s.mean) * (x - s.mean);
  s.std = std::sqrt(s.std / static_cast<double>(v.size()));
  return s;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

std::string plot_gap(const ExperimentReport& rep) {
  std::map<std::tuple<std::string, std::size_t, std::size_t>, std::vector<const ExperimentResult*>> groups;
  for (const auto& r : rep.results) groups[{to_string(r.task), r.n, r.N}].push_back(&r);
  std::string s = "task,n,N,count,mean_gap,std_gap,mean_train_error,mean_test_error\n";
  for (const auto& [key, rows] : groups) {
    std::vector<double> gap, tr, te;
    for (const auto* r : rows) {
      gap.push_back(r->gap);
      tr.push_back(r->train_error);
      te.push_back(r->test_error);
    }
    const Stats g = stats(gap);
    s += std::get<0>(key) + "," + std::to_string(std::get<1>(key)) + "," +
         std::to_string(std::get<2>(key)) + "," + std::to_string(rows.size()) + "," +
         fmt(g.mean) + "," + fmt(g.std) + "," + fmt(stats(tr).mean) + "," +
         fmt(stats(te).mean) + "\n";
  }
  return s;
}

std::string plot_ratio(const ExperimentReport& rep) {
  std::map<std::pair<std::size_t, double>, std::vector<const ExperimentResult*>> groups;
  for (const auto& r : rep.results) {
    if (r.task == Task::corrupted) groups[{r.N, r.r}].push_back(&r);
  }
  std::string s = "N,r,count,mean_test_error,std_test_error,mean_train_error\n";
  for (const auto& [key, rows] : groups) {  // ordered by N, then r ascending
    std::vector<double> te, tr;
    for (const auto* r : rows) {
      te.push_back(r->test_error);
      tr.push_back(r->train_error);
    }
    const Stats t = stats(te);
    s += std::to_string(key.first) + "," + fmt(key.second) + "," + std::to_string(rows.size()) +
         "," + fmt(t.mean) + "," + fmt(t.std) + "," + fmt(stats(tr).mean) + "\n";
  }
  return s;
}

std::string plot_trace(const ExperimentReport& rep) {
  std::string s = "task,N,r,repetition,evaluations,best_objective\n";
  for (const auto& r : rep.results) {
    for (const auto& t : r.trace.records) {
      s += to_string(r.task) + "," + std::to_string(r.N) + "," + fmt(r.r) + "," +
           std::to_string(r.repetition) + "," + std::to_string(t.evaluations) + "," +
           fmt(t.best) + "\n";
    }
  }
  return s;
}

Json failures_to_json(const ExperimentReport& rep) {
  Json j = Json::array();
  for (const auto& f : rep.failures) {
    j.push_back({{"task", to_string(f.task)},
                 {"n", f.n},
                 {"N", f.N},
                 {"r", f.r},
                 {"repetition", f.repetition},
                 {"error", f.error}});
  }
  return j;
}

}  // namespace

void write_results_csv(std::ostream& out, const ExperimentReport& rep) {
  out << kCsvVersion << '\n'
      << "task,n,N,r,repetition,train_error,test_error,gap,train_loss,test_loss,"
         "evaluations,runs,stop_reason,train_seed,test_seed,optimizer_seed\n";
  for (const auto& r : rep.results) {
    out << to_string(r.task) << ',' << r.n << ',' << r.N << ',' << fmt(r.r) << ','
        << r.repetition << ',' << fmt(r.train_error) << ',' << fmt(r.test_error) << ','
        << fmt(r.gap) << ',' << fmt(r.train_loss) << ',' << fmt(r.test_loss) << ','
        << r.evaluations << ',' << r.runs << ',' << r.stop_reason << ',' << r.train_seed
        << ',' << r.test_seed << ',' << r.optimizer_seed << '\n';
  }
}

Json report_to_json(const ExperimentReport& rep) {
  Json results = Json::array();
  for (const auto& r : rep.results) {
    results.push_back({{"task", to_string(r.task)},
                       {"n", r.n},
                       {"N", r.N},
                       {"r", r.r},
                       {"repetition", r.repetition},
                       {"train_error", r.train_error},
                       {"test_error", r.test_error},
                       {"gap", r.gap},
                       {"train_loss", r.train_loss},
                       {"test_loss", r.test_loss},
                       {"evaluations", r.evaluations},
                       {"runs", r.runs},
                       {"stop_reason", r.stop_reason},
                       {"train_seed", r.train_seed},
                       {"test_seed", r.test_seed},
                       {"optimizer_seed", r.optimizer_seed},
                       {"wall_time", r.wall_time},
                       {"theta", r.theta},
                       {"trace", trace_to_json(r.trace)}});
  }
  Json memo = Json::array();
  for (const auto& m : rep.memorization) {
    memo.push_back({{"task", to_string(m.task)},
                    {"n", m.n},
                    {"N", m.N},
                    {"repetition", m.repetition},
                    {"success", m.success},
                    {"metrics", m.metrics},
                    {"details", m.details}});
  }
  return {{"format", "randfit-report"},
          {"version", 1},
          {"config", config_to_json(rep.config)},
          {"results", std::move(results)},
          {"memorization", std::move(memo)},
          {"failures", failures_to_json(rep)}};
}

ExperimentReport report_from_json(const Json& j) {
  if (j.value("format", "") != "randfit-report") throw std::runtime_error("not a randfit report");
  ExperimentReport rep;
  rep.config = config_from_json(j.at("config"));
  for (const auto& r : j.at("results")) {
    ExperimentResult x;
    x.task = task_from_string(r.at("task").get<std::string>());
    x.n = r.at("n").get<std::size_t>();
    x.N = r.at("N").get<std::size_t>();
    x.r = r.at("r").get<double>();
    x.repetition = r.at("repetition").get<std::size_t>();
    x.train_error = r.at("train_error").get<double>();
    x.test_error = r.at("test_error").get<double>();
    x.gap = r.at("gap").get<double>();
    x.train_loss = r.at("train_loss").get<double>();
    x.test_loss = r.at("test_loss").get<double>();
    x.evaluations = r.at("evaluations").get<std::size_t>();
    x.runs = r.at("runs").get<std::size_t>();
    x.stop_reason = r.at("stop_reason").get<std::string>();
    x.train_seed = r.at("train_seed").get<std::uint64_t>();
    x.test_seed = r.at("test_seed").get<std::uint64_t>();
    x.optimizer_seed = r.at("optimizer_seed").get<std::uint64_t>();
    x.wall_time = r.value("wall_time", 0.0);
    x.theta = r.value("theta", ParamVector{});
    if (r.contains("trace")) x.trace = trace_from_json(r["trace"]);
    rep.results.push_back(std::move(x));
  }
  for (const auto& m : j.value("memorization", Json::array())) {
    MemorizationRecord x;
    x.task = task_from_string(m.at("task").get<std::string>());
    x.n = m.at("n").get<std::size_t>();
    x.N = m.at("N").get<std::size_t>();
    x.repetition = m.at("repetition").get<std::size_t>();
    x.success = m.at("success").get<bool>();
    x.metrics = m.at("metrics").get<std::map<std::string, double>>();
    x.details = m.value("details", Json::object());
    rep.memorization.push_back(std::move(x));
  }
  for (const auto& f : j.value("failures", Json::array())) {
    rep.failures.push_back({task_from_string(f.at("task").get<std::string>()),
                            f.at("n").get<std::size_t>(), f.at("N").get<std::size_t>(),
                            f.at("r").get<double>(), f.at("repetition").get<std::size_t>(),
                            f.at("error").get<std::string>()});
  }
  return rep;
}

void report(const ExperimentReport& rep, const fs::path& dir,
            std::span<const ReportFormat> formats) {
  if (rep.results.empty() && rep.memorization.empty() && rep.failures.empty()) {
    throw std::invalid_argument("nothing to report");
  }
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory " + dir.string());
  for (ReportFormat f : formats) {
    switch (f) {
      case ReportFormat::csv: {
        std::ofstream out(dir / "results.csv", std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + (dir / "results.csv").string());
        write_results_csv(out, rep);
        break;
      }
      case ReportFormat::json:
        write_file(dir / "results.json", report_to_json(rep).dump(2) + "\n");
        break;
      case ReportFormat::plotdata: {
        const fs::path pd = dir / "plotdata";
        fs::create_directories(pd, ec);
        if (ec) throw std::runtime_error("cannot create " + pd.string());
        write_file(pd / "gap_vs_N.csv", plot_gap(rep));
        write_file(pd / "test_error_vs_r.csv", plot_ratio(rep));
        write_file(pd / "loss_vs_evaluations.csv", plot_trace(rep));
        break;
      }
    }
  }
  write_file(dir / "errors.json", failures_to_json(rep).dump(2) + "\n");
}

}  // namespace randfit
