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


// Command-line entry point: randfit gen-data|train|sweep|memorize|condition|report

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "randfit/corruption.hpp"
#include "randfit/dataset.hpp"
#include "randfit/experiment.hpp"
#include "randfit/parallel.hpp"
#include "randfit/phase.hpp"
#include "randfit/qcnn.hpp"

namespace fs = std::filesystem;
using namespace randfit;

namespace {

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> workers;
  std::string out;
};

void add_common(CLI::App* cmd, Common& c, bool out_required = true) {
  cmd->add_option("--config", c.config, "JSON config file")->check(CLI::ExistingFile);
  cmd->add_option("--seed", c.seed, "Master seed (overrides the config)");
  cmd->add_option("--workers", c.workers,
                  "Worker threads (default: RANDFIT_WORKERS or hardware concurrency)");
  auto* o = cmd->add_option("--out", c.out, "Output path");
  if (out_required) o->required();
}

ExperimentConfig resolve(const Common& c, ExperimentConfig base = {}) {
  ExperimentConfig cfg = c.config.empty() ? base : load_config(c.config);
  if (c.seed) cfg.seed = *c.seed;
  cfg.workers = c.workers ? *c.workers : (c.config.empty() ? default_workers() : cfg.workers);
  if (cfg.workers == 0) cfg.workers = 1;
  return cfg;
}

void write_json(const fs::path& path, const Json& j) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

void summarize(const ExperimentReport& rep) {
  for (const auto& r : rep.results) {
    std::cout << to_string(r.task) << " n=" << r.n << " N=" << r.N << " r=" << r.r
              << " rep=" << r.repetition << "  train_error=" << r.train_error
              << " test_error=" << r.test_error << " gap=" << r.gap << '\n';
  }
  for (const auto& m : rep.memorization) {
    std::cout << to_string(m.task) << " n=" << m.n << " N=" << m.N << " rep=" << m.repetition
              << (m.success ? "  ok" : "  FAILED");
    for (const auto& [k, v] : m.metrics) std::cout << ' ' << k << '=' << v;
    std::cout << '\n';
  }
  for (const auto& f : rep.failures) {
    std::cerr << "failed cell N=" << f.N << " r=" << f.r << " rep=" << f.repetition << ": "
              << f.error << '\n';
  }
}

std::vector<ReportFormat> parse_formats(const std::vector<std::string>& names) {
  std::vector<ReportFormat> out;
  for (const auto& n : names) {
    if (n == "csv") out.push_back(ReportFormat::csv);
    else if (n == "json") out.push_back(ReportFormat::json);
    else if (n == "plotdata") out.push_back(ReportFormat::plotdata);
    else throw std::invalid_argument("unknown report format: " + n);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Randomization tests and memorization constructions for QCNN phase classifiers"};
  app.require_subcommand(1);

  // gen-data
  Common gen;
  std::size_t gen_n = 8, gen_N = 20;
  std::string gen_mode = "none", gen_boundary = "periodic", gen_spec;
  double gen_ratio = 1.0;
  auto* cmd_gen = app.add_subcommand("gen-data", "Sample a labeled ground-state dataset");
  add_common(cmd_gen, gen);
  cmd_gen->add_option("--n", gen_n, "Qubits");
  cmd_gen->add_option("--N", gen_N, "Number of items");
  cmd_gen->add_option("--corruption", gen_mode, "none|labels|partial|states");
  cmd_gen->add_option("--ratio", gen_ratio, "Corruption ratio (partial mode)");
  cmd_gen->add_option("--boundary", gen_boundary, "periodic|open");
  cmd_gen->add_option("--boundary-spec", gen_spec, "Phase boundary JSON file")
      ->check(CLI::ExistingFile);

  // train
  Common tr;
  std::string tr_train, tr_test;
  auto* cmd_train = app.add_subcommand("train", "Train one QCNN on dataset files");
  add_common(cmd_train, tr);
  cmd_train->add_option("--train", tr_train, "Training dataset file")->required()->check(CLI::ExistingFile);
  cmd_train->add_option("--test", tr_test, "Test dataset file")->check(CLI::ExistingFile);

  // sweep
  Common sw;
  auto* cmd_sweep = app.add_subcommand("sweep", "Run an experiment grid and write reports");
  add_common(cmd_sweep, sw);

  // memorize
  Common mem;
  std::string mem_task = "thm1";
  std::optional<std::size_t> mem_n, mem_N;
  auto* cmd_mem = app.add_subcommand("memorize", "Exact label-fitting constructions");
  add_common(cmd_mem, mem);
  cmd_mem->add_option("--task", mem_task, "thm1|thm2");
  cmd_mem->add_option("--n", mem_n, "Qubits");
  cmd_mem->add_option("--N", mem_N, "Number of states");

  // condition
  Common cond;
  std::optional<std::size_t> cond_n, cond_N, cond_iters, cond_restarts;
  std::vector<double> cond_kappa;
  std::optional<std::string> cond_objective;
  std::vector<std::string> cond_protocols;
  auto* cmd_cond = app.add_subcommand("condition", "Search for well-conditioned approximation weights");
  add_common(cmd_cond, cond);
  cmd_cond->add_option("--n", cond_n, "Qubits");
  cmd_cond->add_option("--N", cond_N, "Number of states");
  cmd_cond->add_option("--kappa", cond_kappa, "Target lower bound(s) on sigma_min");
  cmd_cond->add_option("--objective", cond_objective, "none|l1|l2");
  cmd_cond->add_option("--budget", cond_iters, "Iterations per restart");
  cmd_cond->add_option("--restarts", cond_restarts, "Solver restarts");
  cmd_cond->add_option("--protocols", cond_protocols,
                       "exact-clone|all-failure|brickwork-snapshot")->delimiter(',');

  // report
  Common rpt;
  std::string rpt_in;
  std::vector<std::string> rpt_formats = {"csv", "json", "plotdata"};
  auto* cmd_report = app.add_subcommand("report", "Rewrite reports from a results.json file");
  add_common(cmd_report, rpt);
  cmd_report->add_option("--in", rpt_in, "results.json from a previous run")
      ->required()->check(CLI::ExistingFile);
  cmd_report->add_option("--format", rpt_formats, "csv,json,plotdata")->delimiter(',');

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmd_gen->parsed()) {
      const ExperimentConfig cfg = resolve(gen);
      SamplingOptions opts;
      opts.boundary = boundary_from_string(gen_boundary);
      opts.workers = cfg.workers;
      std::optional<PhaseBoundarySpec> spec;
      if (!gen_spec.empty()) {
        spec = PhaseBoundarySpec::from_file(gen_spec);
        opts.boundary_spec = &*spec;
      }
      LabeledDataset ds = sample_dataset(gen_n, gen_N, cfg.seed, opts);
      if (gen_mode != "none") {
        CorruptionConfig cc{corruption_mode_from_string(gen_mode), gen_ratio,
                            derive_seed(cfg.seed, "corruption")};
        ds = apply_corruption(ds, cc);
      }
      const fs::path out = gen.out;
      if (out.has_parent_path()) fs::create_directories(out.parent_path());
      save_dataset(out.string(), ds);
      std::cout << "wrote " << ds.size() << " items (" << to_string(ds.provenance.distribution)
                << ") to " << out.string() << '\n';
    } else if (cmd_train->parsed()) {
      ExperimentConfig cfg = resolve(tr);
      CellData data;
      data.train = load_dataset(tr_train);
      data.test = tr_test.empty() ? data.train : load_dataset(tr_test);
      data.train_seed = data.train.provenance.seed;
      data.test_seed = data.test.provenance.seed;
      cfg.n = data.train.provenance.n;
      const ExperimentResult r = train_cell(cfg, data, data.train.size(), data.train.provenance.ratio, 0);
      const fs::path dir = tr.out;
      fs::create_directories(dir);
      write_json(dir / "theta.json", params_to_json(build_qcnn(cfg.n), r.theta));
      std::ofstream trace(dir / "trace.csv");
      write_trace_csv(trace, r.trace);
      write_json(dir / "metrics.json", {{"train_error", r.train_error},
                                        {"test_error", r.test_error},
                                        {"gap", r.gap},
                                        {"train_loss", r.train_loss},
                                        {"test_loss", r.test_loss},
                                        {"evaluations", r.evaluations},
                                        {"runs", r.runs},
                                        {"stop_reason", r.stop_reason}});
      std::cout << "train_error=" << r.train_error << " test_error=" << r.test_error
                << " gap=" << r.gap << '\n';
    } else if (cmd_sweep->parsed()) {
      if (sw.config.empty()) throw std::invalid_argument("sweep needs --config");
      const ExperimentConfig cfg = resolve(sw);
      const ExperimentReport rep = run_experiment(cfg);
      const std::vector<ReportFormat> all = {ReportFormat::csv, ReportFormat::json,
                                             ReportFormat::plotdata};
      report(rep, sw.out, all);
      summarize(rep);
      return rep.failures.empty() ? 0 : 2;
    } else if (cmd_mem->parsed()) {
      ExperimentConfig base;
      base.task = task_from_string(mem_task);
      base.n = 4;
      base.sizes = {8};
      base.repetitions = 1;
      ExperimentConfig cfg = resolve(mem, base);
      if (mem.config.empty()) cfg.task = task_from_string(mem_task);
      if (mem_n) cfg.n = *mem_n;
      if (mem_N) cfg.sizes = {*mem_N};
      if (cfg.task != Task::thm1 && cfg.task != Task::thm2) {
        throw std::invalid_argument("memorize runs thm1 or thm2");
      }
      const ExperimentReport rep = run_experiment(cfg);
      const std::vector<ReportFormat> fmt = {ReportFormat::json};
      report(rep, mem.out, fmt);
      summarize(rep);
      return rep.failures.empty() ? 0 : 2;
    } else if (cmd_cond->parsed()) {
      ExperimentConfig base;
      base.task = Task::alg1;
      base.n = 3;
      base.sizes = {4};
      base.repetitions = 1;
      base.memorization.protocols = {"exact-clone", "all-failure"};
      ExperimentConfig cfg = resolve(cond, base);
      cfg.task = Task::alg1;
      if (cond_n) cfg.n = *cond_n;
      if (cond_N) cfg.sizes = {*cond_N};
      auto& mo = cfg.memorization;
      if (!cond_kappa.empty()) mo.kappas = cond_kappa;
      if (cond_objective) mo.alpha_objective = alpha_objective_from_string(*cond_objective);
      if (cond_iters) mo.solver.iterations = *cond_iters;
      if (cond_restarts) mo.solver.restarts = *cond_restarts;
      if (!cond_protocols.empty()) mo.protocols = cond_protocols;
      const ExperimentReport rep = run_experiment(cfg);
      const std::vector<ReportFormat> fmt = {ReportFormat::json};
      report(rep, cond.out, fmt);
      summarize(rep);
      return rep.failures.empty() ? 0 : 2;
    } else if (cmd_report->parsed()) {
      std::ifstream in(rpt_in);
      const ExperimentReport rep = report_from_json(Json::parse(in));
      report(rep, rpt.out, parse_formats(rpt_formats));
      std::cout << "wrote reports for " << rep.results.size() << " results and "
                << rep.memorization.size() << " memorization records to " << rpt.out << '\n';
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
