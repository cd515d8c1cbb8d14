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

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

#include <Eigen/Dense>

#include "randfit/parallel.hpp"

namespace randfit {

std::string to_string(StopReason r) {
  switch (r) {
    case StopReason::max_evaluations: return "max_evaluations";
    case StopReason::target: return "target";
    case StopReason::predicate: return "predicate";
    case StopReason::stall: return "stall";
  }
  return "?";
}

namespace {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

struct Strategy {
  std::size_t lambda, mu;
  Vec weights;
  double mueff, cs, ds, cc, c1, cmu, chi_n;
};

Strategy make_strategy(const CmaesConfig& cfg) {
  const double d = static_cast<double>(cfg.dimension);
  Strategy s;
  s.lambda = cfg.lambda ? cfg.lambda
                        : 4 + static_cast<std::size_t>(std::floor(3.0 * std::log(d)));
  s.mu = cfg.mu ? cfg.mu : s.lambda / 2;
  if (s.lambda < 2) throw std::invalid_argument("CMA-ES population size must be >= 2");
  if (s.mu < 1 || s.mu > s.lambda) throw std::invalid_argument("CMA-ES parent count out of range");
  s.weights.resize(static_cast<Eigen::Index>(s.mu));
  for (std::size_t i = 0; i < s.mu; ++i) {
    s.weights[static_cast<Eigen::Index>(i)] =
        std::log((static_cast<double>(s.lambda) + 1.0) / 2.0) - std::log(i + 1.0);
  }
  if (s.weights.minCoeff() <= 0.0) {
    // Only possible when mu is close to lambda; fall back to equal weights.
    s.weights.setOnes();
  }
  s.weights /= s.weights.sum();
  s.mueff = 1.0 / s.weights.squaredNorm();
  s.cs = (s.mueff + 2.0) / (d + s.mueff + 5.0);
  s.ds = 1.0 + 2.0 * std::max(0.0, std::sqrt((s.mueff - 1.0) / (d + 1.0)) - 1.0) + s.cs;
  s.cc = (4.0 + s.mueff / d) / (d + 4.0 + 2.0 * s.mueff / d);
  s.c1 = 2.0 / ((d + 1.3) * (d + 1.3) + s.mueff);
  s.cmu = std::min(1.0 - s.c1,
                   2.0 * (s.mueff - 2.0 + 1.0 / s.mueff) / ((d + 2.0) * (d + 2.0) + s.mueff));
  s.chi_n = std::sqrt(d) * (1.0 - 1.0 / (4.0 * d) + 1.0 / (21.0 * d * d));
  return s;
}

}  // namespace

CmaesResult minimize(const Objective& objective, const CmaesConfig& cfg,
                     const StopPredicate& stop) {
  if (cfg.dimension == 0) throw std::invalid_argument("CMA-ES dimension must be >= 1");
  if (!(cfg.sigma0 > 0.0)) throw std::invalid_argument("CMA-ES sigma0 must be > 0");
  if (!cfg.initial_mean.empty() && cfg.initial_mean.size() != cfg.dimension) {
    throw std::invalid_argument("CMA-ES initial mean has the wrong dimension");
  }
  const Strategy st = make_strategy(cfg);
  if (cfg.max_evaluations < st.lambda) {
    throw std::invalid_argument("CMA-ES budget is smaller than one generation");
  }
  const auto n = static_cast<Eigen::Index>(cfg.dimension);
  const auto lam = static_cast<Eigen::Index>(st.lambda);

  Rng rng(cfg.seed);
  Vec mean(n);
  if (cfg.initial_mean.empty()) {
    std::uniform_real_distribution<double> u(cfg.mean_low, cfg.mean_high);
    for (Eigen::Index i = 0; i < n; ++i) mean[i] = u(rng);
  } else {
    for (Eigen::Index i = 0; i < n; ++i) mean[i] = cfg.initial_mean[static_cast<std::size_t>(i)];
  }
  double sigma = cfg.sigma0;
  Vec ps = Vec::Zero(n), pc = Vec::Zero(n);
  Mat C = Mat::Identity(n, n), B = Mat::Identity(n, n);
  Vec D = Vec::Ones(n);
  std::normal_distribution<double> normal(0.0, 1.0);

  CmaesResult res;
  Mat ys(n, lam), xs(n, lam);
  std::vector<double> values(st.lambda);
  std::size_t stall = 0;
  double stall_ref = res.best_value;

  for (std::size_t gen = 0;; ++gen) {
    if (res.evaluations + st.lambda > cfg.max_evaluations) {
      res.reason = StopReason::max_evaluations;
      break;
    }
    for (Eigen::Index k = 0; k < lam; ++k) {
      Vec z(n);
      for (Eigen::Index i = 0; i < n; ++i) z[i] = normal(rng);
      ys.col(k) = B * D.cwiseProduct(z);
      xs.col(k) = mean + sigma * ys.col(k);
    }
    parallel_for(st.lambda, cfg.workers, [&](std::size_t k) {
      const auto col = static_cast<Eigen::Index>(k);
      values[k] = objective(std::span<const double>(xs.col(col).data(), cfg.dimension));
    });
    res.evaluations += st.lambda;

    bool halt = false;
    double gen_sum = 0.0;
    for (std::size_t k = 0; k < st.lambda; ++k) {
      const double v = values[k];
      if (!std::isfinite(v)) {
        std::ostringstream msg;
        msg << "objective returned a non-finite value (" << v << ") at generation "
            << gen << ", candidate " << k;
        throw std::runtime_error(msg.str());
      }
      gen_sum += v;
      if (v < res.best_value) {
        res.best_value = v;
        const auto col = static_cast<Eigen::Index>(k);
        res.best_x.assign(xs.col(col).data(), xs.col(col).data() + n);
        if (stop && stop(res.best_x, v)) {
          res.reason = StopReason::predicate;
          halt = true;
        }
      }
    }
    res.trace.records.push_back({gen, res.evaluations, res.best_value,
                                 gen_sum / static_cast<double>(st.lambda), sigma});
    if (halt) break;
    if (res.best_value <= cfg.target) {
      res.reason = StopReason::target;
      break;
    }
    if (cfg.stall_generations > 0) {
      if (res.best_value < stall_ref - cfg.stall_tolerance) {
        stall_ref = res.best_value;
        stall = 0;
      } else if (++stall >= cfg.stall_generations) {
        res.reason = StopReason::stall;
        break;
      }
    }

    // Selection and recombination.
    std::vector<std::size_t> order(st.lambda);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    Vec yw = Vec::Zero(n);
    for (std::size_t i = 0; i < st.mu; ++i) {
      yw += st.weights[static_cast<Eigen::Index>(i)] * ys.col(static_cast<Eigen::Index>(order[i]));
    }
    mean += sigma * yw;

    // Step-size path uses C^{-1/2} y_w = B D^{-1} B^T y_w.
    const Vec invsqrt_yw = B * (B.transpose() * yw).cwiseQuotient(D);
    ps = (1.0 - st.cs) * ps + std::sqrt(st.cs * (2.0 - st.cs) * st.mueff) * invsqrt_yw;
    const double ps_norm = ps.norm();
    const double decay = 1.0 - std::pow(1.0 - st.cs, 2.0 * static_cast<double>(gen + 1));
    const bool hsig = ps_norm / std::sqrt(decay) <
                      (1.4 + 2.0 / (static_cast<double>(n) + 1.0)) * st.chi_n;
    pc = (1.0 - st.cc) * pc +
         (hsig ? std::sqrt(st.cc * (2.0 - st.cc) * st.mueff) : 0.0) * yw;

    Mat rank_mu = Mat::Zero(n, n);
    for (std::size_t i = 0; i < st.mu; ++i) {
      const auto y = ys.col(static_cast<Eigen::Index>(order[i]));
      rank_mu.noalias() += st.weights[static_cast<Eigen::Index>(i)] * y * y.transpose();
    }
    const double old_weight = 1.0 - st.c1 - st.cmu +
                              (hsig ? 0.0 : st.c1 * st.cc * (2.0 - st.cc));
    C = old_weight * C + st.c1 * pc * pc.transpose() + st.cmu * rank_mu;
    C = 0.5 * (C + C.transpose());

    sigma *= std::exp((st.cs / st.ds) * (ps_norm / st.chi_n - 1.0));

    Eigen::SelfAdjointEigenSolver<Mat> eig(C);
    Vec ev = eig.eigenvalues();
    const double floor = std::max(ev.maxCoeff(), 1e-300) * 1e-14;
    if (ev.minCoeff() <= floor) {
      const std::string w = "covariance eigenvalue " + std::to_string(ev.minCoeff()) +
                            " floored at generation " + std::to_string(gen);
      std::clog << "warning: CMA-ES " << w << '\n';
      res.warnings.push_back(w);
      ev = ev.cwiseMax(floor);
      C = eig.eigenvectors() * ev.asDiagonal() * eig.eigenvectors().transpose();
    }
    B = eig.eigenvectors();
    D = ev.cwiseSqrt();
  }
  return res;
}

RestartResult minimize_with_restarts(const Objective& objective,
                                     const CmaesConfig& config,
                                     std::size_t restarts,
                                     const StopPredicate& stop) {
  if (restarts == 0) throw std::invalid_argument("need at least one CMA-ES run");
  RestartResult out;
  for (std::size_t k = 0; k < restarts; ++k) {
    CmaesConfig cfg = config;
    cfg.seed = derive_seed(config.seed, "restart", k);
    out.runs.push_back(minimize(objective, cfg, stop));
    const auto& run = out.runs.back();
    if (run.reason == StopReason::predicate) {
      out.best = run;
      break;
    }
    if (k == 0 || run.best_value < out.best.best_value) out.best = run;
  }
  return out;
}

void write_trace_csv(std::ostream& out, const OptimTrace& trace) {
  out << "generation,evaluations,best,mean,sigma\n";
  char buf[128];
  for (const auto& r : trace.records) {
    std::snprintf(buf, sizeof buf, "%zu,%zu,%.17g,%.17g,%.17g\n", r.generation,
                  r.evaluations, r.best, r.mean, r.sigma);
    out << buf;
  }
}

}  // namespace randfit
