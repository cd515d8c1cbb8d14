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


#include "randfit/conditioning.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "randfit/gates.hpp"
#include "randfit/parallel.hpp"

namespace randfit {

// ---------------------------------------------------------------- protocols

ApproximationProtocol exact_clone_protocol(std::vector<Circuit> preps) {
  std::size_t bound = 0;
  for (const auto& c : preps) bound = std::max(bound, c.size());
  ApproximationProtocol p;
  p.tag = "exact-clone";
  p.gate_bound = bound;
  p.run = [preps = std::move(preps)](const PureState&, std::size_t index,
                                     Rng&) -> std::optional<Circuit> {
    if (index >= preps.size()) return std::nullopt;
    return preps[index];
  };
  return p;
}

ApproximationProtocol all_failure_protocol() {
  ApproximationProtocol p;
  p.tag = "all-failure";
  p.gate_bound = 0;
  p.run = [](const PureState&, std::size_t, Rng&) -> std::optional<Circuit> {
    return std::nullopt;
  };
  return p;
}

ApproximationProtocol brickwork_snapshot_protocol(std::size_t n, std::size_t layers) {
  if (n == 0 || layers == 0) throw std::invalid_argument("snapshot protocol needs n, layers >= 1");
  ApproximationProtocol p;
  p.tag = "brickwork-snapshot";
  p.gate_bound = layers * std::max<std::size_t>(n - 1, 1) + n;
  p.run = [n, layers](const PureState& psi, std::size_t,
                      Rng& rng) -> std::optional<Circuit> {
    if (psi.num_qubits() != n) throw std::invalid_argument("snapshot protocol size mismatch");
    const Circuit u = gates::random_brickwork(n, layers, rng);
    const PureState rotated = apply_circuit(psi, u);
    std::vector<double> probs(rotated.dimension());
    for (std::size_t i = 0; i < probs.size(); ++i) probs[i] = std::norm(rotated[i]);
    std::discrete_distribution<std::size_t> outcome(probs.begin(), probs.end());
    const std::size_t b = outcome(rng);
    Circuit prep;
    for (std::size_t q = 0; q < n; ++q) {
      if ((b >> (n - 1 - q)) & 1U) prep.emplace_back(gates::pauli_x(), std::vector<Qubit>{q});
    }
    for (const auto& g : inverse(u)) prep.push_back(g);
    return prep;
  };
  return p;
}

// ---------------------------------------------------------------- crossgram

CrossGram build_crossgram(std::span<const PureState> states,
                          std::span<const ApproximationProtocol> protocols,
                          std::uint64_t seed, std::size_t workers) {
  if (states.empty() || protocols.empty()) {
    throw std::invalid_argument("cross-Gram needs at least one state and one protocol");
  }
  const std::size_t n = states[0].num_qubits();
  for (const auto& s : states) {
    if (s.num_qubits() != n) throw std::invalid_argument("states have different qubit counts");
  }
  CrossGram cg;
  cg.N = states.size();
  cg.m = protocols.size();
  cg.preps.assign(cg.N * cg.m, Circuit{});
  cg.failed.assign(cg.N * cg.m, false);
  for (const auto& p : protocols) cg.tags.push_back(p.tag);

  std::vector<std::optional<PureState>> sigma(cg.N * cg.m);
  std::vector<char> failed(cg.N * cg.m, 0);
  parallel_for(cg.N * cg.m, workers, [&](std::size_t idx) {
    const std::size_t j = idx / cg.m, k = idx % cg.m;
    Rng rng(derive_seed(seed, "protocol", idx));
    std::optional<Circuit> c = protocols[k].run(states[j], j, rng);
    if (!c) {
      failed[idx] = 1;
      c = Circuit{};
    }
    if (c->size() > protocols[k].gate_bound) {
      throw std::logic_error("protocol " + protocols[k].tag + " exceeded its gate bound");
    }
    sigma[idx] = apply_circuit(PureState(n), *c);
    cg.preps[idx] = std::move(*c);
  });
  for (std::size_t idx = 0; idx < failed.size(); ++idx) cg.failed[idx] = failed[idx] != 0;

  cg.values.resize(cg.N * cg.N * cg.m);
  for (std::size_t i = 0; i < cg.N; ++i) {
    for (std::size_t j = 0; j < cg.N; ++j) {
      for (std::size_t k = 0; k < cg.m; ++k) {
        cg.values[(i * cg.N + j) * cg.m + k] = overlap(states[i], *sigma[j * cg.m + k]);
      }
    }
  }
  return cg;
}

// ----------------------------------------------------------------- assembly

namespace {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

Mat build_w(const CrossGram& cg, std::span<const double> alpha) {
  const auto N = static_cast<Eigen::Index>(cg.N);
  Mat W = Mat::Zero(N, N);
  for (std::size_t i = 0; i < cg.N; ++i) {
    for (std::size_t j = 0; j < cg.N; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < cg.m; ++k) s += alpha[j * cg.m + k] * cg(i, j, k);
      W(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = s;
    }
  }
  return W;
}

double spectral_norm(const Mat& W) {
  Eigen::JacobiSVD<Mat> svd(W);
  return svd.singularValues()[0];
}

struct SymSpectrum {
  double lambda;
  Vec v;
};

SymSpectrum sym_min(const Mat& W) {
  Eigen::SelfAdjointEigenSolver<Mat> eig(0.5 * (W + W.transpose()));
  return {eig.eigenvalues()[0], eig.eigenvectors().col(0)};
}

// Subgradient of alpha -> lambda_min(sym W(alpha)) at eigenvector v.
std::vector<double> subgradient(const CrossGram& cg, const Vec& v) {
  std::vector<double> g(cg.N * cg.m, 0.0);
  for (std::size_t j = 0; j < cg.N; ++j) {
    for (std::size_t k = 0; k < cg.m; ++k) {
      double s = 0.0;
      for (std::size_t i = 0; i < cg.N; ++i) {
        s += v[static_cast<Eigen::Index>(i)] * cg(i, j, k);
      }
      g[j * cg.m + k] = v[static_cast<Eigen::Index>(j)] * s;
    }
  }
  return g;
}

// Rescale alpha so that ||W|| = N (slightly below, to absorb rounding).
void project(const CrossGram& cg, std::vector<double>& alpha) {
  const double norm = spectral_norm(build_w(cg, alpha));
  if (!(norm > 0.0)) return;
  const double f = static_cast<double>(cg.N) * (1.0 - 1e-12) / norm;
  for (double& a : alpha) a *= f;
}

double vec_norm(std::span<const double> a, AlphaObjective o) {
  double s = 0.0;
  if (o == AlphaObjective::min_l1) {
    for (double x : a) s += std::abs(x);
    return s;
  }
  for (double x : a) s += x * x;
  return std::sqrt(s);
}

struct Trajectory {
  std::vector<double> alpha;
  double lambda = -std::numeric_limits<double>::infinity();
  bool reached = false;
};

Trajectory ascend(const CrossGram& cg, double kappa, std::size_t restart,
                  const SolverBudget& budget) {
  const std::size_t D = cg.N * cg.m;
  std::vector<double> alpha(D);
  if (restart == 0) {
    std::fill(alpha.begin(), alpha.end(), 1.0 / static_cast<double>(cg.m));
  } else {
    Rng rng(derive_seed(budget.seed, "alpha-restart", restart));
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (double& a : alpha) a = u(rng);
  }
  project(cg, alpha);

  Trajectory best;
  double delta = 0.25 * static_cast<double>(cg.N);
  std::size_t since_improve = 0;
  for (std::size_t t = 0; t < budget.iterations; ++t) {
    const SymSpectrum sp = sym_min(build_w(cg, alpha));
    if (sp.lambda > best.lambda) {
      best.lambda = sp.lambda;
      best.alpha = alpha;
      since_improve = 0;
    } else if (++since_improve >= 10) {
      delta *= 0.5;
      since_improve = 0;
    }
    if (best.lambda >= kappa) {
      best.reached = true;
      break;
    }
    const std::vector<double> g = subgradient(cg, sp.v);
    double g2 = 0.0;
    for (double x : g) g2 += x * x;
    if (!(g2 > 0.0) || delta < 1e-14) break;
    // Polyak step toward the target level best + delta.
    const double step = (best.lambda + delta - sp.lambda) / g2;
    for (std::size_t d = 0; d < D; ++d) alpha[d] += step * g[d];
    project(cg, alpha);
  }
  return best;
}

// Minimizes ||alpha|| / lambda_min while lambda_min / ||W|| stays >= kappa / N,
// then rescales so lambda_min sits just above kappa.
std::vector<double> shrink(const CrossGram& cg, double kappa, std::vector<double> alpha,
                           AlphaObjective o, std::size_t iterations) {
  const double N = static_cast<double>(cg.N);
  const std::size_t D = alpha.size();
  auto ratio_ok = [&](const Mat& W, double lambda) {
    return lambda > 0.0 && lambda / spectral_norm(W) >= kappa / N;
  };
  std::vector<double> best = alpha;
  double best_phi = vec_norm(alpha, o) / sym_min(build_w(cg, alpha)).lambda;
  for (std::size_t t = 0; t < iterations; ++t) {
    const SymSpectrum sp = sym_min(build_w(cg, alpha));
    const double a_norm = vec_norm(alpha, o);
    const std::vector<double> gl = subgradient(cg, sp.v);
    std::vector<double> grad(D);
    for (std::size_t d = 0; d < D; ++d) {
      const double gn = o == AlphaObjective::min_l1
                            ? (alpha[d] > 0 ? 1.0 : alpha[d] < 0 ? -1.0 : 0.0)
                            : alpha[d] / a_norm;
      grad[d] = (gn * sp.lambda - a_norm * gl[d]) / (sp.lambda * sp.lambda);
    }
    double gnorm = 0.0;
    for (double x : grad) gnorm += x * x;
    gnorm = std::sqrt(gnorm);
    if (!(gnorm > 0.0)) break;
    const double h = 0.05 * a_norm / std::sqrt(static_cast<double>(t) + 1.0);
    std::vector<double> next(D);
    for (std::size_t d = 0; d < D; ++d) next[d] = alpha[d] - h * grad[d] / gnorm;
    const Mat W = build_w(cg, next);
    const double lambda = sym_min(W).lambda;
    if (!ratio_ok(W, lambda)) continue;
    alpha = std::move(next);
    const double phi = vec_norm(alpha, o) / lambda;
    if (phi < best_phi) {
      best_phi = phi;
      best = alpha;
    }
  }
  const double lambda = sym_min(build_w(cg, best)).lambda;
  const double f = kappa * (1.0 + 1e-9) / lambda;
  if (f < 1.0) {
    for (double& a : best) a *= f;
  }
  return best;
}

}  // namespace

WhatReport assemble_what(const CrossGram& cg, std::span<const double> alpha) {
  if (alpha.size() != cg.N * cg.m) {
    throw std::invalid_argument("alpha has " + std::to_string(alpha.size()) +
                                " entries, expected " + std::to_string(cg.N * cg.m));
  }
  WhatReport r;
  r.W = build_w(cg, alpha);
  r.lambda_min_sym = sym_min(r.W).lambda;
  Eigen::JacobiSVD<Mat> svd(r.W);
  r.norm = svd.singularValues()[0];
  r.sigma_min = svd.singularValues()[svd.singularValues().size() - 1];
  return r;
}

std::string to_string(AlphaObjective o) {
  switch (o) {
    case AlphaObjective::feasible_only: return "none";
    case AlphaObjective::min_l1: return "l1";
    case AlphaObjective::min_l2: return "l2";
  }
  return "?";
}

AlphaObjective alpha_objective_from_string(const std::string& s) {
  if (s == "none" || s == "feasible-only") return AlphaObjective::feasible_only;
  if (s == "l1" || s == "min-l1") return AlphaObjective::min_l1;
  if (s == "l2" || s == "min-l2") return AlphaObjective::min_l2;
  throw std::invalid_argument("unknown alpha objective: " + s);
}

AlphaResult find_alpha(const CrossGram& cg, double kappa, AlphaObjective objective,
                       const SolverBudget& budget) {
  if (!(kappa > 0.0)) throw std::invalid_argument("kappa must be > 0");
  if (budget.restarts == 0) throw std::invalid_argument("need at least one restart");
  const double N = static_cast<double>(cg.N);

  std::vector<Trajectory> runs(budget.restarts);
  std::vector<char> done(budget.restarts, 0);
  if (budget.workers <= 1) {
    for (std::size_t r = 0; r < budget.restarts; ++r) {
      runs[r] = ascend(cg, kappa, r, budget);
      done[r] = 1;
      if (runs[r].reached) break;
    }
  } else {
    parallel_for(budget.restarts, budget.workers, [&](std::size_t r) {
      runs[r] = ascend(cg, kappa, r, budget);
      done[r] = 1;
    });
  }

  AlphaResult result;
  result.best_lambda_min = -std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < budget.restarts; ++r) {
    if (!done[r]) {
      runs[r] = ascend(cg, kappa, r, budget);
      done[r] = 1;
    }
    if (runs[r].reached) {
      std::vector<double> alpha = runs[r].alpha;
      if (objective != AlphaObjective::feasible_only) {
        alpha = shrink(cg, kappa, std::move(alpha), objective, budget.iterations);
      }
      // Independent re-verification of the certificate.
      const WhatReport rep = assemble_what(cg, alpha);
      if (rep.lambda_min_sym >= kappa && rep.norm <= N * (1.0 + 1e-12) &&
          rep.sigma_min >= kappa - 1e-9) {
        result.solution = AlphaSolution{std::move(alpha), rep.lambda_min_sym,
                                        rep.sigma_min, rep.norm, objective};
        result.best_lambda_min = rep.lambda_min_sym;
        return result;
      }
    }
    result.best_lambda_min = std::max(result.best_lambda_min, runs[r].lambda);
  }
  return result;
}

Json crossgram_to_json(const CrossGram& cg) {
  Json preps = Json::array();
  for (const auto& c : cg.preps) preps.push_back(circuit_to_json(c));
  std::vector<int> failed(cg.failed.begin(), cg.failed.end());
  return {{"N", cg.N}, {"m", cg.m},          {"tags", cg.tags},
          {"T", cg.values}, {"failed", failed}, {"preps", std::move(preps)}};
}

Json alpha_result_to_json(const AlphaResult& result, double kappa) {
  Json j = {{"kappa", kappa}, {"success", result.success()}};
  j["best_lambda_min"] = std::isfinite(result.best_lambda_min)
                             ? Json(result.best_lambda_min)
                             : Json(nullptr);
  if (!result.solution) {
    j["alpha"] = 0;
    return j;
  }
  const auto& s = *result.solution;
  j["alpha"] = s.alpha;
  j["lambda_min_sym"] = s.lambda_min_sym;
  j["sigma_min"] = s.sigma_min;
  j["norm"] = s.norm;
  j["objective"] = to_string(s.objective);
  return j;
}

}  // namespace randfit
