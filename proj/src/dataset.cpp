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

#include "randfit/dataset.hpp"

#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <random>
#include <stdexcept>

#include "randfit/json_io.hpp"
#include "randfit/parallel.hpp"

namespace randfit {

std::string to_string(Distribution d) {
  switch (d) {
    case Distribution::D0: return "D0";
    case Distribution::D1: return "D1";
    case Distribution::Dr: return "Dr";
    case Distribution::Dst: return "Dst";
  }
  return "?";
}

Distribution distribution_from_string(const std::string& s) {
  if (s == "D0") return Distribution::D0;
  if (s == "D1") return Distribution::D1;
  if (s == "Dr") return Distribution::Dr;
  if (s == "Dst") return Distribution::Dst;
  throw std::invalid_argument("unknown distribution tag: " + s);
}

LabeledDataset sample_dataset(std::size_t n, std::size_t N, std::uint64_t seed,
                              const SamplingOptions& options) {
  if (N == 0) throw std::invalid_argument("dataset size N must be >= 1");
  const PhaseBoundarySpec& spec = options.boundary_spec
                                      ? *options.boundary_spec
                                      : PhaseBoundarySpec::builtin();
  std::vector<std::optional<LabeledItem>> slots(N);
  parallel_for(N, options.workers, [&](std::size_t i) {
    Rng rng(derive_seed(seed, "item", i));
    std::uniform_real_distribution<double> coupling(kCouplingMin, kCouplingMax);
    CouplingPoint p;
    p.j1 = coupling(rng);
    p.j2 = coupling(rng);
    auto gs = ground_state(build_hamiltonian(n, p, options.boundary),
                           options.method);
    const PhaseLabel label = spec.label(p);
    slots[i] = LabeledItem{std::move(gs.state), label, label, p};
  });

  LabeledDataset ds;
  ds.items.reserve(N);
  for (auto& s : slots) ds.items.push_back(std::move(*s));
  ds.provenance.distribution = Distribution::D0;
  ds.provenance.seed = seed;
  ds.provenance.n = n;
  ds.provenance.N = N;
  ds.provenance.boundary = options.boundary;
  return ds;
}

LabeledDataset sample_dataset(std::size_t n, std::size_t N, Rng& rng,
                              const SamplingOptions& options) {
  return sample_dataset(n, N, rng(), options);
}

// ---------------------------------------------------------------------- I/O

namespace {

Json provenance_to_json(const Provenance& p) {
  return {{"distribution", to_string(p.distribution)},
          {"mode", p.mode},
          {"ratio", p.ratio},
          {"seed", p.seed},
          {"corruption_seed", p.corruption_seed},
          {"n", p.n},
          {"N", p.N},
          {"boundary", to_string(p.boundary)},
          {"corrupted_indices", p.corrupted_indices}};
}

Provenance provenance_from_json(const Json& j) {
  Provenance p;
  p.distribution = distribution_from_string(j.at("distribution").get<std::string>());
  p.mode = j.at("mode").get<std::string>();
  p.ratio = j.at("ratio").get<double>();
  p.seed = j.at("seed").get<std::uint64_t>();
  p.corruption_seed = j.value("corruption_seed", std::uint64_t{0});
  p.n = j.at("n").get<std::size_t>();
  p.N = j.at("N").get<std::size_t>();
  p.boundary = boundary_from_string(j.value("boundary", std::string("periodic")));
  p.corrupted_indices = j.at("corrupted_indices").get<std::vector<std::size_t>>();
  return p;
}

}  // namespace

void write_dataset(std::ostream& out, const LabeledDataset& ds) {
  Json labels = Json::array(), truth = Json::array(), points = Json::array();
  for (const auto& item : ds.items) {
    labels.push_back(item.label.bits());
    truth.push_back(item.true_label.bits());
    points.push_back({item.point.j1, item.point.j2});
  }
  Json header = {{"format", "randfit-dataset"},
                 {"version", 1},
                 {"provenance", provenance_to_json(ds.provenance)},
                 {"labels", std::move(labels)},
                 {"true_labels", std::move(truth)},
                 {"points", std::move(points)}};
  out << header.dump() << '\n';
  for (const auto& item : ds.items) write_state_binary(out, item.state);
  if (!out) throw std::runtime_error("failed to write dataset");
}

LabeledDataset read_dataset(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty dataset file");
  const Json header = Json::parse(line);
  if (header.value("format", "") != "randfit-dataset") {
    throw std::runtime_error("not a randfit dataset file");
  }
  LabeledDataset ds;
  ds.provenance = provenance_from_json(header.at("provenance"));
  const auto& labels = header.at("labels");
  const auto& truth = header.at("true_labels");
  const auto& points = header.at("points");
  if (labels.size() != ds.provenance.N || truth.size() != labels.size() ||
      points.size() != labels.size()) {
    throw std::runtime_error("dataset header item counts disagree");
  }
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto state = read_state_binary(in);
    if (state.num_qubits() != ds.provenance.n) {
      throw std::runtime_error("dataset state has wrong qubit count");
    }
    ds.items.push_back(
        {std::move(state),
         PhaseLabel::from_bits(labels[i][0].get<unsigned>(), labels[i][1].get<unsigned>()),
         PhaseLabel::from_bits(truth[i][0].get<unsigned>(), truth[i][1].get<unsigned>()),
         {points[i][0].get<double>(), points[i][1].get<double>()}});
  }
  return ds;
}

void save_dataset(const std::string& path, const LabeledDataset& dataset) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  write_dataset(out, dataset);
}

LabeledDataset load_dataset(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_dataset(in);
}

}  // namespace randfit
