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

#include "randfit/phase.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "phase_boundaries_data.hpp"

namespace randfit {

namespace {

constexpr std::string_view kNames[] = {"SPT", "ferromagnetic",
                                       "antiferromagnetic", "trivial"};
constexpr std::string_view kRoman[] = {"I", "II", "III", "IV"};

constexpr double kEdgeTolerance = 1e-12;

bool on_segment(const std::array<double, 2>& a, const std::array<double, 2>& b,
                double x, double y) {
  const double cross = (b[0] - a[0]) * (y - a[1]) - (b[1] - a[1]) * (x - a[0]);
  const double len = std::hypot(b[0] - a[0], b[1] - a[1]);
  if (std::abs(cross) > kEdgeTolerance * std::max(1.0, len)) return false;
  return x >= std::min(a[0], b[0]) - kEdgeTolerance &&
         x <= std::max(a[0], b[0]) + kEdgeTolerance &&
         y >= std::min(a[1], b[1]) - kEdgeTolerance &&
         y <= std::max(a[1], b[1]) + kEdgeTolerance;
}

bool contains(const std::vector<std::array<double, 2>>& poly, double x,
              double y) {
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (on_segment(poly[i], poly[(i + 1) % n], x, y)) return true;
  }
  bool inside = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const auto& pi = poly[i];
    const auto& pj = poly[j];
    if ((pi[1] > y) != (pj[1] > y) &&
        x < (pj[0] - pi[0]) * (y - pi[1]) / (pj[1] - pi[1]) + pi[0]) {
      inside = !inside;
    }
  }
  return inside;
}

}  // namespace

// --------------------------------------------------------------- PhaseLabel

PhaseLabel PhaseLabel::from_index(unsigned index) {
  if (index >= kNumPhases) {
    throw std::out_of_range("phase label index must be in [0, 4)");
  }
  return PhaseLabel(static_cast<std::uint8_t>(index));
}

PhaseLabel PhaseLabel::from_bits(unsigned b0, unsigned b1) {
  if (b0 > 1 || b1 > 1) throw std::out_of_range("label bits must be 0 or 1");
  return PhaseLabel(static_cast<std::uint8_t>(2 * b0 + b1));
}

PhaseLabel PhaseLabel::from_name(std::string_view name) {
  for (unsigned i = 0; i < kNumPhases; ++i) {
    if (kNames[i] == name) return PhaseLabel(static_cast<std::uint8_t>(i));
  }
  throw std::invalid_argument("unknown phase name: " + std::string(name));
}

std::string_view PhaseLabel::name() const { return kNames[value_]; }
std::string_view PhaseLabel::roman() const { return kRoman[value_]; }

// -------------------------------------------------------- PhaseBoundarySpec

PhaseBoundarySpec::PhaseBoundarySpec(std::vector<Region> regions,
                                     double domain_min, double domain_max)
    : regions_(std::move(regions)), min_(domain_min), max_(domain_max) {
  if (regions_.empty()) throw std::invalid_argument("boundary spec has no regions");
  for (const auto& r : regions_) {
    if (r.polygon.size() < 3) {
      throw std::invalid_argument("region " + r.name + " needs >= 3 vertices");
    }
  }
  std::stable_sort(regions_.begin(), regions_.end(),
                   [](const Region& a, const Region& b) {
                     return a.label.index() < b.label.index();
                   });
}

PhaseBoundarySpec PhaseBoundarySpec::from_json_text(std::string_view text) {
  const auto j = nlohmann::json::parse(text);
  std::vector<Region> regions;
  for (const auto& r : j.at("regions")) {
    Region region;
    region.name = r.at("name").get<std::string>();
    const auto bits = r.at("bits").get<std::vector<unsigned>>();
    if (bits.size() != 2) throw std::invalid_argument("bits must have length 2");
    region.label = PhaseLabel::from_bits(bits[0], bits[1]);
    if (region.label.name() != region.name) {
      throw std::invalid_argument("region " + region.name +
                                  " does not match the fixed label bijection");
    }
    for (const auto& v : r.at("polygon")) {
      region.polygon.push_back({v.at(0).get<double>(), v.at(1).get<double>()});
    }
    regions.push_back(std::move(region));
  }
  double lo = -4.0, hi = 4.0;
  if (j.contains("domain")) {
    lo = j["domain"].at("j1").at(0).get<double>();
    hi = j["domain"].at("j1").at(1).get<double>();
  }
  return PhaseBoundarySpec(std::move(regions), lo, hi);
}

PhaseBoundarySpec PhaseBoundarySpec::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open boundary spec " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

const PhaseBoundarySpec& PhaseBoundarySpec::builtin() {
  static const PhaseBoundarySpec spec =
      from_json_text(detail::kBuiltinPhaseBoundaries);
  return spec;
}

PhaseLabel PhaseBoundarySpec::label(CouplingPoint p) const {
  if (!(p.j1 >= min_ && p.j1 <= max_ && p.j2 >= min_ && p.j2 <= max_)) {
    throw std::out_of_range("coupling point outside the phase-diagram domain");
  }
  for (const auto& r : regions_) {
    if (contains(r.polygon, p.j1, p.j2)) return r.label;
  }
  throw std::runtime_error("boundary spec does not cover point (" +
                           std::to_string(p.j1) + ", " + std::to_string(p.j2) +
                           ")");
}

double PhaseBoundarySpec::area(PhaseLabel label) const {
  double total = 0.0;
  for (const auto& r : regions_) {
    if (r.label != label) continue;
    double twice = 0.0;
    const std::size_t n = r.polygon.size();
    for (std::size_t i = 0; i < n; ++i) {
      const auto& a = r.polygon[i];
      const auto& b = r.polygon[(i + 1) % n];
      twice += a[0] * b[1] - b[0] * a[1];
    }
    total += std::abs(twice) / 2.0;
  }
  return total;
}

PhaseLabel phase_label(CouplingPoint point) {
  return PhaseBoundarySpec::builtin().label(point);
}

}  // namespace randfit
