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

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "randfit/hamiltonian.hpp"

namespace randfit {

/// Two-bit phase label. The bits <-> phase bijection is fixed:
///
///   (0,0) SPT (I)   (0,1) ferromagnetic (II)
///   (1,0) antiferromagnetic (III)   (1,1) trivial (IV)
///
/// index() is the outcome index 2*b0 + b1 and also (roman numeral - 1).
class PhaseLabel {
 public:
  constexpr PhaseLabel() = default;
  static PhaseLabel from_index(unsigned index);
  static PhaseLabel from_bits(unsigned b0, unsigned b1);
  static PhaseLabel from_name(std::string_view name);

  static constexpr PhaseLabel spt() { return PhaseLabel(0); }
  static constexpr PhaseLabel ferromagnetic() { return PhaseLabel(1); }
  static constexpr PhaseLabel antiferromagnetic() { return PhaseLabel(2); }
  static constexpr PhaseLabel trivial() { return PhaseLabel(3); }

  constexpr unsigned index() const { return value_; }
  constexpr std::array<unsigned, 2> bits() const {
    return {static_cast<unsigned>(value_ >> 1), static_cast<unsigned>(value_ & 1)};
  }
  std::string_view name() const;
  std::string_view roman() const;

  friend constexpr bool operator==(PhaseLabel, PhaseLabel) = default;

 private:
  explicit constexpr PhaseLabel(std::uint8_t v) : value_(v) {}
  std::uint8_t value_ = 0;
};

inline constexpr unsigned kNumPhases = 4;

/// Piecewise-polygonal phase regions over the coupling domain.
class PhaseBoundarySpec {
 public:
  struct Region {
    std::string name;
    PhaseLabel label;
    std::vector<std::array<double, 2>> polygon;
  };

  explicit PhaseBoundarySpec(std::vector<Region> regions,
                             double domain_min = -4.0,
                             double domain_max = 4.0);

  /// Parses the JSON boundary-spec format (see data/phase_boundaries.json).
  static PhaseBoundarySpec from_json_text(std::string_view text);
  static PhaseBoundarySpec from_file(const std::string& path);
  /// The diagram compiled into the library.
  static const PhaseBoundarySpec& builtin();

  const std::vector<Region>& regions() const { return regions_; }
  double domain_min() const { return min_; }
  double domain_max() const { return max_; }

  /// Regions are tested in label order, boundaries inclusive, so a point on
  /// a shared edge gets the smaller roman numeral. Throws for points
  /// outside the domain or not covered by any region.
  PhaseLabel label(CouplingPoint point) const;

  /// Area of the regions carrying `label` (shoelace formula).
  double area(PhaseLabel label) const;

 private:
  std::vector<Region> regions_;
  double min_;
  double max_;
};

/// Label from the built-in boundary spec.
PhaseLabel phase_label(CouplingPoint point);

}  // namespace randfit
