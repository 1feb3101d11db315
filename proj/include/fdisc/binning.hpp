// Copyright 2026 The fdisc Authors
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

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fdisc/common.hpp"

namespace fdisc {

enum class BinStrategy { equal_frequency, equal_width };

const char* to_string(BinStrategy s);
BinStrategy bin_strategy_from_string(const std::string& s);

// Fitted bin boundaries for one numeric field.
//
// Conventions (they matter because interpolation weights are computed from
// bin boundaries):
//  - cuts are strictly increasing and lie strictly inside (lo, hi); duplicate
//    quantiles are merged, so the effective granularity can be below the
//    requested one.
//  - bin i covers [boundary_i, boundary_{i+1}); the last bin is closed above;
//    a value equal to a cut belongs to the upper bin.
//  - out-of-range values clamp to bin 0 / the last bin.
//  - a constant field yields a single degenerate bin with lo == hi.
struct BinSpec {
  std::uint32_t field_id = 0;
  BinStrategy strategy = BinStrategy::equal_frequency;
  double lo = 0.0;
  double hi = 0.0;
  std::vector<double> cuts;

  std::size_t granularity() const { return cuts.size() + 1; }
  bool degenerate() const { return lo == hi; }

  // boundary 0 is lo, boundary granularity() is hi.
  double boundary(std::size_t i) const {
    if (i == 0) return lo;
    if (i == cuts.size() + 1) return hi;
    return cuts[i - 1];
  }
};

// Quantile rule: linear interpolation between order statistics, i.e. the
// quantile at level p of sorted values x_0..x_{n-1} is x_h interpolated at
// h = (n-1)p. Cuts sit at levels i/k for i = 1..k-1.
BinSpec fit_equal_frequency(std::span<const double> values, std::size_t k,
                            std::uint32_t field_id = 0);

// Cuts at lo + i*(hi-lo)/k for i = 1..k-1.
BinSpec fit_equal_width(std::span<const double> values, std::size_t k,
                        std::uint32_t field_id = 0);

BinSpec fit_bins(std::span<const double> values, std::size_t k, BinStrategy strategy,
                 std::uint32_t field_id = 0);

// Bin index for v in [0, granularity). Total on real inputs including +/-inf
// via clamping. Precondition: v is not NaN (missing values are the encoder's
// job, not the binning layer's).
std::size_t locate(const BinSpec& spec, double v);

// Versioned text serialization; doubles are printed with enough digits to
// round-trip exactly.
std::string binspecs_to_text(std::span<const BinSpec> specs);
std::vector<BinSpec> binspecs_from_text(const std::string& text);

}  // namespace fdisc
