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

#include <string>
#include <vector>

#include "fdisc/binmetrics.hpp"
#include "fdisc/config.hpp"

namespace fdisc {

// One line of the simulation CSV. Sections:
//   split        - bin-splitting never worsens mean correctness + variance
//                  decomposition (one row per generated field)
//   dominance    - LLE correctness <= CD correctness on random bins (aggregate
//                  row plus the affine exact-zero rows)
//   robustness   - MC vs closed-form robustness per (size, sigma, encoder)
//   zero_noise   - sigma = 0 estimators collapse to their analytic values
struct SimRow {
  std::string section;
  std::string detail;  // target family, encoder name, ...
  std::size_t bin_size = 0;
  double sigma = 0.0;
  double analytic_cd = 0.0;  // correctness, closed form
  double analytic_lle = 0.0;
  double analytic_lle_uncentered = 0.0;
  double analytic_robustness = 0.0;  // sigma^2/|B|^2
  double mc_estimate = 0.0;
  double mc_std_error = 0.0;
  bool pass = true;
  std::string note;
};

struct SimulateReport {
  std::vector<SimRow> rows;
  std::size_t violations = 0;
  std::string to_csv() const;
  std::string summary() const;  // per-section pass/fail lines
};

// Campaign pieces; run_simulate stitches them together. Each piece appends
// rows and returns the number of violations it found.
std::size_t run_split_campaign(const SimulateConfig& cfg, std::vector<SimRow>& rows);
std::size_t run_dominance_campaign(const SimulateConfig& cfg, std::vector<SimRow>& rows);
std::size_t run_robustness_grid(const SimulateConfig& cfg, std::vector<SimRow>& rows);
std::size_t run_zero_noise_checks(const SimulateConfig& cfg, std::vector<SimRow>& rows);

SimulateReport run_simulate(const SimulateConfig& cfg);

// Grid bins for the robustness campaign: n values evenly spaced across
// [cfg.bin_span_lo, cfg.bin_span_hi] with a sinusoidal target (the target does
// not affect robustness; it keeps correctness columns non-trivial).
binmetrics::TheoryBin make_grid_bin(const SimulateConfig& cfg, std::size_t n, double sigma);

}  // namespace fdisc
