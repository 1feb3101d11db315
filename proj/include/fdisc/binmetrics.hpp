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
#include "fdisc/rng.hpp"

namespace fdisc::binmetrics {

// One discretization bin prepared for quality analysis: its member values,
// the ground-truth target at each value, and the observation noise level.
//
// Two quality measures are defined over a bin:
//  - correctness: expected mean squared error between the ground truth and
//    the bin's predictions, under observations drawn N(truth, sigma^2);
//  - robustness: variance of the bin-mean prediction under that noise, with
//    each member's prediction modeled on an independent noise draw.
// Lower is better for both. CD predicts every member with the bin mean of the
// observations; LLE predicts with a per-bin linear fit.
struct TheoryBin {
  std::vector<double> values;  // sorted ascending
  std::vector<double> truth;   // aligned with values
  double sigma = 0.0;

  std::size_t size() const { return values.size(); }
  void validate() const;
};

// Per-bin linear predictor used by the LLE analysis:
//   slope     = sum(v*o) / sum(v^2)
//   intercept = mean(o - v*slope)
// This is the uncentered (through-origin) slope with a mean-matching
// intercept, kept exactly in this form; it is not the centered least-squares
// slope. If every value is zero the slope is undefined: slope 0, intercept
// mean(o), degenerate flag set.
struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  bool degenerate = false;

  double predict(double v) const { return slope * v + intercept; }
};

LinearFit fit_lle_bin(const TheoryBin& bin, std::span<const double> observations);

struct EstimatorResult {
  double estimate = 0.0;
  double std_error = 0.0;
  std::size_t trials = 0;
};

// Monte-Carlo correctness of CD: per trial, draw one observation vector
// o ~ N(truth, sigma^2), predict every member with mean(o), accumulate the
// bin's mean squared error against truth. Returns mean +/- (sample std /
// sqrt(trials)).
EstimatorResult mc_correctness_cd(const TheoryBin& bin, std::size_t trials, std::uint64_t seed);

// Noise-free correctness of CD in closed form: the population variance of the
// truth over the bin.
double analytic_correctness_cd(const TheoryBin& bin);

// Robustness of CD in closed form: sigma^2 / |B|^2.
double analytic_robustness_cd(const TheoryBin& bin);

enum class BinEncoder { cd, lle };

// Monte-Carlo robustness: per trial, every member's prediction is computed
// from its own independent observation draw of the whole bin (CD: bin mean of
// that draw; LLE: fit on that draw evaluated at the member's value); the
// trial statistic is the bin mean of those predictions. Returns the sample
// variance across trials +/- a jackknife std error.
//
// The independent-redraw structure is what makes the CD estimate converge to
// sigma^2/|B|^2. For LLE the exact value is sigma^2/|B|^2 * (1 + S/Q) with
// S the centered and Q the uncentered sum of squared values; the extra factor
// vanishes for bins whose spread is small relative to their location.
EstimatorResult mc_robustness(const TheoryBin& bin, BinEncoder encoder, std::size_t trials,
                              std::uint64_t seed);

// Noise-free correctness of LLE: the residual mean square of the truth after
// the centered least-squares line fit over the bin. Always <= the CD value;
// exactly 0 when the truth is affine in v. All-equal values fall back to the
// CD value (no line can be fit) with no error.
double analytic_correctness_lle(const TheoryBin& bin);

// Variant using the uncentered slope sum(v*truth)/sum(v^2) around the means,
// matching fit_lle_bin's slope convention. Reported alongside the primary
// value for comparison; unlike the centered form it is not guaranteed below
// the CD value and does not vanish for affine truth.
double analytic_correctness_lle_uncentered(const TheoryBin& bin);

// --- verification campaigns -------------------------------------------------

struct SplitCheckReport {
  std::size_t bins_checked = 0;
  std::size_t bins_skipped = 0;  // odd occupancy, cannot split in equal halves
  std::size_t violations = 0;
  double mean_correctness_coarse = 0.0;  // k_small bins
  double mean_correctness_fine = 0.0;    // k_large bins
  double min_gain = 0.0;  // smallest per-parent correctness improvement
  double max_decomposition_error = 0.0;
  bool pass = false;
};

// Splits each of k_small equal-occupancy bins of (values, truth) into equal
// halves and checks that
//  (a) mean correctness over the fine bins never exceeds the coarse mean
//      (tolerance 1e-12), and
//  (b) the variance decomposition
//      V(parent) = (V(half1)+V(half2))/2 + between_group_variance
//      holds to 1e-9 on every parent.
// Requires k_large == 2*k_small.
SplitCheckReport verify_split_correctness(std::span<const double> values,
                                          std::span<const double> truth, std::size_t k_small,
                                          std::size_t k_large);

struct DominanceReport {
  std::size_t bins_checked = 0;
  std::size_t violations = 0;
  double max_excess = 0.0;  // max of (lle - cd), should stay <= 1e-12
  bool pass = false;
};

// Checks analytic_correctness_lle(b) <= analytic_correctness_cd(b) + 1e-12
// for every bin.
DominanceReport verify_lle_correctness_dominates(std::span<const TheoryBin> bins);

// Random target families for property campaigns. Coefficient ranges
// (documented in the README): polynomials of degree <= 3 with coefficients
// Uniform(-1,1); sinusoids a*sin(b*v+c) with a in (0.2,2), b in (0.2,3),
// c in (0,2*pi); step functions with 2..5 thresholds inside the value range
// and levels Uniform(-1,1).
class LambdaSampler {
 public:
  LambdaSampler(Rng& rng, double value_lo, double value_hi);
  double operator()(double v) const;
  const std::string& family() const { return family_; }

 private:
  std::string family_;
  std::vector<double> coef_;
  std::vector<double> thresholds_;
  std::vector<double> levels_;
};

}  // namespace fdisc::binmetrics
