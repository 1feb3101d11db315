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

#include "fdisc/binmetrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "fdisc/common.hpp"

namespace fdisc::binmetrics {

void TheoryBin::validate() const {
  if (values.empty()) fail(errc::config, "bin must hold at least one value");
  if (values.size() != truth.size()) fail(errc::config, "values/truth length mismatch");
  if (!std::is_sorted(values.begin(), values.end()))
    fail(errc::config, "bin values must be sorted ascending");
  if (sigma < 0.0) fail(errc::config, "sigma must be >= 0");
}

namespace {

double mean_of(std::span<const double> xs) {
  KahanSum s;
  for (double x : xs) s.add(x);
  return s.value() / static_cast<double>(xs.size());
}

// Population variance, two-pass centered.
double pop_variance(std::span<const double> xs) {
  double m = mean_of(xs);
  KahanSum s;
  for (double x : xs) {
    double d = x - m;
    s.add(d * d);
  }
  return s.value() / static_cast<double>(xs.size());
}

}  // namespace

LinearFit fit_lle_bin(const TheoryBin& bin, std::span<const double> observations) {
  bin.validate();
  if (observations.size() != bin.size())
    fail(errc::config, "observations length must match the bin");

  double svv = 0.0, svo = 0.0, so = 0.0;
  for (std::size_t i = 0; i < bin.size(); ++i) {
    svv += bin.values[i] * bin.values[i];
    svo += bin.values[i] * observations[i];
    so += observations[i];
  }
  LinearFit fit;
  if (svv == 0.0) {
    fit.slope = 0.0;
    fit.intercept = so / static_cast<double>(bin.size());
    fit.degenerate = true;
    return fit;
  }
  fit.slope = svo / svv;
  double resid = 0.0;
  for (std::size_t i = 0; i < bin.size(); ++i)
    resid += observations[i] - bin.values[i] * fit.slope;
  fit.intercept = resid / static_cast<double>(bin.size());
  return fit;
}

double analytic_correctness_cd(const TheoryBin& bin) {
  bin.validate();
  return pop_variance(bin.truth);
}

double analytic_robustness_cd(const TheoryBin& bin) {
  bin.validate();
  double n = static_cast<double>(bin.size());
  return bin.sigma * bin.sigma / (n * n);
}

EstimatorResult mc_correctness_cd(const TheoryBin& bin, std::size_t trials, std::uint64_t seed) {
  bin.validate();
  if (trials == 0) fail(errc::config, "trials must be >= 1");
  const std::size_t n = bin.size();
  const double inv_n = 1.0 / static_cast<double>(n);

  auto trial_error = [&](Rng& rng) {
    // One observation draw for the bin; every member is predicted with the
    // mean of that draw.
    double obs_sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) obs_sum += bin.truth[j] + bin.sigma * rng.normal();
    double p = obs_sum * inv_n;
    KahanSum err;
    for (std::size_t j = 0; j < n; ++j) {
      double d = bin.truth[j] - p;
      err.add(d * d);
    }
    return err.value() * inv_n;
  };

  if (bin.sigma == 0.0) {
    // No randomness left: every trial evaluates to the same number.
    Rng rng(mix_seed(seed, 0));
    return {trial_error(rng), 0.0, trials};
  }

  KahanSum sum, sum_sq;
  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng(mix_seed(seed, t));
    double e = trial_error(rng);
    sum.add(e);
    sum_sq.add(e * e);
  }
  double tn = static_cast<double>(trials);
  double mean = sum.value() / tn;
  double var = std::max(0.0, (sum_sq.value() - tn * mean * mean) / std::max(1.0, tn - 1.0));
  return {mean, std::sqrt(var / tn), trials};
}

EstimatorResult mc_robustness(const TheoryBin& bin, BinEncoder encoder, std::size_t trials,
                              std::uint64_t seed) {
  bin.validate();
  if (trials < 2) fail(errc::config, "trials must be >= 2");
  const std::size_t n = bin.size();
  const double inv_n = 1.0 / static_cast<double>(n);

  if (bin.sigma == 0.0) return {0.0, 0.0, trials};  // deterministic predictions

  std::vector<double> obs(n);
  std::vector<double> stat(trials);
  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng(mix_seed(seed, t));
    // Each member's prediction comes from its own independent observation
    // draw of the whole bin; the trial statistic is their bin mean.
    KahanSum m;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) obs[j] = bin.truth[j] + bin.sigma * rng.normal();
      if (encoder == BinEncoder::cd) {
        double s = 0.0;
        for (double o : obs) s += o;
        m.add(s * inv_n);
      } else {
        LinearFit fit = fit_lle_bin(bin, obs);
        m.add(fit.predict(bin.values[i]));
      }
    }
    stat[t] = m.value() * inv_n;
  }

  // Centered sample variance across trials plus a jackknife std error for it.
  double mbar = mean_of(stat);
  double tn = static_cast<double>(trials);
  KahanSum s1c, s2c;
  for (double& s : stat) {
    s -= mbar;
    s1c.add(s);
    s2c.add(s * s);
  }
  double S1 = s1c.value(), S2 = s2c.value();
  double variance = std::max(0.0, (S2 - S1 * S1 / tn) / (tn - 1.0));

  KahanSum rep_sum;
  std::vector<double> rep(trials);
  for (std::size_t i = 0; i < trials; ++i) {
    double s1 = S1 - stat[i];
    double s2 = S2 - stat[i] * stat[i];
    rep[i] = std::max(0.0, (s2 - s1 * s1 / (tn - 1.0)) / (tn - 2.0));
    rep_sum.add(rep[i]);
  }
  double rep_mean = rep_sum.value() / tn;
  KahanSum dev;
  for (double r : rep) {
    double d = r - rep_mean;
    dev.add(d * d);
  }
  double se = std::sqrt(std::max(0.0, (tn - 1.0) / tn * dev.value()));
  return {variance, se, trials};
}

double analytic_correctness_lle(const TheoryBin& bin) {
  bin.validate();
  const std::size_t n = bin.size();
  double mv = mean_of(bin.values);
  double mt = mean_of(bin.truth);
  KahanSum suu, sut;
  for (std::size_t i = 0; i < n; ++i) {
    double u = bin.values[i] - mv;
    suu.add(u * u);
    sut.add(u * (bin.truth[i] - mt));
  }
  if (suu.value() <= 0.0) return analytic_correctness_cd(bin);  // no spread to fit a line on
  double slope = sut.value() / suu.value();
  KahanSum resid;
  for (std::size_t i = 0; i < n; ++i) {
    double r = (bin.truth[i] - mt) - slope * (bin.values[i] - mv);
    resid.add(r * r);
  }
  return resid.value() / static_cast<double>(n);
}

double analytic_correctness_lle_uncentered(const TheoryBin& bin) {
  bin.validate();
  const std::size_t n = bin.size();
  double svv = 0.0, svt = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    svv += bin.values[i] * bin.values[i];
    svt += bin.values[i] * bin.truth[i];
  }
  if (svv == 0.0) return analytic_correctness_cd(bin);
  double slope = svt / svv;
  double mv = mean_of(bin.values);
  double mt = mean_of(bin.truth);
  KahanSum resid;
  for (std::size_t i = 0; i < n; ++i) {
    double r = (bin.truth[i] - mt) - slope * (bin.values[i] - mv);
    resid.add(r * r);
  }
  return resid.value() / static_cast<double>(n);
}

SplitCheckReport verify_split_correctness(std::span<const double> values,
                                          std::span<const double> truth, std::size_t k_small,
                                          std::size_t k_large) {
  if (values.size() != truth.size()) fail(errc::config, "values/truth length mismatch");
  if (k_small == 0 || k_large != 2 * k_small)
    fail(errc::config, "the fine granularity must be exactly twice the coarse one");
  if (values.size() < k_large) fail(errc::config, "not enough samples for the requested bins");

  // Sort (value, truth) pairs and chop into k_small equal-occupancy bins.
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> sorted_truth(values.size());
  for (std::size_t i = 0; i < order.size(); ++i) sorted_truth[i] = truth[order[i]];

  SplitCheckReport report;
  report.min_gain = std::numeric_limits<double>::infinity();
  KahanSum coarse_sum, fine_sum;
  const std::size_t n = sorted_truth.size();
  for (std::size_t b = 0; b < k_small; ++b) {
    std::size_t begin = b * n / k_small;
    std::size_t end = (b + 1) * n / k_small;
    std::size_t len = end - begin;
    if (len < 2 || len % 2 != 0) {
      ++report.bins_skipped;  // cannot split into equal halves
      continue;
    }
    std::span<const double> parent(sorted_truth.data() + begin, len);
    std::span<const double> half1 = parent.subspan(0, len / 2);
    std::span<const double> half2 = parent.subspan(len / 2);

    double v = pop_variance(parent);
    double v1 = pop_variance(half1);
    double v2 = pop_variance(half2);
    double m = mean_of(parent);
    double m1 = mean_of(half1);
    double m2 = mean_of(half2);
    double bgv = 0.5 * ((m1 - m) * (m1 - m) + (m2 - m) * (m2 - m));

    double halves = 0.5 * (v1 + v2);
    if (halves > v + 1e-12) ++report.violations;
    double decomp_err = std::abs(v - halves - bgv);
    report.max_decomposition_error = std::max(report.max_decomposition_error, decomp_err);
    report.min_gain = std::min(report.min_gain, v - halves);
    coarse_sum.add(v);
    fine_sum.add(halves);
    ++report.bins_checked;
  }
  if (report.bins_checked == 0) report.min_gain = 0.0;
  if (report.bins_checked > 0) {
    report.mean_correctness_coarse = coarse_sum.value() / static_cast<double>(report.bins_checked);
    report.mean_correctness_fine = fine_sum.value() / static_cast<double>(report.bins_checked);
  }
  report.pass = report.violations == 0 && report.max_decomposition_error <= 1e-9 &&
                report.mean_correctness_fine <= report.mean_correctness_coarse + 1e-12;
  return report;
}

DominanceReport verify_lle_correctness_dominates(std::span<const TheoryBin> bins) {
  DominanceReport report;
  for (const auto& bin : bins) {
    double cd = analytic_correctness_cd(bin);
    double lle = analytic_correctness_lle(bin);
    double excess = lle - cd;
    report.max_excess = std::max(report.max_excess, excess);
    if (excess > 1e-12) ++report.violations;
    ++report.bins_checked;
  }
  report.pass = report.violations == 0;
  return report;
}

LambdaSampler::LambdaSampler(Rng& rng, double value_lo, double value_hi) {
  switch (rng.below(3)) {
    case 0: {
      family_ = "poly";
      std::size_t degree = 1 + static_cast<std::size_t>(rng.below(3));
      coef_.resize(degree + 1);
      for (auto& c : coef_) c = rng.uniform(-1.0, 1.0);
      break;
    }
    case 1: {
      family_ = "sinusoid";
      coef_ = {rng.uniform(0.2, 2.0), rng.uniform(0.2, 3.0), rng.uniform(0.0, 6.283185307179586)};
      break;
    }
    default: {
      family_ = "step";
      std::size_t k = 2 + static_cast<std::size_t>(rng.below(4));
      thresholds_.resize(k);
      for (auto& t : thresholds_) t = rng.uniform(value_lo, value_hi);
      std::sort(thresholds_.begin(), thresholds_.end());
      levels_.resize(k + 1);
      for (auto& l : levels_) l = rng.uniform(-1.0, 1.0);
      break;
    }
  }
}

double LambdaSampler::operator()(double v) const {
  if (family_ == "poly") {
    double acc = 0.0;
    for (std::size_t i = coef_.size(); i-- > 0;) acc = acc * v + coef_[i];
    return acc;
  }
  if (family_ == "sinusoid") return coef_[0] * std::sin(coef_[1] * v + coef_[2]);
  std::size_t i = 0;
  while (i < thresholds_.size() && v >= thresholds_[i]) ++i;
  return levels_[i];
}

}  // namespace fdisc::binmetrics
