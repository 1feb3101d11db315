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

#include "fdisc/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace fdisc {

using binmetrics::BinEncoder;
using binmetrics::LambdaSampler;
using binmetrics::TheoryBin;

namespace {

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

}  // namespace

std::string SimulateReport::to_csv() const {
  std::ostringstream out;
  out << "section,detail,bin_size,sigma,analytic_cd,analytic_lle,analytic_lle_uncentered,"
         "analytic_robustness,mc_estimate,mc_std_error,pass,note\n";
  for (const auto& r : rows) {
    out << r.section << ',' << r.detail << ',' << r.bin_size << ',' << fmt(r.sigma) << ','
        << fmt(r.analytic_cd) << ',' << fmt(r.analytic_lle) << ','
        << fmt(r.analytic_lle_uncentered) << ',' << fmt(r.analytic_robustness) << ','
        << fmt(r.mc_estimate) << ','
        << fmt(r.mc_std_error) << ',' << (r.pass ? "pass" : "FAIL") << ',' << r.note << '\n';
  }
  return out.str();
}

std::string SimulateReport::summary() const {
  std::ostringstream out;
  std::vector<std::string> sections;
  for (const auto& r : rows)
    if (std::find(sections.begin(), sections.end(), r.section) == sections.end())
      sections.push_back(r.section);
  for (const auto& s : sections) {
    std::size_t total = 0, failed = 0;
    for (const auto& r : rows)
      if (r.section == s) {
        ++total;
        failed += r.pass ? 0 : 1;
      }
    out << s << ": " << (failed == 0 ? "pass" : "FAIL") << " (" << total - failed << "/" << total
        << " checks)\n";
  }
  out << "violations: " << violations << "\n";
  return out.str();
}

std::size_t run_split_campaign(const SimulateConfig& cfg, std::vector<SimRow>& rows) {
  cfg.validate();
  std::size_t violations = 0;
  const double lo = -3.0, hi = 3.0;
  for (std::size_t f = 0; f < cfg.split_fields; ++f) {
    Rng rng(mix_seed(cfg.seed, 0x1000 + f));
    std::vector<double> values(cfg.samples_per_field);
    for (auto& v : values) v = rng.uniform(lo, hi);
    std::sort(values.begin(), values.end());

    std::vector<double> truth(values.size());
    std::string family;
    if (f == 0) {
      // Forced constant target: the equality case, between-group term zero.
      family = "constant";
      std::fill(truth.begin(), truth.end(), 0.75);
    } else {
      LambdaSampler lambda(rng, lo, hi);
      family = lambda.family();
      for (std::size_t i = 0; i < values.size(); ++i) truth[i] = lambda(values[i]);
    }

    auto report = binmetrics::verify_split_correctness(values, truth, cfg.k_small,
                                                       2 * cfg.k_small);
    SimRow row;
    row.section = "split";
    row.detail = family;
    row.bin_size = cfg.samples_per_field / cfg.k_small;
    row.analytic_cd = report.mean_correctness_coarse;
    row.analytic_lle = report.mean_correctness_fine;  // fine-granularity mean
    row.mc_estimate = report.max_decomposition_error;
    row.pass = report.pass;
    row.note = "checked=" + std::to_string(report.bins_checked) +
               " skipped=" + std::to_string(report.bins_skipped) +
               " violations=" + std::to_string(report.violations);
    if (!report.pass) ++violations;
    rows.push_back(std::move(row));
  }
  return violations;
}

std::size_t run_dominance_campaign(const SimulateConfig& cfg, std::vector<SimRow>& rows) {
  cfg.validate();
  std::size_t violations = 0;

  std::vector<TheoryBin> bins(cfg.dominance_bins);
  std::vector<std::string> families(cfg.dominance_bins);
  for (std::size_t i = 0; i < cfg.dominance_bins; ++i) {
    Rng rng(mix_seed(cfg.seed, 0x2000 + i));
    std::size_t n = 2 + static_cast<std::size_t>(rng.below(39));
    double a = rng.uniform(-5.0, 5.0);
    double w = rng.uniform(0.1, 4.0);
    TheoryBin& bin = bins[i];
    bin.values.resize(n);
    for (auto& v : bin.values) v = rng.uniform(a, a + w);
    std::sort(bin.values.begin(), bin.values.end());
    LambdaSampler lambda(rng, a, a + w);
    families[i] = lambda.family();
    bin.truth.resize(n);
    for (std::size_t j = 0; j < n; ++j) bin.truth[j] = lambda(bin.values[j]);
  }
  auto report = binmetrics::verify_lle_correctness_dominates(bins);
  SimRow agg;
  agg.section = "dominance";
  agg.detail = "random-bins";
  agg.bin_size = cfg.dominance_bins;
  agg.mc_estimate = report.max_excess;
  agg.pass = report.pass;
  agg.note = "violations=" + std::to_string(report.violations);
  if (!report.pass) ++violations;
  rows.push_back(std::move(agg));

  // Affine targets must come out exactly representable: zero residual.
  for (std::size_t i = 0; i < cfg.affine_bins; ++i) {
    Rng rng(mix_seed(cfg.seed, 0x3000 + i));
    std::size_t n = 2 + static_cast<std::size_t>(rng.below(20));
    double a = rng.uniform(-5.0, 5.0);
    TheoryBin bin;
    bin.values.resize(n);
    for (auto& v : bin.values) v = rng.uniform(a, a + 2.0);
    std::sort(bin.values.begin(), bin.values.end());
    double slope = rng.uniform(-2.0, 2.0);
    double intercept = rng.uniform(-2.0, 2.0);
    bin.truth.resize(n);
    for (std::size_t j = 0; j < n; ++j) bin.truth[j] = slope * bin.values[j] + intercept;

    SimRow row;
    row.section = "dominance";
    row.detail = "affine";
    row.bin_size = n;
    row.analytic_cd = binmetrics::analytic_correctness_cd(bin);
    row.analytic_lle = binmetrics::analytic_correctness_lle(bin);
    row.analytic_lle_uncentered = binmetrics::analytic_correctness_lle_uncentered(bin);
    row.pass = std::abs(row.analytic_lle) <= 1e-10;
    if (!row.pass) ++violations;
    rows.push_back(std::move(row));
  }
  return violations;
}

TheoryBin make_grid_bin(const SimulateConfig& cfg, std::size_t n, double sigma) {
  TheoryBin bin;
  bin.sigma = sigma;
  bin.values.resize(n);
  bin.truth.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double t = n == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n - 1);
    bin.values[i] = cfg.bin_span_lo + t * (cfg.bin_span_hi - cfg.bin_span_lo);
    bin.truth[i] = std::sin(bin.values[i]);
  }
  return bin;
}

std::size_t run_robustness_grid(const SimulateConfig& cfg, std::vector<SimRow>& rows) {
  cfg.validate();
  std::size_t violations = 0;

  // Closed form must decrease strictly in the bin size.
  for (double sigma : cfg.robustness_sigmas) {
    double prev = std::numeric_limits<double>::infinity();
    bool monotone = true;
    for (std::size_t n : cfg.robustness_sizes) {
      TheoryBin bin = make_grid_bin(cfg, n, sigma);
      double r = binmetrics::analytic_robustness_cd(bin);
      if (!(r < prev)) monotone = false;
      prev = r;
    }
    SimRow row;
    row.section = "robustness";
    row.detail = "analytic-monotone";
    row.sigma = sigma;
    row.pass = monotone;
    if (!monotone) ++violations;
    rows.push_back(std::move(row));
  }

  for (std::size_t n : cfg.robustness_sizes) {
    for (double sigma : cfg.robustness_sigmas) {
      TheoryBin bin = make_grid_bin(cfg, n, sigma);
      double analytic = binmetrics::analytic_robustness_cd(bin);
      std::uint64_t seed = mix_seed(cfg.seed, 0x4000 + n * 131 + static_cast<std::size_t>(sigma * 16));

      auto cd = binmetrics::mc_robustness(bin, BinEncoder::cd, cfg.trials, seed);
      auto lle = binmetrics::mc_robustness(bin, BinEncoder::lle, cfg.trials, seed);

      SimRow cd_row;
      cd_row.section = "robustness";
      cd_row.detail = "cd";
      cd_row.bin_size = n;
      cd_row.sigma = sigma;
      cd_row.analytic_cd = binmetrics::analytic_correctness_cd(bin);
      cd_row.analytic_lle = binmetrics::analytic_correctness_lle(bin);
      cd_row.analytic_lle_uncentered = binmetrics::analytic_correctness_lle_uncentered(bin);
      cd_row.analytic_robustness = analytic;
      cd_row.mc_estimate = cd.estimate;
      cd_row.mc_std_error = cd.std_error;
      cd_row.pass = std::abs(cd.estimate - analytic) <= 3.0 * cd.std_error;
      if (!cd_row.pass) ++violations;
      rows.push_back(std::move(cd_row));

      SimRow lle_row;
      lle_row.section = "robustness";
      lle_row.detail = "lle";
      lle_row.bin_size = n;
      lle_row.sigma = sigma;
      lle_row.analytic_cd = binmetrics::analytic_correctness_cd(bin);
      lle_row.analytic_lle = binmetrics::analytic_correctness_lle(bin);
      lle_row.analytic_lle_uncentered = binmetrics::analytic_correctness_lle_uncentered(bin);
      lle_row.analytic_robustness = analytic;
      lle_row.mc_estimate = lle.estimate;
      lle_row.mc_std_error = lle.std_error;
      bool close_to_form = std::abs(lle.estimate - analytic) <= 3.0 * lle.std_error;
      bool close_to_cd = std::abs(lle.estimate - cd.estimate) <= 3.0 * (lle.std_error + cd.std_error);
      lle_row.pass = close_to_form && close_to_cd;
      lle_row.note = close_to_cd ? "matches-cd" : "diverges-from-cd";
      if (!lle_row.pass) ++violations;
      rows.push_back(std::move(lle_row));
    }
  }
  return violations;
}

std::size_t run_zero_noise_checks(const SimulateConfig& cfg, std::vector<SimRow>& rows) {
  cfg.validate();
  std::size_t violations = 0;
  for (std::size_t n : cfg.robustness_sizes) {
    TheoryBin bin = make_grid_bin(cfg, n, 0.0);
    double analytic = binmetrics::analytic_correctness_cd(bin);
    auto mc = binmetrics::mc_correctness_cd(bin, cfg.trials, mix_seed(cfg.seed, 0x5000 + n));
    auto rob_cd = binmetrics::mc_robustness(bin, BinEncoder::cd, cfg.trials,
                                            mix_seed(cfg.seed, 0x6000 + n));
    auto rob_lle = binmetrics::mc_robustness(bin, BinEncoder::lle, cfg.trials,
                                             mix_seed(cfg.seed, 0x7000 + n));
    SimRow row;
    row.section = "zero_noise";
    row.detail = "sigma0";
    row.bin_size = n;
    row.analytic_cd = analytic;
    row.mc_estimate = mc.estimate;
    row.pass = std::abs(mc.estimate - analytic) <= 1e-12 && rob_cd.estimate == 0.0 &&
               rob_lle.estimate == 0.0;
    if (!row.pass) ++violations;
    rows.push_back(std::move(row));
  }
  return violations;
}

SimulateReport run_simulate(const SimulateConfig& cfg) {
  cfg.validate();
  SimulateReport report;
  report.violations += run_split_campaign(cfg, report.rows);
  report.violations += run_dominance_campaign(cfg, report.rows);
  report.violations += run_robustness_grid(cfg, report.rows);
  if (cfg.zero_noise_checks) report.violations += run_zero_noise_checks(cfg, report.rows);
  return report;
}

}  // namespace fdisc
