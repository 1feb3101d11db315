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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "fdisc/binmetrics.hpp"

using namespace fdisc;
using namespace fdisc::binmetrics;

namespace {

TheoryBin make_bin(std::vector<double> values, std::vector<double> truth, double sigma = 0.0) {
  TheoryBin bin;
  bin.values = std::move(values);
  bin.truth = std::move(truth);
  bin.sigma = sigma;
  return bin;
}

// Evenly spaced values on [20, 21]; bins like the robustness campaign uses.
TheoryBin grid_bin(std::size_t n, double sigma) {
  std::vector<double> values(n), truth(n);
  for (std::size_t i = 0; i < n; ++i) {
    values[i] = 20.0 + static_cast<double>(i) / static_cast<double>(n - 1);
    truth[i] = std::sin(values[i]);
  }
  return make_bin(std::move(values), std::move(truth), sigma);
}

}  // namespace

TEST_CASE("fit_lle_bin reproduces the printed formulas") {
  auto fit1 = fit_lle_bin(make_bin({1, 2}, {0, 0}), std::vector<double>{1, 2});
  CHECK(fit1.slope == 1.0);  // (1*1 + 2*2) / (1 + 4)
  CHECK(fit1.intercept == 0.0);
  CHECK(!fit1.degenerate);

  auto fit2 = fit_lle_bin(make_bin({1, 2, 3}, {0, 0, 0}), std::vector<double>{0, 0, 0});
  CHECK(fit2.slope == 0.0);
  CHECK(fit2.intercept == 0.0);

  auto fit3 = fit_lle_bin(make_bin({1, 2, 3}, {0, 0, 0}), std::vector<double>{2, 4, 6});
  CHECK(fit3.slope == 2.0);  // (2 + 8 + 18) / 14
  CHECK(fit3.intercept == 0.0);

  // all-zero values: slope undefined, fall back to the mean with a flag
  auto fit4 = fit_lle_bin(make_bin({0, 0, 0}, {0, 0, 0}), std::vector<double>{1, 2, 3});
  CHECK(fit4.degenerate);
  CHECK(fit4.slope == 0.0);
  CHECK(fit4.intercept == 2.0);
}

TEST_CASE("fit_lle_bin against independently recomputed sums") {
  Rng rng(101);
  for (int rep = 0; rep < 60; ++rep) {
    std::size_t n = 2 + rng.below(30);
    std::vector<double> values(n), obs(n);
    for (auto& v : values) v = rng.uniform(-4.0, 4.0);
    std::sort(values.begin(), values.end());
    for (auto& o : obs) o = rng.uniform(-3.0, 3.0);
    auto fit = fit_lle_bin(make_bin(values, std::vector<double>(n, 0.0)), obs);

    double svv = 0, svo = 0;
    for (std::size_t i = 0; i < n; ++i) {
      svv += values[i] * values[i];
      svo += values[i] * obs[i];
    }
    double slope = svo / svv;
    double intercept = 0;
    for (std::size_t i = 0; i < n; ++i) intercept += obs[i] - values[i] * slope;
    intercept /= static_cast<double>(n);
    CHECK(fit.slope == doctest::Approx(slope).epsilon(1e-12));
    CHECK(fit.intercept == doctest::Approx(intercept).epsilon(1e-12));
  }
}

TEST_CASE("analytic correctness of cd is the within-bin truth variance") {
  CHECK(analytic_correctness_cd(make_bin({1, 2, 3}, {5, 5, 5})) == 0.0);
  CHECK(analytic_correctness_cd(make_bin({1, 2}, {0, 2})) == 1.0);
  CHECK(analytic_correctness_cd(make_bin({1, 2, 3, 4}, {1, 2, 3, 4})) ==
        doctest::Approx(1.25).epsilon(1e-15));
}

TEST_CASE("analytic robustness closed form") {
  CHECK(analytic_robustness_cd(make_bin({1, 2, 3, 4}, {0, 0, 0, 0}, 1.0)) == 0.0625);
  CHECK(analytic_robustness_cd(make_bin({1, 2, 3, 4}, {0, 0, 0, 0}, 0.0)) == 0.0);
  std::vector<double> v10(10), t10(10, 0.0);
  for (std::size_t i = 0; i < 10; ++i) v10[i] = static_cast<double>(i);
  CHECK(analytic_robustness_cd(make_bin(v10, t10, 2.0)) == doctest::Approx(0.04).epsilon(1e-15));
}

TEST_CASE("mc correctness: zero-noise cases are exact") {
  auto constant = make_bin({1, 2, 3, 4}, {0.75, 0.75, 0.75, 0.75}, 0.0);
  auto r = mc_correctness_cd(constant, 1000, 1);
  CHECK(r.estimate == 0.0);
  CHECK(r.std_error == 0.0);

  auto slope = make_bin({1, 2, 3}, {1, 2, 3}, 0.0);
  auto r2 = mc_correctness_cd(slope, 1000, 1);
  CHECK(std::abs(r2.estimate - 2.0 / 3.0) <= 1e-12);
  CHECK(std::abs(r2.estimate - analytic_correctness_cd(slope)) <= 1e-12);
}

TEST_CASE("mc correctness converges to sigma^2/|B| for a constant target") {
  auto bin = make_bin({1, 2, 3, 4}, {0.5, 0.5, 0.5, 0.5}, 1.0);
  auto r = mc_correctness_cd(bin, 100000, 12345);
  CHECK(std::abs(r.estimate - 0.25) <= 3.0 * r.std_error);
  CHECK(r.std_error < 0.01);
}

TEST_CASE("mc robustness matches the closed form and lle matches cd") {
  auto bin = grid_bin(4, 1.0);
  auto cd = mc_robustness(bin, BinEncoder::cd, 20000, 777);
  CHECK(std::abs(cd.estimate - 0.0625) <= 3.0 * cd.std_error);

  auto lle = mc_robustness(bin, BinEncoder::lle, 20000, 777);
  CHECK(std::abs(lle.estimate - 0.0625) <= 3.0 * lle.std_error);
  CHECK(std::abs(lle.estimate - cd.estimate) <= 3.0 * (lle.std_error + cd.std_error));

  // jackknife std error is in the right ballpark for a variance estimator:
  // sd(s^2) ~ s^2 * sqrt(2/(T-1))
  double expected_se = cd.estimate * std::sqrt(2.0 / 19999.0);
  CHECK(cd.std_error > 0.5 * expected_se);
  CHECK(cd.std_error < 2.0 * expected_se);

  auto silent = mc_robustness(grid_bin(4, 0.0), BinEncoder::cd, 1000, 3);
  CHECK(silent.estimate == 0.0);
  auto silent_lle = mc_robustness(grid_bin(4, 0.0), BinEncoder::lle, 1000, 3);
  CHECK(silent_lle.estimate == 0.0);
}

TEST_CASE("mc robustness stays within 3 std errors across many seeds") {
  // convergence claim over the seed distribution: the 3-sigma band should
  // cover all but a fraction of a percent of runs
  auto bin = grid_bin(8, 1.0);
  double target = analytic_robustness_cd(bin);
  std::size_t covered = 0;
  const std::size_t runs = 60;
  for (std::size_t s = 0; s < runs; ++s) {
    auto r = mc_robustness(bin, BinEncoder::cd, 4000, mix_seed(555, s));
    if (std::abs(r.estimate - target) <= 3.0 * r.std_error) ++covered;
  }
  CHECK(covered >= runs - 1);
}

TEST_CASE("lle analytic correctness: affine targets are represented exactly") {
  auto increasing = make_bin({1, 2, 3}, {3, 5, 7});  // 2v + 1
  CHECK(analytic_correctness_lle(increasing) == 0.0);

  auto decreasing = make_bin({1, 2}, {2, 1});  // 3 - v
  CHECK(analytic_correctness_lle(decreasing) <= 1e-12);
  CHECK(analytic_correctness_cd(decreasing) == 0.25);

  auto constant = make_bin({1, 2, 3}, {4, 4, 4});
  CHECK(analytic_correctness_lle(constant) == 0.0);

  // the uncentered slope variant does not share either property; frozen value
  // from a hand evaluation of its formula on the decreasing bin
  CHECK(analytic_correctness_lle_uncentered(decreasing) ==
        doctest::Approx(0.81).epsilon(1e-12));
  CHECK(analytic_correctness_lle_uncentered(decreasing) > analytic_correctness_cd(decreasing));
}

TEST_CASE("lle analytic correctness beats cd on a curved target") {
  auto bin = make_bin({1, 2, 3}, {1, 4, 9});  // v^2
  double lle = analytic_correctness_lle(bin);
  double cd = analytic_correctness_cd(bin);
  CHECK(lle == doctest::Approx(2.0 / 9.0).epsilon(1e-12));
  CHECK(cd == doctest::Approx(98.0 / 9.0).epsilon(1e-12));
  CHECK(lle < cd);
  double uncentered = analytic_correctness_lle_uncentered(bin);
  CHECK(uncentered == doctest::Approx(1.5827664399092967).epsilon(1e-12));
  CHECK(uncentered < cd);
}

TEST_CASE("degenerate bins fall back to the cd value") {
  auto flat_values = make_bin({2, 2, 2}, {1, 5, 9});
  CHECK(analytic_correctness_lle(flat_values) == analytic_correctness_cd(flat_values));
  auto zero_values = make_bin({0, 0, 0}, {1, 5, 9});
  CHECK(analytic_correctness_lle_uncentered(zero_values) == analytic_correctness_cd(zero_values));
}

TEST_CASE("split verifier: equality for constant targets, strict gain for slopes") {
  std::vector<double> values(64);
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = static_cast<double>(i);

  std::vector<double> constant(values.size(), 3.25);
  auto eq = verify_split_correctness(values, constant, 4, 8);
  CHECK(eq.pass);
  CHECK(eq.violations == 0);
  CHECK(eq.bins_checked == 4);
  CHECK(eq.mean_correctness_coarse == eq.mean_correctness_fine);  // all zero
  CHECK(eq.min_gain == 0.0);

  auto strict = verify_split_correctness(values, values, 4, 8);
  CHECK(strict.pass);
  CHECK(strict.min_gain > 0.0);  // every split strictly improves
  CHECK(strict.mean_correctness_fine < strict.mean_correctness_coarse);
  CHECK(strict.max_decomposition_error <= 1e-9);

  CHECK_THROWS_AS(verify_split_correctness(values, values, 4, 12), Error);

  // odd parent occupancy is skipped with a note, not an error
  std::vector<double> nine(9);
  for (std::size_t i = 0; i < nine.size(); ++i) nine[i] = static_cast<double>(i);
  auto skipped = verify_split_correctness(nine, nine, 3, 6);
  CHECK(skipped.bins_checked == 0);
  CHECK(skipped.bins_skipped == 3);
}

TEST_CASE("split verifier: 100 random target draws, zero violations") {
  for (std::size_t f = 0; f < 100; ++f) {
    Rng rng(mix_seed(909, f));
    std::vector<double> values(160);
    for (auto& v : values) v = rng.uniform(-3.0, 3.0);
    std::sort(values.begin(), values.end());
    LambdaSampler lambda(rng, -3.0, 3.0);
    std::vector<double> truth(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) truth[i] = lambda(values[i]);
    auto report = verify_split_correctness(values, truth, 4, 8);
    CHECK(report.violations == 0);
    CHECK(report.max_decomposition_error <= 1e-9);
    CHECK(report.pass);
  }
}

TEST_CASE("dominance verifier") {
  std::vector<TheoryBin> edge_bins;
  edge_bins.push_back(make_bin({1, 2, 3, 4}, {2, 4, 6, 8}));  // affine: lle 0, cd > 0
  edge_bins.push_back(make_bin({1, 2, 3}, {5, 5, 5}));        // constant: both 0
  auto report = verify_lle_correctness_dominates(edge_bins);
  CHECK(report.pass);
  CHECK(analytic_correctness_lle(edge_bins[0]) == 0.0);
  CHECK(analytic_correctness_cd(edge_bins[0]) > 0.0);

  std::vector<TheoryBin> bins;
  for (std::size_t i = 0; i < 100; ++i) {
    Rng rng(mix_seed(4242, i));
    std::size_t n = 2 + rng.below(40);
    double a = rng.uniform(-5.0, 5.0);
    double w = rng.uniform(0.1, 4.0);
    std::vector<double> values(n);
    for (auto& v : values) v = rng.uniform(a, a + w);
    std::sort(values.begin(), values.end());
    LambdaSampler lambda(rng, a, a + w);
    std::vector<double> truth(n);
    for (std::size_t j = 0; j < n; ++j) truth[j] = lambda(values[j]);
    bins.push_back(make_bin(values, truth));
  }
  auto campaign = verify_lle_correctness_dominates(bins);
  CHECK(campaign.bins_checked == 100);
  CHECK(campaign.violations == 0);
  CHECK(campaign.pass);
}
