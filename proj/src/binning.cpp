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

#include "fdisc/binning.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace fdisc {

const char* to_string(BinStrategy s) {
  return s == BinStrategy::equal_frequency ? "equal_frequency" : "equal_width";
}

BinStrategy bin_strategy_from_string(const std::string& s) {
  if (s == "equal_frequency") return BinStrategy::equal_frequency;
  if (s == "equal_width") return BinStrategy::equal_width;
  fail(errc::config, "unknown bin strategy '" + s + "'");
}

namespace {

// Drop cuts outside (lo, hi) and merge duplicates. Heavy ties (common on
// small subsamples) collapse whole quantile runs onto one value; merging
// keeps the fit total instead of erroring.
void sanitize_cuts(std::vector<double>& cuts, double lo, double hi) {
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  cuts.erase(std::remove_if(cuts.begin(), cuts.end(),
                            [&](double c) { return !(c > lo) || !(c < hi); }),
             cuts.end());
}

std::pair<double, double> min_max(std::span<const double> values) {
  double lo = values[0], hi = values[0];
  for (double v : values) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return {lo, hi};
}

}  // namespace

BinSpec fit_equal_frequency(std::span<const double> values, std::size_t k,
                            std::uint32_t field_id) {
  if (values.empty()) fail(errc::config, "cannot fit bins on an empty field");
  if (k == 0) fail(errc::config, "granularity must be >= 1");

  BinSpec spec;
  spec.field_id = field_id;
  spec.strategy = BinStrategy::equal_frequency;
  auto [lo, hi] = min_max(values);
  spec.lo = lo;
  spec.hi = hi;
  if (lo == hi || k == 1) return spec;

  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double n1 = static_cast<double>(sorted.size() - 1);
  spec.cuts.reserve(k - 1);
  for (std::size_t i = 1; i < k; ++i) {
    double h = n1 * static_cast<double>(i) / static_cast<double>(k);
    std::size_t j = static_cast<std::size_t>(h);
    double frac = h - static_cast<double>(j);
    double q = sorted[j];
    if (frac > 0.0 && j + 1 < sorted.size()) q += frac * (sorted[j + 1] - sorted[j]);
    spec.cuts.push_back(q);
  }
  sanitize_cuts(spec.cuts, spec.lo, spec.hi);
  return spec;
}

BinSpec fit_equal_width(std::span<const double> values, std::size_t k, std::uint32_t field_id) {
  if (values.empty()) fail(errc::config, "cannot fit bins on an empty field");
  if (k == 0) fail(errc::config, "granularity must be >= 1");

  BinSpec spec;
  spec.field_id = field_id;
  spec.strategy = BinStrategy::equal_width;
  auto [lo, hi] = min_max(values);
  spec.lo = lo;
  spec.hi = hi;
  if (lo == hi || k == 1) return spec;

  spec.cuts.reserve(k - 1);
  double width = (hi - lo) / static_cast<double>(k);
  for (std::size_t i = 1; i < k; ++i) spec.cuts.push_back(lo + width * static_cast<double>(i));
  sanitize_cuts(spec.cuts, spec.lo, spec.hi);
  return spec;
}

BinSpec fit_bins(std::span<const double> values, std::size_t k, BinStrategy strategy,
                 std::uint32_t field_id) {
  return strategy == BinStrategy::equal_frequency ? fit_equal_frequency(values, k, field_id)
                                                  : fit_equal_width(values, k, field_id);
}

std::size_t locate(const BinSpec& spec, double v) {
  // Count of cuts <= v; a value equal to a cut lands in the upper bin, and
  // out-of-range values clamp to the first/last bin.
  return static_cast<std::size_t>(
      std::upper_bound(spec.cuts.begin(), spec.cuts.end(), v) - spec.cuts.begin());
}

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::string binspecs_to_text(std::span<const BinSpec> specs) {
  std::ostringstream out;
  out << "fdisc-binspec 1\n";
  for (const auto& s : specs) {
    out << "field " << s.field_id << ' ' << to_string(s.strategy) << " lo " << fmt_double(s.lo)
        << " hi " << fmt_double(s.hi) << " cuts";
    for (double c : s.cuts) out << ' ' << fmt_double(c);
    out << '\n';
  }
  return out.str();
}

std::vector<BinSpec> binspecs_from_text(const std::string& text) {
  std::istringstream in(text);
  std::string magic;
  int version = 0;
  in >> magic >> version;
  if (magic != "fdisc-binspec" || version != 1)
    fail(errc::parse, "not a fdisc-binspec v1 document");

  std::vector<BinSpec> specs;
  std::string word;
  while (in >> word) {
    if (word != "field") fail(errc::parse, "binspec: expected 'field', got '" + word + "'");
    BinSpec s;
    std::string strategy, lo_kw, hi_kw, cuts_kw;
    if (!(in >> s.field_id >> strategy >> lo_kw >> s.lo >> hi_kw >> s.hi >> cuts_kw) ||
        lo_kw != "lo" || hi_kw != "hi" || cuts_kw != "cuts")
      fail(errc::parse, "binspec: malformed field record");
    s.strategy = bin_strategy_from_string(strategy);
    std::string rest;
    std::getline(in, rest);
    std::istringstream cuts_in(rest);
    double c;
    while (cuts_in >> c) s.cuts.push_back(c);
    specs.push_back(std::move(s));
  }
  return specs;
}

}  // namespace fdisc
