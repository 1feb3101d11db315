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

#include "fdisc/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>

#include "fdisc/rng.hpp"

namespace fdisc {

std::vector<double> NumericDataset::field_values(std::size_t f) const {
  std::vector<double> out(row_count());
  for (std::size_t r = 0; r < out.size(); ++r) out[r] = value(r, f);
  return out;
}

double NumericDataset::label_prevalence() const {
  if (labels.empty()) return 0.0;
  std::size_t pos = 0;
  for (auto l : labels) pos += l;
  return static_cast<double>(pos) / static_cast<double>(labels.size());
}

namespace {

double parse_double(std::string_view token, std::size_t line_no) {
  // Skip surrounding spaces; HIGGS-style files sometimes pad columns.
  while (!token.empty() && (token.front() == ' ' || token.front() == '\t')) token.remove_prefix(1);
  while (!token.empty() && (token.back() == ' ' || token.back() == '\t' || token.back() == '\r'))
    token.remove_suffix(1);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc{} || ptr != token.data() + token.size()) {
    fail(errc::parse, "parse error at line " + std::to_string(line_no) + ": bad numeric value '" +
                          std::string(token) + "'");
  }
  return v;
}

}  // namespace

NumericDataset load_csv(const std::string& path, CsvLayout layout) {
  (void)layout;  // label_first is the only layout
  std::ifstream in(path);
  if (!in) fail(errc::io, "cannot open '" + path + "'");

  NumericDataset ds;
  ds.name = path;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || (line.size() == 1 && line[0] == '\r')) continue;
    std::string_view rest(line);
    std::size_t column = 0;
    while (true) {
      std::size_t comma = rest.find(',');
      std::string_view token = rest.substr(0, comma);
      double v = parse_double(token, line_no);
      if (column == 0) {
        if (v != 0.0 && v != 1.0) {
          fail(errc::parse, "parse error at line " + std::to_string(line_no) +
                                ": label must be 0 or 1, got '" + std::string(token) + "'");
        }
        ds.labels.push_back(static_cast<std::uint8_t>(v));
      } else {
        ds.features.push_back(v);
      }
      ++column;
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (column < 2) {
      fail(errc::structure,
           "structural error at line " + std::to_string(line_no) + ": row has no feature columns");
    }
    if (ds.field_count == 0) {
      ds.field_count = column - 1;
    } else if (column - 1 != ds.field_count) {
      fail(errc::structure, "structural error at line " + std::to_string(line_no) + ": expected " +
                                std::to_string(ds.field_count + 1) + " columns, got " +
                                std::to_string(column));
    }
  }
  if (ds.labels.empty()) fail(errc::parse, "empty input: '" + path + "' contains no rows");
  ds.row_ids.resize(ds.labels.size());
  std::iota(ds.row_ids.begin(), ds.row_ids.end(), 0u);
  return ds;
}

void SplitSpec::validate() const {
  if (!(train_fraction > 0.0) || !(valid_fraction > 0.0) || !(test_fraction > 0.0))
    fail(errc::config, "split fractions must each be > 0");
  if (std::abs(train_fraction + valid_fraction + test_fraction - 1.0) > 1e-9)
    fail(errc::config, "split fractions must sum to 1");
  if (!(sample_ratio > 0.0) || sample_ratio > 1.0)
    fail(errc::config, "sample_ratio must be in (0, 1]");
}

namespace {

NumericDataset take_rows(const NumericDataset& src, const std::vector<std::uint32_t>& rows,
                         const char* tag) {
  NumericDataset out;
  out.name = src.name + "/" + tag;
  out.field_count = src.field_count;
  out.labels.reserve(rows.size());
  out.features.reserve(rows.size() * src.field_count);
  out.row_ids.reserve(rows.size());
  for (auto r : rows) {
    out.labels.push_back(src.labels[r]);
    auto row = src.row(r);
    out.features.insert(out.features.end(), row.begin(), row.end());
    out.row_ids.push_back(src.row_ids[r]);
  }
  return out;
}

}  // namespace

SplitResult split(const NumericDataset& data, const SplitSpec& spec) {
  spec.validate();
  if (data.row_count() == 0) fail(errc::config, "cannot split an empty dataset");

  // Stratified: shuffle each label class separately, then allocate by rounded
  // cumulative fractions so class prevalence carries into every partition.
  std::vector<std::uint32_t> by_class[2];
  for (std::uint32_t r = 0; r < data.row_count(); ++r) by_class[data.labels[r]].push_back(r);

  std::vector<std::uint32_t> train_rows, valid_rows, test_rows;
  Rng rng(mix_seed(spec.seed, 0xA11));
  for (auto& cls : by_class) {
    if (cls.empty()) continue;
    rng.shuffle(cls);
    double n = static_cast<double>(cls.size());
    auto cum = [&](double f) {
      return static_cast<std::size_t>(std::llround(f * n));
    };
    std::size_t t_end = cum(spec.train_fraction);
    std::size_t v_end = cum(spec.train_fraction + spec.valid_fraction);
    train_rows.insert(train_rows.end(), cls.begin(), cls.begin() + t_end);
    valid_rows.insert(valid_rows.end(), cls.begin() + t_end, cls.begin() + v_end);
    test_rows.insert(test_rows.end(), cls.begin() + v_end, cls.end());
  }
  if (train_rows.empty() || valid_rows.empty() || test_rows.empty())
    fail(errc::config, "split would leave an empty partition");

  // Subsample the train partition only; the shuffle stream is independent of
  // sample_ratio so smaller ratios draw nested subsets.
  std::sort(train_rows.begin(), train_rows.end());
  std::sort(valid_rows.begin(), valid_rows.end());
  std::sort(test_rows.begin(), test_rows.end());
  if (spec.sample_ratio < 1.0) {
    std::size_t keep = static_cast<std::size_t>(
        std::ceil(spec.sample_ratio * static_cast<double>(train_rows.size())));
    keep = std::max<std::size_t>(1, std::min(keep, train_rows.size()));
    Rng sub(mix_seed(spec.seed, 0x5AB));
    sub.shuffle(train_rows);
    train_rows.resize(keep);
    std::sort(train_rows.begin(), train_rows.end());
  }

  return {take_rows(data, train_rows, "train"), take_rows(data, valid_rows, "valid"),
          take_rows(data, test_rows, "test")};
}

const char* to_string(SyntheticGenerator g) {
  switch (g) {
    case SyntheticGenerator::linear: return "linear";
    case SyntheticGenerator::piecewise: return "piecewise";
    case SyntheticGenerator::smooth_nonlinear: return "smooth_nonlinear";
  }
  return "?";
}

SyntheticGenerator synthetic_generator_from_string(const std::string& s) {
  if (s == "linear") return SyntheticGenerator::linear;
  if (s == "piecewise") return SyntheticGenerator::piecewise;
  if (s == "smooth_nonlinear" || s == "smooth-nonlinear") return SyntheticGenerator::smooth_nonlinear;
  fail(errc::config, "unknown synthetic generator '" + s + "'");
}

void SyntheticSpec::validate() const {
  if (field_count == 0) fail(errc::config, "synthetic field_count must be >= 1");
  if (row_count == 0) fail(errc::config, "synthetic row_count must be >= 1");
  if (noise_sigma < 0.0) fail(errc::config, "noise_sigma must be >= 0");
}

namespace {

constexpr double kFeatureLo = -3.0;
constexpr double kFeatureHi = 3.0;

// Per-field target contribution. Coefficients are drawn once per dataset from
// the coefficient stream, then applied row by row.
struct FieldTarget {
  // linear: c0 * v
  // piecewise: step function over 4 thresholds / 5 levels
  // smooth: a*sin(b*v + c) + 0.3*d*v
  SyntheticGenerator kind;
  double c0 = 0, a = 0, b = 0, c = 0, d = 0;
  std::vector<double> thresholds;
  std::vector<double> levels;

  double operator()(double v) const {
    switch (kind) {
      case SyntheticGenerator::linear: return c0 * v;
      case SyntheticGenerator::piecewise: {
        std::size_t i = 0;
        while (i < thresholds.size() && v >= thresholds[i]) ++i;
        return levels[i];
      }
      case SyntheticGenerator::smooth_nonlinear: return a * std::sin(b * v + c) + 0.3 * d * v;
    }
    return 0.0;
  }
};

}  // namespace

SyntheticData generate_synthetic(const SyntheticSpec& spec) {
  spec.validate();
  Rng coef_rng(mix_seed(spec.seed, 1));
  Rng feat_rng(mix_seed(spec.seed, 2));
  Rng noise_rng(mix_seed(spec.seed, 3));

  std::vector<FieldTarget> targets(spec.field_count);
  for (auto& t : targets) {
    t.kind = spec.generator;
    switch (spec.generator) {
      case SyntheticGenerator::linear:
        t.c0 = coef_rng.uniform(-1.0, 1.0);
        break;
      case SyntheticGenerator::piecewise: {
        t.thresholds.resize(4);
        for (auto& th : t.thresholds) th = coef_rng.uniform(kFeatureLo, kFeatureHi);
        std::sort(t.thresholds.begin(), t.thresholds.end());
        t.levels.resize(5);
        for (auto& l : t.levels) l = coef_rng.uniform(-1.0, 1.0);
        break;
      }
      case SyntheticGenerator::smooth_nonlinear:
        t.a = coef_rng.uniform(0.5, 1.5);
        t.b = coef_rng.uniform(0.5, 1.5);
        t.c = coef_rng.uniform(0.0, 6.283185307179586);
        t.d = coef_rng.uniform(-1.0, 1.0);
        break;
    }
  }

  SyntheticData out;
  out.data.name = spec.name;
  out.data.field_count = spec.field_count;
  out.data.features.resize(spec.row_count * spec.field_count);
  out.truth.resize(spec.row_count);
  out.observations.resize(spec.row_count);
  for (std::size_t r = 0; r < spec.row_count; ++r) {
    double lambda = 0.0;
    for (std::size_t f = 0; f < spec.field_count; ++f) {
      double v = feat_rng.uniform(kFeatureLo, kFeatureHi);
      out.data.features[r * spec.field_count + f] = v;
      lambda += targets[f](v);
    }
    out.truth[r] = lambda;
    out.observations[r] = spec.noise_sigma > 0.0
                              ? lambda + spec.noise_sigma * noise_rng.normal()
                              : lambda;
  }

  // Labels: threshold the ground truth at its lower median, which balances
  // the classes for continuous targets.
  std::vector<double> sorted_truth = out.truth;
  std::nth_element(sorted_truth.begin(), sorted_truth.begin() + (sorted_truth.size() - 1) / 2,
                   sorted_truth.end());
  double threshold = sorted_truth[(sorted_truth.size() - 1) / 2];
  out.data.labels.resize(spec.row_count);
  for (std::size_t r = 0; r < spec.row_count; ++r)
    out.data.labels[r] = out.truth[r] > threshold ? 1 : 0;
  out.data.row_ids.resize(spec.row_count);
  std::iota(out.data.row_ids.begin(), out.data.row_ids.end(), 0u);
  return out;
}

}  // namespace fdisc
