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

#include <cmath>
#include <limits>
#include <sstream>

#include "fdisc/encoding.hpp"
#include "fdisc/mgd.hpp"
#include "fdisc/rng.hpp"

using namespace fdisc;

namespace {

NumericDataset uniform_dataset(std::size_t fields, std::size_t rows, std::uint64_t seed,
                               double lo = 0.0, double hi = 1.0) {
  NumericDataset ds;
  ds.name = "uniform";
  ds.field_count = fields;
  Rng rng(seed);
  ds.features.resize(fields * rows);
  for (auto& v : ds.features) v = rng.uniform(lo, hi);
  ds.labels.resize(rows);
  for (std::size_t r = 0; r < rows; ++r) ds.labels[r] = ds.features[r * fields] > (lo + hi) / 2;
  ds.row_ids.resize(rows);
  for (std::size_t r = 0; r < rows; ++r) ds.row_ids[r] = static_cast<std::uint32_t>(r);
  return ds;
}

EncoderSpec two_field_cd_spec() {
  EncoderSpec spec;
  spec.kind = EncoderKind::cd;
  spec.field_count = 2;
  for (std::uint32_t f = 0; f < 2; ++f) {
    BinSpec b;
    b.field_id = f;
    b.lo = 0.0;
    b.hi = 5.0;
    b.cuts = {1.0, 2.0, 3.0, 4.0};
    spec.binspecs.push_back(b);
  }
  spec.finalize();
  return spec;
}

}  // namespace

TEST_CASE("cd encoding uses contiguous per-field index blocks") {
  auto spec = two_field_cd_spec();
  auto sv = encode_row(spec, std::vector<double>{0.5, 4.5});
  REQUIRE(sv.entries.size() == 2);
  CHECK(sv.entries[0].index == 0);
  CHECK(sv.entries[0].weight == 1.0);
  CHECK(sv.entries[1].index == 9);
  CHECK(sv.entries[1].weight == 1.0);

  // exactly one entry per field, indices strictly increasing
  Rng rng(1);
  for (int i = 0; i < 100; ++i) {
    auto v = std::vector<double>{rng.uniform(-1.0, 6.0), rng.uniform(-1.0, 6.0)};
    auto row = encode_row(spec, v);
    REQUIRE(row.entries.size() == 2);
    CHECK(row.entries[0].index < row.entries[1].index);
    CHECK(row.entries[0].weight == 1.0);
  }
  CHECK_THROWS_AS(encode_row(spec, std::vector<double>{1.0}), Error);
}

TEST_CASE("missing values map to the dedicated index only when enabled") {
  auto ds = uniform_dataset(2, 200, 3);
  auto spec = fit_encoder(ds, EncoderKind::cd, 5, BinStrategy::equal_frequency, true);
  double nan = std::numeric_limits<double>::quiet_NaN();
  auto sv = encode_row(spec, std::vector<double>{nan, 0.5});
  REQUIRE(sv.entries.size() == 2);
  CHECK(sv.entries[0].index == spec.slot_offset[1] - 1);  // field 0 missing index
  CHECK(sv.entries[0].weight == 1.0);

  auto no_missing = fit_encoder(ds, EncoderKind::cd, 5, BinStrategy::equal_frequency, false);
  CHECK_THROWS_AS(encode_row(no_missing, std::vector<double>{nan, 0.5}), Error);
}

TEST_CASE("lle weights: frozen examples") {
  EncoderSpec spec;
  spec.kind = EncoderKind::lle;
  spec.field_count = 1;
  BinSpec b;
  b.lo = 0.0;
  b.hi = 6.0;
  b.cuts = {2.0, 4.0};
  spec.binspecs.push_back(b);
  spec.finalize();

  auto at = [&](double v) { return encode_row(spec, std::vector<double>{v}); };

  auto mid = at(3.0);  // bin [2,4]
  REQUIRE(mid.entries.size() == 2);
  CHECK(mid.entries[0].index == 1);
  CHECK(mid.entries[0].weight == 0.5);
  CHECK(mid.entries[1].index == 2);
  CHECK(mid.entries[1].weight == 0.5);

  auto lower = at(2.0);  // exactly the cut -> upper bin, full weight on it
  CHECK(lower.entries[0].index == 1);
  CHECK(lower.entries[0].weight == 1.0);
  CHECK(lower.entries[1].weight == 0.0);

  auto q = at(3.5);
  CHECK(q.entries[0].weight == 0.25);
  CHECK(q.entries[1].weight == 0.75);
  CHECK(q.entries[0].weight + q.entries[1].weight == 1.0);
}

TEST_CASE("lle weights reproduce the documented formulas bitwise") {
  auto ds = uniform_dataset(3, 5000, 17, -10.0, 10.0);
  auto spec = fit_encoder(ds, EncoderKind::lle, 8);
  Rng rng(99);
  for (int i = 0; i < 10000; ++i) {
    std::vector<double> row{rng.uniform(-12.0, 12.0), rng.uniform(-12.0, 12.0),
                            rng.uniform(-12.0, 12.0)};
    auto sv = encode_row(spec, row);
    std::size_t e = 0;
    for (std::size_t f = 0; f < 3; ++f) {
      const BinSpec& bins = spec.binspecs[f];
      std::size_t bin = locate(bins, row[f]);
      double a = bins.boundary(bin), b = bins.boundary(bin + 1);
      // independent recomputation of the interpolation rule
      double vc = std::min(std::max(row[f], a), b);
      double beta = (vc - a) / (b - a);
      double alpha = 1.0 - beta;
      REQUIRE(e + 1 < sv.entries.size() + 1);
      CHECK(sv.entries[e].weight == alpha);
      CHECK(sv.entries[e + 1].weight == beta);
      CHECK(sv.entries[e].weight + sv.entries[e + 1].weight == 1.0);
      CHECK(sv.entries[e].weight >= 0.0);
      CHECK(sv.entries[e].weight <= 1.0);
      e += 2;
    }
  }
}

TEST_CASE("lle encoding is continuous across cuts") {
  auto ds = uniform_dataset(1, 2000, 23, 0.0, 100.0);
  auto spec = fit_encoder(ds, EncoderKind::lle, 10);
  const BinSpec& bins = spec.binspecs[0];
  for (double cut : bins.cuts) {
    auto below = encode_row(spec, std::vector<double>{std::nextafter(cut, -1e9)});
    auto atcut = encode_row(spec, std::vector<double>{cut});
    // weight on the shared boundary index approaches 1 from below and is 1 at
    // the cut (which belongs to the upper bin)
    std::size_t shared = 0;
    double w_below = 0.0;
    for (const auto& en : below.entries)
      if (en.weight > w_below) {
        w_below = en.weight;
        shared = en.index;
      }
    CHECK(w_below > 1.0 - 1e-9);
    CHECK(atcut.entries[0].index == shared);
    CHECK(atcut.entries[0].weight == 1.0);
  }
  // cd and lle agree on the located bin
  auto cd_spec = fit_encoder(ds, EncoderKind::cd, 10);
  Rng rng(5);
  for (int i = 0; i < 500; ++i) {
    double v = rng.uniform(-5.0, 105.0);
    auto cd = encode_row(cd_spec, std::vector<double>{v});
    auto lle = encode_row(spec, std::vector<double>{v});
    CHECK(cd.entries[0].index == lle.entries[0].index);  // same bin ordinal
  }
}

TEST_CASE("degenerate field emits a single full-weight entry under lle") {
  NumericDataset ds;
  ds.field_count = 1;
  ds.labels = {0, 1, 0, 1};
  ds.features = {3.0, 3.0, 3.0, 3.0};
  ds.row_ids = {0, 1, 2, 3};
  auto spec = fit_encoder(ds, EncoderKind::lle, 5);
  auto sv = encode_row(spec, std::vector<double>{3.0});
  REQUIRE(sv.entries.size() == 1);
  CHECK(sv.entries[0].weight == 1.0);
}

TEST_CASE("parameter counts reproduce the reference totals") {
  auto higgs_like = uniform_dataset(28, 3000, 41);
  auto lle28 = fit_encoder(higgs_like, EncoderKind::lle, 10);
  CHECK(lle28.parameter_count(1) == 308);  // 28 * (10 + 1)

  auto susy_like = uniform_dataset(18, 3000, 42);
  auto lle18 = fit_encoder(susy_like, EncoderKind::lle, 10);
  CHECK(lle18.parameter_count(1) == 198);  // 18 * (10 + 1)

  auto one = uniform_dataset(1, 500, 43);
  auto cd5 = fit_encoder(one, EncoderKind::cd, 5);
  CHECK(cd5.parameter_count(3) == 15);

  // index map is a bijection onto [0, total)
  CHECK(lle28.total_indices() == 308);
  CHECK(lle28.slot_offset.front() == 0);
  for (std::size_t s = 0; s < lle28.slot_count(); ++s) {
    CHECK(lle28.slot_offset[s + 1] - lle28.slot_offset[s] == 11);
    CHECK(lle28.slot_of_index(lle28.slot_offset[s]) == s);
    CHECK(lle28.slot_of_index(lle28.slot_offset[s + 1] - 1) == s);
  }
}

TEST_CASE("encoded dataset dump format") {
  auto spec = two_field_cd_spec();
  NumericDataset ds;
  ds.field_count = 2;
  ds.labels = {1, 0};
  ds.features = {0.5, 4.5, 2.5, 0.5};
  ds.row_ids = {0, 1};
  auto enc = encode_dataset(spec, ds);
  std::ostringstream out;
  dump_encoded(enc, out);
  CHECK(out.str() == "1 0:1 9:1\n0 2:1 5:1\n");
}

TEST_CASE("encoder spec json round trip preserves the hash") {
  auto ds = uniform_dataset(4, 1000, 55);
  auto spec = fit_encoder(ds, EncoderKind::lle, 6, BinStrategy::equal_width, true);
  auto text = spec.to_json_string();
  auto back = EncoderSpec::from_json_string(text);
  CHECK(back.hash() == spec.hash());
  CHECK(back.total_indices() == spec.total_indices());
  CHECK(back.binspecs[2].cuts == spec.binspecs[2].cuts);
  CHECK_THROWS_AS(EncoderSpec::from_json_string("{}"), Error);
}

TEST_CASE("mgd keeps the best half and drops uninformative fields") {
  // field 0 drives the label, field 1 is constant (probe AUC exactly 0.5)
  NumericDataset ds;
  ds.field_count = 2;
  Rng rng(71);
  std::size_t n = 3000;
  for (std::size_t i = 0; i < n; ++i) {
    double v = rng.uniform(-1.0, 1.0);
    ds.features.push_back(v);
    ds.features.push_back(1.0);
    ds.labels.push_back(v > 0 ? 1 : 0);
    ds.row_ids.push_back(static_cast<std::uint32_t>(i));
  }
  SplitSpec split_spec{0.8, 0.1, 0.1, 1.0, 5};
  auto parts = split(ds, split_spec);

  MgdConfig cfg;
  cfg.granularities = {4, 8, 16, 32};
  cfg.seed = 2;
  auto sel = mgd_select(parts.train, parts.valid, cfg);
  CHECK(sel.ranked.size() == 8);
  CHECK(sel.kept == 4);
  for (std::size_t i = 0; i < sel.kept; ++i) CHECK(sel.ranked[i].field == 0);
  for (std::size_t i = sel.kept; i < sel.ranked.size(); ++i) {
    CHECK(sel.ranked[i].field == 1);
    CHECK(sel.ranked[i].probe_auc == doctest::Approx(0.5));
  }
  CHECK(sel.spec.kind == EncoderKind::mgd);
  CHECK(sel.spec.slot_count() == 4);

  // encoding emits one entry per surviving slot
  auto sv = encode_row(sel.spec, std::vector<double>{0.3, 1.0});
  CHECK(sv.entries.size() == 4);
}

TEST_CASE("mgd ties break by granularity then field id") {
  // two identical fields: probe runs are identical, AUCs tie exactly
  NumericDataset ds;
  ds.field_count = 2;
  Rng rng(13);
  for (std::size_t i = 0; i < 2000; ++i) {
    double v = rng.uniform(-1.0, 1.0);
    ds.features.push_back(v);
    ds.features.push_back(v);
    ds.labels.push_back(v > 0.2 ? 1 : 0);
    ds.row_ids.push_back(static_cast<std::uint32_t>(i));
  }
  auto parts = split(ds, SplitSpec{0.8, 0.1, 0.1, 1.0, 9});
  MgdConfig cfg;
  cfg.granularities = {4, 8};
  cfg.seed = 3;
  auto sel = mgd_select(parts.train, parts.valid, cfg);
  REQUIRE(sel.ranked.size() == 4);
  for (std::size_t i = 0; i + 1 < sel.ranked.size(); ++i) {
    const auto& a = sel.ranked[i];
    const auto& b = sel.ranked[i + 1];
    if (a.probe_auc == b.probe_auc) {
      bool ordered = a.granularity < b.granularity ||
                     (a.granularity == b.granularity && a.field < b.field);
      CHECK(ordered);
    }
  }
  // identical fields at the same granularity tie exactly
  double auc_f0_g4 = 0, auc_f1_g4 = 0;
  for (const auto& c : sel.ranked) {
    if (c.granularity == 4 && c.field == 0) auc_f0_g4 = c.probe_auc;
    if (c.granularity == 4 && c.field == 1) auc_f1_g4 = c.probe_auc;
  }
  CHECK(auc_f0_g4 == auc_f1_g4);
}
