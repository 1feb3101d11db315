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

#include "fdisc/encoding.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

#include <json.hpp>

namespace fdisc {

const char* to_string(EncoderKind k) {
  switch (k) {
    case EncoderKind::cd: return "cd";
    case EncoderKind::lle: return "lle";
    case EncoderKind::mgd: return "mgd";
  }
  return "?";
}

EncoderKind encoder_kind_from_string(const std::string& s) {
  if (s == "cd") return EncoderKind::cd;
  if (s == "lle") return EncoderKind::lle;
  if (s == "mgd") return EncoderKind::mgd;
  fail(errc::config, "unknown encoder kind '" + s + "'");
}

void EncoderSpec::finalize() {
  slot_offset.assign(1, 0);
  slot_offset.reserve(binspecs.size() + 1);
  for (const auto& b : binspecs) {
    std::uint32_t block = static_cast<std::uint32_t>(b.granularity());
    if (kind == EncoderKind::lle) block += 1;  // shared boundary indices
    if (missing_bin) block += 1;
    slot_offset.push_back(slot_offset.back() + block);
  }
}

std::size_t EncoderSpec::parameter_count(std::size_t embedding_dim) const {
  return static_cast<std::size_t>(total_indices()) * embedding_dim;
}

std::uint32_t EncoderSpec::slot_of_index(std::uint32_t index) const {
  auto it = std::upper_bound(slot_offset.begin(), slot_offset.end(), index);
  return static_cast<std::uint32_t>(it - slot_offset.begin()) - 1;
}

EncoderSpec fit_encoder(const NumericDataset& train, EncoderKind kind, std::size_t granularity,
                        BinStrategy strategy, bool missing_bin) {
  if (kind == EncoderKind::mgd)
    fail(errc::config, "mgd encoders are assembled by mgd_select, not fit_encoder");
  if (train.row_count() == 0) fail(errc::config, "cannot fit an encoder on an empty dataset");

  EncoderSpec spec;
  spec.kind = kind;
  spec.strategy = strategy;
  spec.missing_bin = missing_bin;
  spec.field_count = train.field_count;
  spec.binspecs.reserve(train.field_count);
  for (std::size_t f = 0; f < train.field_count; ++f) {
    auto values = train.field_values(f);
    values.erase(std::remove_if(values.begin(), values.end(),
                                [](double v) { return std::isnan(v); }),
                 values.end());
    if (values.empty()) fail(errc::config, "field " + std::to_string(f) + " is entirely missing");
    spec.binspecs.push_back(fit_bins(values, granularity, strategy,
                                     static_cast<std::uint32_t>(f)));
  }
  spec.finalize();
  return spec;
}

namespace {

// Interpolation weights for v inside [a, b]: the upper weight is the direct
// ratio (v-a)/(b-a) and the lower weight is its complement, which makes the
// pair sum to 1.0 exactly in floating point.
inline void interp_weights(double a, double b, double v, double& w_lower, double& w_upper) {
  w_upper = (v - a) / (b - a);
  w_lower = 1.0 - w_upper;
}

void encode_slot(const EncoderSpec& spec, std::size_t slot, double v,
                 std::vector<SparseEntry>& out) {
  const BinSpec& bins = spec.binspecs[slot];
  const std::uint32_t base = spec.slot_offset[slot];
  if (std::isnan(v)) {
    if (!spec.missing_bin)
      fail(errc::structure, "missing value in field " + std::to_string(bins.field_id) +
                                " but the encoder has no missing bin");
    out.push_back({spec.slot_offset[slot + 1] - 1, 1.0});
    return;
  }
  std::size_t bin = locate(bins, v);
  if (spec.kind != EncoderKind::lle) {
    out.push_back({base + static_cast<std::uint32_t>(bin), 1.0});
    return;
  }
  double a = bins.boundary(bin);
  double b = bins.boundary(bin + 1);
  if (!(a < b)) {  // degenerate bin: single shared embedding carries it all
    out.push_back({base + static_cast<std::uint32_t>(bin), 1.0});
    return;
  }
  double vc = std::clamp(v, a, b);
  double w_lower, w_upper;
  interp_weights(a, b, vc, w_lower, w_upper);
  out.push_back({base + static_cast<std::uint32_t>(bin), w_lower});
  out.push_back({base + static_cast<std::uint32_t>(bin) + 1, w_upper});
}

}  // namespace

SparseVector encode_row(const EncoderSpec& spec, std::span<const double> row) {
  if (row.size() != spec.field_count)
    fail(errc::structure, "row has " + std::to_string(row.size()) + " fields, encoder expects " +
                              std::to_string(spec.field_count));
  SparseVector out;
  out.entries.reserve(spec.slot_count() * (spec.kind == EncoderKind::lle ? 2 : 1));
  for (std::size_t slot = 0; slot < spec.slot_count(); ++slot) {
    std::size_t field = spec.kind == EncoderKind::mgd ? spec.survivors[slot].field
                                                      : slot;
    encode_slot(spec, slot, row[field], out.entries);
  }
  return out;
}

EncodedDataset encode_dataset(const EncoderSpec& spec, const NumericDataset& data) {
  EncodedDataset out;
  out.labels = data.labels;
  out.row_ids = data.row_ids;
  out.index_count = spec.total_indices();
  out.slot_offset = spec.slot_offset;
  out.encoder_hash = spec.hash();
  out.offsets.reserve(data.row_count() + 1);
  out.offsets.push_back(0);
  out.entries.reserve(data.row_count() * spec.slot_count());
  std::vector<SparseEntry> row_entries;
  for (std::size_t r = 0; r < data.row_count(); ++r) {
    row_entries.clear();
    if (data.row(r).size() != spec.field_count)
      fail(errc::structure, "dataset/encoder field count mismatch");
    for (std::size_t slot = 0; slot < spec.slot_count(); ++slot) {
      std::size_t field = spec.kind == EncoderKind::mgd ? spec.survivors[slot].field : slot;
      encode_slot(spec, slot, data.value(r, field), row_entries);
    }
    out.entries.insert(out.entries.end(), row_entries.begin(), row_entries.end());
    out.offsets.push_back(static_cast<std::uint32_t>(out.entries.size()));
  }
  return out;
}

void dump_encoded(const EncodedDataset& data, std::ostream& out) {
  char buf[48];
  for (std::size_t r = 0; r < data.row_count(); ++r) {
    out << static_cast<int>(data.labels[r]);
    for (const auto& e : data.row(r)) {
      std::snprintf(buf, sizeof(buf), " %u:%.17g", e.index, e.weight);
      out << buf;
    }
    out << '\n';
  }
}

// --- serialization -----------------------------------------------------------

namespace {

nlohmann::json binspec_to_json(const BinSpec& b) {
  return {{"field_id", b.field_id},
          {"strategy", to_string(b.strategy)},
          {"lo", b.lo},
          {"hi", b.hi},
          {"cuts", b.cuts}};
}

BinSpec binspec_from_json(const nlohmann::json& j) {
  BinSpec b;
  b.field_id = j.at("field_id").get<std::uint32_t>();
  b.strategy = bin_strategy_from_string(j.at("strategy").get<std::string>());
  b.lo = j.at("lo").get<double>();
  b.hi = j.at("hi").get<double>();
  b.cuts = j.at("cuts").get<std::vector<double>>();
  return b;
}

}  // namespace

std::string EncoderSpec::to_json_string() const {
  nlohmann::json j;
  j["format"] = "fdisc-encoder";
  j["version"] = 1;
  j["kind"] = to_string(kind);
  j["strategy"] = to_string(strategy);
  j["missing_bin"] = missing_bin;
  j["field_count"] = field_count;
  j["binspecs"] = nlohmann::json::array();
  for (const auto& b : binspecs) j["binspecs"].push_back(binspec_to_json(b));
  if (kind == EncoderKind::mgd) {
    j["survivors"] = nlohmann::json::array();
    for (const auto& s : survivors)
      j["survivors"].push_back(
          {{"field", s.field}, {"granularity", s.granularity}, {"probe_auc", s.probe_auc}});
  }
  return j.dump(2);
}

EncoderSpec EncoderSpec::from_json_string(const std::string& text) try {
  nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded() || j.value("format", "") != "fdisc-encoder" || j.value("version", 0) != 1)
    fail(errc::parse, "not a fdisc-encoder v1 document");
  EncoderSpec spec;
  spec.kind = encoder_kind_from_string(j.at("kind").get<std::string>());
  spec.strategy = bin_strategy_from_string(j.at("strategy").get<std::string>());
  spec.missing_bin = j.at("missing_bin").get<bool>();
  spec.field_count = j.at("field_count").get<std::size_t>();
  for (const auto& bj : j.at("binspecs")) spec.binspecs.push_back(binspec_from_json(bj));
  if (spec.kind == EncoderKind::mgd) {
    for (const auto& sj : j.at("survivors")) {
      spec.survivors.push_back({sj.at("field").get<std::uint32_t>(),
                                sj.at("granularity").get<std::uint32_t>(),
                                sj.at("probe_auc").get<double>()});
    }
    if (spec.survivors.size() != spec.binspecs.size())
      fail(errc::structure, "mgd encoder: survivors and binspecs disagree");
  }
  spec.finalize();
  return spec;
} catch (const nlohmann::json::exception& e) {
  fail(errc::parse, std::string("encoder spec: ") + e.what());
}

void EncoderSpec::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) fail(errc::io, "cannot write '" + path + "'");
  out << to_json_string() << '\n';
}

EncoderSpec EncoderSpec::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(errc::io, "cannot open '" + path + "'");
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return from_json_string(text);
}

std::uint64_t EncoderSpec::hash() const {
  std::string canon = to_json_string();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canon) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace fdisc
