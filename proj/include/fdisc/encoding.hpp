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
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "fdisc/binning.hpp"
#include "fdisc/dataset.hpp"

namespace fdisc {

enum class EncoderKind { cd, lle, mgd };

const char* to_string(EncoderKind k);
EncoderKind encoder_kind_from_string(const std::string& s);

struct SparseEntry {
  std::uint32_t index = 0;
  double weight = 0.0;
};

// Encoded form of one row: (global index, weight) pairs with strictly
// increasing indices. CD emits one weight-1 entry per slot; LLE emits the two
// boundary entries of the located bin with weights that sum to 1 exactly.
struct SparseVector {
  std::vector<SparseEntry> entries;
};

// One surviving (field, granularity) candidate of a multi-granularity search.
struct MgdCandidate {
  std::uint32_t field = 0;
  std::uint32_t granularity = 0;
  double probe_auc = 0.0;
};

// Fitted encoder over a dataset's fields.
//
// A "slot" is one embedding-aggregation unit: field f for CD/LLE, one
// surviving (field, granularity) pair for MGD. Slot s owns the contiguous
// global index block [slot_offset[s], slot_offset[s+1]). Within a block:
//  - CD/MGD: one index per bin, in bin order;
//  - LLE: one index per bin boundary (granularity+1 of them); adjacent bins
//    share the index of their common cut, which is what makes the encoding
//    continuous across cut points;
//  - if missing_bin is set, one extra trailing index per slot catches NaN.
struct EncoderSpec {
  EncoderKind kind = EncoderKind::cd;
  BinStrategy strategy = BinStrategy::equal_frequency;
  bool missing_bin = false;
  std::size_t field_count = 0;          // fields of the source dataset
  std::vector<BinSpec> binspecs;        // one per slot
  std::vector<MgdCandidate> survivors;  // one per slot when kind == mgd
  std::vector<std::uint32_t> slot_offset;  // size slot_count()+1

  std::size_t slot_count() const { return binspecs.size(); }
  std::uint32_t total_indices() const { return slot_offset.empty() ? 0 : slot_offset.back(); }

  // Recomputes slot_offset from binspecs/missing_bin. Must be called after
  // any structural change; fit_encoder and deserialization do it for you.
  void finalize();

  // Embedding-side parameter total: indices * embedding_dim. Model-side
  // (hidden layer) parameters are reported by the models module.
  std::size_t parameter_count(std::size_t embedding_dim) const;

  std::uint32_t slot_of_index(std::uint32_t index) const;

  std::string to_json_string() const;
  static EncoderSpec from_json_string(const std::string& text);
  void save(const std::string& path) const;
  static EncoderSpec load(const std::string& path);

  // FNV-1a over the canonical serialized form; embedded in model files so a
  // model cannot silently score rows encoded under a different spec.
  std::uint64_t hash() const;
};

// Fits one BinSpec per field on the training data. kind must be cd or lle
// (MGD encoders are assembled by mgd_select, see mgd.hpp).
EncoderSpec fit_encoder(const NumericDataset& train, EncoderKind kind, std::size_t granularity,
                        BinStrategy strategy = BinStrategy::equal_frequency,
                        bool missing_bin = false);

SparseVector encode_row(const EncoderSpec& spec, std::span<const double> row);

// Column-compressed encoded dataset; rows are independent and the spec is
// immutable, so encoding distinct rows is safe to parallelize.
struct EncodedDataset {
  std::vector<std::uint8_t> labels;
  std::vector<std::uint32_t> offsets;  // row r owns entries [offsets[r], offsets[r+1])
  std::vector<SparseEntry> entries;
  std::uint32_t index_count = 0;
  std::vector<std::uint32_t> slot_offset;  // copied from the spec, for aggregation
  std::uint64_t encoder_hash = 0;
  std::vector<std::uint32_t> row_ids;

  std::size_t row_count() const { return labels.size(); }
  std::span<const SparseEntry> row(std::size_t r) const {
    return {entries.data() + offsets[r], offsets[r + 1] - offsets[r]};
  }
  std::size_t slot_count() const { return slot_offset.empty() ? 0 : slot_offset.size() - 1; }
};

EncodedDataset encode_dataset(const EncoderSpec& spec, const NumericDataset& data);

// "label index:weight index:weight ..." one row per line.
void dump_encoded(const EncodedDataset& data, std::ostream& out);

}  // namespace fdisc
