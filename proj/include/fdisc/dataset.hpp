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

namespace fdisc {

// Dense numeric dataset with binary labels, row-major feature storage.
// Datasets are immutable once built and safe to share across threads.
// row_ids track provenance through split/subsample so tests can audit that
// evaluation rows never leak into training.
struct NumericDataset {
  std::string name;
  std::size_t field_count = 0;
  std::vector<std::uint8_t> labels;
  std::vector<double> features;  // labels.size() * field_count
  std::vector<std::uint32_t> row_ids;

  std::size_t row_count() const { return labels.size(); }

  std::span<const double> row(std::size_t i) const {
    return {features.data() + i * field_count, field_count};
  }

  double value(std::size_t r, std::size_t f) const { return features[r * field_count + f]; }

  std::vector<double> field_values(std::size_t f) const;

  double label_prevalence() const;
};

enum class CsvLayout { label_first };

// Comma-separated, no header, label first. Labels must parse to exactly
// 0 or 1 (the float spellings "0.0"/"1.0" count).
NumericDataset load_csv(const std::string& path, CsvLayout layout = CsvLayout::label_first);

struct SplitSpec {
  double train_fraction = 0.8;
  double valid_fraction = 0.1;
  double test_fraction = 0.1;
  double sample_ratio = 1.0;  // applied to the train partition only
  std::uint64_t seed = 0;

  void validate() const;
};

struct SplitResult {
  NumericDataset train;
  NumericDataset valid;
  NumericDataset test;
};

// Stratified deterministic split. Rows are first partitioned per label class
// with a seeded shuffle, then the train partition is subsampled to
// ceil(sample_ratio * train_rows). valid/test do not depend on sample_ratio,
// so metric columns at different ratios are comparable.
SplitResult split(const NumericDataset& data, const SplitSpec& spec);

enum class SyntheticGenerator { linear, piecewise, smooth_nonlinear };

const char* to_string(SyntheticGenerator g);
SyntheticGenerator synthetic_generator_from_string(const std::string& s);

struct SyntheticSpec {
  SyntheticGenerator generator = SyntheticGenerator::smooth_nonlinear;
  std::size_t field_count = 4;
  std::size_t row_count = 1000;
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;
  std::string name = "synthetic";

  void validate() const;
};

struct SyntheticData {
  NumericDataset data;             // labels = (truth > lower median of truth)
  std::vector<double> truth;       // ground-truth target per row, unperturbed
  std::vector<double> observations;  // truth + N(0, sigma^2) noise
};

// Feature distributions and target families are documented in the README
// (features iid Uniform(-3,3); targets linear / per-field step / sinusoid+drift).
SyntheticData generate_synthetic(const SyntheticSpec& spec);

}  // namespace fdisc
