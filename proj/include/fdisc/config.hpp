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
#include <optional>
#include <string>
#include <vector>

#include "fdisc/dataset.hpp"
#include "fdisc/encoding.hpp"
#include "fdisc/model.hpp"

namespace fdisc {

// Declarative description of one experiment grid. Serializable to JSON; a
// run's output directory keeps the exact config used, and re-running from
// that file reproduces every reported number bit for bit.
struct DatasetSource {
  std::string path;                       // CSV path, or
  std::optional<SyntheticSpec> synthetic; // generated data
  std::string resolve_name() const;
};

struct EncoderConfig {
  EncoderKind kind = EncoderKind::cd;
  std::size_t granularity = 10;                 // cd / lle
  std::vector<std::uint32_t> granularities;     // mgd
  std::string describe() const;                 // "cd(10)", "mgd{10,100}"
};

struct ModelConfig {
  std::string kind = "lr";  // "lr" | "dnn"
  TrainConfig train;
  DnnArch arch;             // used when kind == "dnn"
};

struct ExperimentConfig {
  std::string name = "experiment";
  std::uint64_t seed = 0;
  DatasetSource dataset;
  SplitSpec split;                       // sample_ratio here is ignored; see ratios
  std::vector<double> ratios = {1.0};
  BinStrategy strategy = BinStrategy::equal_frequency;
  bool missing_bin = false;
  std::vector<EncoderConfig> encoders;
  std::vector<ModelConfig> models;
  std::string output_dir;

  void validate() const;
  std::string to_json_string() const;
  static ExperimentConfig from_json_string(const std::string& text);
  static ExperimentConfig load(const std::string& path);
  std::uint64_t hash() const;  // FNV-1a over the canonical serialized form
};

// Bin-quality verification campaign configuration; the defaults are the
// acceptance campaign.
struct SimulateConfig {
  std::uint64_t seed = 20260808;
  std::size_t trials = 100000;

  std::size_t split_fields = 100;      // random fields for the split property
  std::size_t samples_per_field = 240;
  std::size_t k_small = 4;             // coarse granularity; fine is 2x

  std::size_t dominance_bins = 100;    // random bins for the dominance property
  std::size_t affine_bins = 20;        // affine-target bins checked for exact zero

  std::vector<std::size_t> robustness_sizes = {2, 4, 8, 16};
  std::vector<double> robustness_sigmas = {0.5, 1.0, 2.0};
  double bin_span_lo = 20.0;  // robustness grid bins: evenly spaced values here
  double bin_span_hi = 21.0;

  bool zero_noise_checks = true;

  void validate() const;
  std::string to_json_string() const;
  static SimulateConfig from_json_string(const std::string& text);
  static SimulateConfig load(const std::string& path);
};

}  // namespace fdisc
