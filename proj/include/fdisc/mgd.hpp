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
#include <vector>

#include "fdisc/encoding.hpp"
#include "fdisc/model.hpp"

namespace fdisc {

struct MgdConfig {
  std::vector<std::uint32_t> granularities = {10, 100, 1000, 10000};
  BinStrategy strategy = BinStrategy::equal_frequency;
  bool missing_bin = false;
  std::uint64_t seed = 0;
  // Probe: a one-field logistic regression trained for a fixed small budget.
  TrainConfig probe = {Optimizer::adagrad, 0.1, 3, 256, 0.0, 0, /*patience=*/3};

  void validate() const;
};

struct MgdSelection {
  EncoderSpec spec;                     // combined encoder over the survivors
  std::vector<MgdCandidate> ranked;     // all candidates, best first
  std::size_t kept = 0;                 // survivors = ranked[0..kept)
};

// Expands every field at every configured granularity, scores each candidate
// by the validation AUC of its probe, and keeps the best half (ceil(n/2); ties
// broken by smaller granularity, then lower field id). The survivors are
// assembled into one MGD encoder ordered by (field, granularity).
MgdSelection mgd_select(const NumericDataset& train, const NumericDataset& valid,
                        const MgdConfig& cfg);

}  // namespace fdisc
