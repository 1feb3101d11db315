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

#include <string>
#include <vector>

#include "fdisc/config.hpp"

namespace fdisc {

struct ExperimentCell {
  std::string dataset;
  std::string model;    // "lr" | "dnn"
  std::string encoder;  // EncoderConfig::describe()
  double ratio = 1.0;
  double auc = 0.0;     // exact value; NaN when the cell failed
  std::size_t embedding_params = 0;
  std::size_t net_params = 0;
  std::size_t train_rows = 0;
  std::size_t epochs_run = 0;
  std::size_t best_epoch = 0;
  std::uint64_t seed = 0;          // the training seed used for this cell
  std::string status = "ok";       // or the attached error
};

// Row-provenance record, one per executed cell; tests use it to audit that
// training never saw validation or test rows.
struct CellAudit {
  std::string cell;
  std::vector<std::uint32_t> train_ids, valid_ids, test_ids;
};

struct ExperimentReport {
  std::vector<ExperimentCell> cells;
  std::uint64_t config_hash = 0;
  std::uint64_t seed = 0;
  bool all_ok = true;

  std::string to_csv() const;    // deterministic byte-for-byte given a config
  std::string to_table() const;  // aligned text, one block per (dataset, model)
};

// Runs the full grid: every (encoder, ratio, model) cell. A failing cell is
// reported with its error and the rest of the grid still runs. When
// cfg.output_dir is set, persists config.json, results.csv, table.txt and the
// per-cell encoder/model artifacts there.
ExperimentReport run_experiment(const ExperimentConfig& cfg,
                                std::vector<CellAudit>* audit = nullptr);

// Embedding-parameter totals without training: one row per encoder config.
// MGD rows report the pre-selection total; the post-selection total requires
// data and is produced by run_experiment / mgd_select.
struct ParamRow {
  std::string encoder;
  std::size_t fields = 0;
  std::size_t embedding_dim = 1;
  std::size_t params = 0;
};

std::vector<ParamRow> param_table(const std::vector<EncoderConfig>& encoders, std::size_t fields,
                                  std::size_t embedding_dim, bool missing_bin);

}  // namespace fdisc
