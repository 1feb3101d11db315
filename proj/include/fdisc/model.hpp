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

#include "fdisc/encoding.hpp"

namespace fdisc {

enum class Optimizer { sgd, adagrad };

const char* to_string(Optimizer o);
Optimizer optimizer_from_string(const std::string& s);

struct TrainConfig {
  Optimizer optimizer = Optimizer::adagrad;
  double learning_rate = 0.1;
  std::size_t epochs = 10;
  std::size_t batch_size = 256;
  double l2 = 0.0;
  std::uint64_t seed = 0;
  // Epochs without a validation-AUC improvement tolerated before stopping.
  // Set >= epochs to disable early stopping.
  std::size_t patience = 3;

  void validate() const;
};

// Sparse logistic regression: one weight per global index plus a bias.
struct LrModel {
  std::vector<double> weights;
  double bias = 0.0;

  double logit(std::span<const SparseEntry> row) const;
  double predict(std::span<const SparseEntry> row) const;  // sigmoid(logit), in (0,1)
};

struct DnnArch {
  std::size_t embedding_dim = 10;
  std::vector<std::size_t> hidden = {64, 32};  // ReLU layers; empty collapses to linear
};

// Sparse-embedding feed-forward net. Each slot's entries are aggregated as
// the weight-scaled sum of their embeddings, so an interpolated slot
// contributes exactly the convex combination of its two boundary embeddings.
// The per-slot vectors are concatenated and passed through the hidden stack
// to a single logit.
struct DnnModel {
  std::size_t embedding_dim = 0;
  std::size_t slots = 0;
  std::vector<double> embeddings;  // index_count * embedding_dim
  struct Layer {
    std::size_t in = 0, out = 0;
    std::vector<double> w;  // out x in, row-major
    std::vector<double> b;
  };
  std::vector<Layer> layers;
  std::vector<double> out_w;
  double out_b = 0.0;
  std::vector<std::uint32_t> slot_of_index;

  double predict(std::span<const SparseEntry> row) const;
  std::size_t embedding_parameter_count() const { return embeddings.size(); }
  std::size_t net_parameter_count() const;  // hidden + output, excludes embeddings
};

struct TrainStats {
  double best_valid_auc = 0.0;
  std::size_t best_epoch = 0;
  std::size_t epochs_run = 0;
  bool degenerate_labels = false;  // single-class train or valid; AUC undefined
  std::vector<double> train_loss;  // mean training loss after each epoch
};

struct LrTrainOutcome {
  LrModel model;
  TrainStats stats;
};

struct DnnTrainOutcome {
  DnnModel model;
  TrainStats stats;
};

// Mini-batch training on the active indices of each row; parameters are
// returned from the epoch with the best validation AUC. Deterministic for a
// fixed (config, data): batches come from a seeded shuffle and every batch is
// processed in ascending row order.
LrTrainOutcome train_lr(const EncodedDataset& train, const EncodedDataset& valid,
                        const TrainConfig& cfg);

DnnTrainOutcome train_dnn(const EncodedDataset& train, const EncodedDataset& valid,
                          const TrainConfig& cfg, const DnnArch& arch);

// Rank-based ROC AUC; ties contribute 1/2. Throws errc::degenerate unless both
// classes are present.
double auc(std::span<const double> scores, std::span<const std::uint8_t> labels);

std::vector<double> score_lr(const LrModel& model, const EncodedDataset& data);
std::vector<double> score_dnn(const DnnModel& model, const EncodedDataset& data);

// Full-precision loss + gradient entry points; the finite-difference tests
// check the training gradients against these.
double lr_loss(const LrModel& model, const EncodedDataset& data,
               std::span<const std::uint32_t> rows, double l2);
void lr_grad(const LrModel& model, const EncodedDataset& data, std::span<const std::uint32_t> rows,
             double l2, std::vector<double>& weight_grad, double& bias_grad);

struct DnnGrad {
  std::vector<double> embeddings;
  std::vector<std::vector<double>> layer_w;
  std::vector<std::vector<double>> layer_b;
  std::vector<double> out_w;
  double out_b = 0.0;
};

double dnn_loss(const DnnModel& model, const EncodedDataset& data,
                std::span<const std::uint32_t> rows, double l2);
void dnn_grad(const DnnModel& model, const EncodedDataset& data,
              std::span<const std::uint32_t> rows, double l2, DnnGrad& out);

// Versioned text serialization carrying the encoder hash; loading with a
// different expected hash fails with errc::mismatch.
void save_lr(const LrModel& model, std::uint64_t encoder_hash, const std::string& path);
LrModel load_lr(const std::string& path, std::uint64_t expected_hash);
void save_dnn(const DnnModel& model, std::uint64_t encoder_hash, const std::string& path);
DnnModel load_dnn(const std::string& path, std::uint64_t expected_hash);

}  // namespace fdisc
