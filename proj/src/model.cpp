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

#include "fdisc/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>

#include "fdisc/rng.hpp"

namespace fdisc {

const char* to_string(Optimizer o) { return o == Optimizer::sgd ? "sgd" : "adagrad"; }

Optimizer optimizer_from_string(const std::string& s) {
  if (s == "sgd") return Optimizer::sgd;
  if (s == "adagrad") return Optimizer::adagrad;
  fail(errc::config, "unknown optimizer '" + s + "'");
}

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0)) fail(errc::config, "learning_rate must be > 0");
  if (epochs == 0) fail(errc::config, "epochs must be >= 1");
  if (batch_size == 0) fail(errc::config, "batch_size must be >= 1");
  if (l2 < 0.0) fail(errc::config, "l2 must be >= 0");
}

namespace {

inline double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  double e = std::exp(z);
  return e / (1.0 + e);
}

// -log p(y|z), stable for large |z|.
inline double logistic_loss(double z, double y) {
  if (z >= 0.0) return (1.0 - y) * z + std::log1p(std::exp(-z));
  return -y * z + std::log1p(std::exp(z));
}

void check_bounds(const EncodedDataset& data, std::size_t table_rows) {
  if (data.index_count > table_rows)
    fail(errc::structure, "encoded data addresses " + std::to_string(data.index_count) +
                              " indices but the model table has " + std::to_string(table_rows));
}

bool both_classes(const std::vector<std::uint8_t>& labels) {
  bool has0 = false, has1 = false;
  for (auto l : labels) (l ? has1 : has0) = true;
  return has0 && has1;
}

}  // namespace

double LrModel::logit(std::span<const SparseEntry> row) const {
  double z = bias;
  for (const auto& e : row) z += weights[e.index] * e.weight;
  return z;
}

double LrModel::predict(std::span<const SparseEntry> row) const { return sigmoid(logit(row)); }

double auc(std::span<const double> scores, std::span<const std::uint8_t> labels) {
  if (scores.size() != labels.size()) fail(errc::structure, "scores/labels length mismatch");
  std::size_t n = scores.size();
  std::size_t pos = 0;
  for (auto l : labels) pos += l;
  if (pos == 0 || pos == n)
    fail(errc::degenerate, "AUC undefined: labels contain a single class");

  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::uint32_t a, std::uint32_t b) { return scores[a] < scores[b]; });

  // Average ranks over tie runs, accumulate ranks of positives.
  double pos_rank_sum = 0.0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    double avg_rank = 0.5 * static_cast<double>(i + 1 + j);  // ranks are 1-based
    for (std::size_t k = i; k < j; ++k)
      if (labels[order[k]]) pos_rank_sum += avg_rank;
    i = j;
  }
  double np = static_cast<double>(pos);
  double nn = static_cast<double>(n - pos);
  return (pos_rank_sum - np * (np + 1.0) / 2.0) / (np * nn);
}

std::vector<double> score_lr(const LrModel& model, const EncodedDataset& data) {
  check_bounds(data, model.weights.size());
  std::vector<double> out(data.row_count());
  for (std::size_t r = 0; r < data.row_count(); ++r) out[r] = model.predict(data.row(r));
  return out;
}

double lr_loss(const LrModel& model, const EncodedDataset& data,
               std::span<const std::uint32_t> rows, double l2) {
  KahanSum loss;
  for (auto r : rows) loss.add(logistic_loss(model.logit(data.row(r)), data.labels[r]));
  double mean = loss.value() / static_cast<double>(rows.size());
  if (l2 > 0.0) {
    KahanSum reg;
    for (double w : model.weights) reg.add(w * w);
    mean += 0.5 * l2 * reg.value();
  }
  return mean;
}

void lr_grad(const LrModel& model, const EncodedDataset& data, std::span<const std::uint32_t> rows,
             double l2, std::vector<double>& weight_grad, double& bias_grad) {
  weight_grad.assign(model.weights.size(), 0.0);
  std::vector<double> comp(model.weights.size(), 0.0);
  KahanSum bias_sum;
  const double inv_n = 1.0 / static_cast<double>(rows.size());
  for (auto r : rows) {
    double g = (sigmoid(model.logit(data.row(r))) - static_cast<double>(data.labels[r])) * inv_n;
    bias_sum.add(g);
    for (const auto& e : data.row(r)) {
      // Neumaier step inlined: permutations of row order must not move the
      // result beyond the last ulp.
      double x = g * e.weight;
      double& s = weight_grad[e.index];
      double t = s + x;
      comp[e.index] += std::abs(s) >= std::abs(x) ? (s - t) + x : (x - t) + s;
      s = t;
    }
  }
  for (std::size_t j = 0; j < weight_grad.size(); ++j) weight_grad[j] += comp[j];
  if (l2 > 0.0)
    for (std::size_t j = 0; j < weight_grad.size(); ++j) weight_grad[j] += l2 * model.weights[j];
  bias_grad = bias_sum.value();
}

namespace {

// Shared epoch driver: seeded shuffle into batches, each batch processed in
// ascending row order (so a full batch is storage order no matter the seed),
// early stopping on validation AUC.
template <class StepFn, class AucFn, class SnapshotFn>
TrainStats run_epochs(const TrainConfig& cfg, std::size_t n_rows, bool degenerate, StepFn step,
                      AucFn valid_auc, SnapshotFn snapshot) {
  TrainStats stats;
  stats.degenerate_labels = degenerate;
  stats.best_valid_auc = std::numeric_limits<double>::quiet_NaN();

  std::vector<std::uint32_t> order(n_rows);
  std::iota(order.begin(), order.end(), 0u);
  std::vector<std::uint32_t> batch;
  double best = -1.0;
  std::size_t bad_epochs = 0;

  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    Rng shuffle_rng(mix_seed(cfg.seed, 0xE90C + epoch));
    shuffle_rng.shuffle(order);
    KahanSum epoch_loss;
    std::size_t batches = 0;
    for (std::size_t start = 0; start < n_rows; start += cfg.batch_size) {
      std::size_t end = std::min(n_rows, start + cfg.batch_size);
      batch.assign(order.begin() + start, order.begin() + end);
      std::sort(batch.begin(), batch.end());
      epoch_loss.add(step(batch));
      ++batches;
    }
    stats.train_loss.push_back(epoch_loss.value() / static_cast<double>(batches));
    stats.epochs_run = epoch;
    if (degenerate) continue;

    double a = valid_auc();
    if (a > best) {
      best = a;
      stats.best_valid_auc = a;
      stats.best_epoch = epoch;
      snapshot();
      bad_epochs = 0;
    } else if (++bad_epochs > cfg.patience) {
      break;
    }
  }
  return stats;
}

}  // namespace

LrTrainOutcome train_lr(const EncodedDataset& train, const EncodedDataset& valid,
                        const TrainConfig& cfg) {
  cfg.validate();
  if (train.row_count() == 0) fail(errc::config, "empty training set");

  LrTrainOutcome out;
  out.model.weights.assign(train.index_count, 0.0);
  out.model.bias = 0.0;
  LrModel best = out.model;

  std::vector<double> grad;
  double bias_grad = 0.0;
  std::vector<double> accum(train.index_count, 0.0);
  double bias_accum = 0.0;
  const double eps = 1e-8;

  bool degenerate = !both_classes(train.labels) || !both_classes(valid.labels);

  auto step = [&](const std::vector<std::uint32_t>& batch) {
    double loss = lr_loss(out.model, train, batch, cfg.l2);
    lr_grad(out.model, train, batch, cfg.l2, grad, bias_grad);
    if (cfg.optimizer == Optimizer::adagrad) {
      for (std::size_t j = 0; j < grad.size(); ++j) {
        if (grad[j] == 0.0) continue;
        accum[j] += grad[j] * grad[j];
        out.model.weights[j] -= cfg.learning_rate * grad[j] / (std::sqrt(accum[j]) + eps);
      }
      bias_accum += bias_grad * bias_grad;
      out.model.bias -= cfg.learning_rate * bias_grad / (std::sqrt(bias_accum) + eps);
    } else {
      for (std::size_t j = 0; j < grad.size(); ++j)
        if (grad[j] != 0.0) out.model.weights[j] -= cfg.learning_rate * grad[j];
      out.model.bias -= cfg.learning_rate * bias_grad;
    }
    return loss;
  };
  auto valid_auc = [&] { return auc(score_lr(out.model, valid), valid.labels); };
  auto snapshot = [&] { best = out.model; };

  check_bounds(valid, out.model.weights.size());
  out.stats = run_epochs(cfg, train.row_count(), degenerate, step, valid_auc, snapshot);
  if (!degenerate) out.model = best;
  return out;
}

// --- DNN ---------------------------------------------------------------------

std::size_t DnnModel::net_parameter_count() const {
  std::size_t n = out_w.size() + 1;
  for (const auto& l : layers) n += l.w.size() + l.b.size();
  return n;
}

namespace {

// Forward pass workspace; one per training/scoring loop to avoid per-row
// allocation.
struct DnnWork {
  std::vector<double> x;                     // concatenated slot embeddings
  std::vector<std::vector<double>> z, h;     // per layer
  std::vector<double> dx;
  std::vector<std::vector<double>> dz;

  void resize(const DnnModel& m) {
    x.assign(m.slots * m.embedding_dim, 0.0);
    z.resize(m.layers.size());
    h.resize(m.layers.size());
    dz.resize(m.layers.size());
    for (std::size_t l = 0; l < m.layers.size(); ++l) {
      z[l].assign(m.layers[l].out, 0.0);
      h[l].assign(m.layers[l].out, 0.0);
      dz[l].assign(m.layers[l].out, 0.0);
    }
    dx.assign(x.size(), 0.0);
  }
};

double dnn_forward(const DnnModel& m, std::span<const SparseEntry> row, DnnWork& w) {
  std::fill(w.x.begin(), w.x.end(), 0.0);
  const std::size_t d = m.embedding_dim;
  for (const auto& e : row) {
    std::size_t slot = m.slot_of_index[e.index];
    const double* emb = m.embeddings.data() + static_cast<std::size_t>(e.index) * d;
    double* dst = w.x.data() + slot * d;
    for (std::size_t k = 0; k < d; ++k) dst[k] += e.weight * emb[k];
  }
  const std::vector<double>* in = &w.x;
  for (std::size_t l = 0; l < m.layers.size(); ++l) {
    const auto& layer = m.layers[l];
    for (std::size_t o = 0; o < layer.out; ++o) {
      double z = layer.b[o];
      const double* wr = layer.w.data() + o * layer.in;
      for (std::size_t i = 0; i < layer.in; ++i) z += wr[i] * (*in)[i];
      w.z[l][o] = z;
      w.h[l][o] = z > 0.0 ? z : 0.0;
    }
    in = &w.h[l];
  }
  double logit = m.out_b;
  for (std::size_t i = 0; i < in->size(); ++i) logit += m.out_w[i] * (*in)[i];
  return logit;
}

}  // namespace

double DnnModel::predict(std::span<const SparseEntry> row) const {
  DnnWork w;
  w.resize(*this);
  return sigmoid(dnn_forward(*this, row, w));
}

std::vector<double> score_dnn(const DnnModel& model, const EncodedDataset& data) {
  check_bounds(data, model.embeddings.size() / model.embedding_dim);
  DnnWork w;
  w.resize(model);
  std::vector<double> out(data.row_count());
  for (std::size_t r = 0; r < data.row_count(); ++r)
    out[r] = sigmoid(dnn_forward(model, data.row(r), w));
  return out;
}

double dnn_loss(const DnnModel& model, const EncodedDataset& data,
                std::span<const std::uint32_t> rows, double l2) {
  DnnWork w;
  w.resize(model);
  KahanSum loss;
  for (auto r : rows)
    loss.add(logistic_loss(dnn_forward(model, data.row(r), w), data.labels[r]));
  double mean = loss.value() / static_cast<double>(rows.size());
  if (l2 > 0.0) {
    KahanSum reg;
    for (double v : model.embeddings) reg.add(v * v);
    for (const auto& l : model.layers)
      for (double v : l.w) reg.add(v * v);
    for (double v : model.out_w) reg.add(v * v);
    mean += 0.5 * l2 * reg.value();
  }
  return mean;
}

void dnn_grad(const DnnModel& m, const EncodedDataset& data, std::span<const std::uint32_t> rows,
              double l2, DnnGrad& g) {
  g.embeddings.assign(m.embeddings.size(), 0.0);
  g.layer_w.resize(m.layers.size());
  g.layer_b.resize(m.layers.size());
  for (std::size_t l = 0; l < m.layers.size(); ++l) {
    g.layer_w[l].assign(m.layers[l].w.size(), 0.0);
    g.layer_b[l].assign(m.layers[l].b.size(), 0.0);
  }
  g.out_w.assign(m.out_w.size(), 0.0);
  g.out_b = 0.0;

  DnnWork w;
  w.resize(m);
  const std::size_t d = m.embedding_dim;
  const double inv_n = 1.0 / static_cast<double>(rows.size());

  for (auto r : rows) {
    auto row = data.row(r);
    double go = (sigmoid(dnn_forward(m, row, w)) - static_cast<double>(data.labels[r])) * inv_n;

    const std::vector<double>& top = m.layers.empty() ? w.x : w.h.back();
    for (std::size_t i = 0; i < top.size(); ++i) g.out_w[i] += go * top[i];
    g.out_b += go;

    // delta flowing into the layer below
    std::vector<double>* delta = &w.dx;
    if (m.layers.empty()) {
      for (std::size_t i = 0; i < w.dx.size(); ++i) w.dx[i] = go * m.out_w[i];
    } else {
      auto& dtop = w.dz.back();
      for (std::size_t o = 0; o < dtop.size(); ++o)
        dtop[o] = w.z.back()[o] > 0.0 ? go * m.out_w[o] : 0.0;
      for (std::size_t l = m.layers.size(); l-- > 0;) {
        const auto& layer = m.layers[l];
        const std::vector<double>& below = l == 0 ? w.x : w.h[l - 1];
        for (std::size_t o = 0; o < layer.out; ++o) {
          double dz = w.dz[l][o];
          if (dz == 0.0) continue;
          double* gw = g.layer_w[l].data() + o * layer.in;
          for (std::size_t i = 0; i < layer.in; ++i) gw[i] += dz * below[i];
          g.layer_b[l][o] += dz;
        }
        std::vector<double>& dbelow = l == 0 ? w.dx : w.dz[l - 1];
        std::fill(dbelow.begin(), dbelow.end(), 0.0);
        for (std::size_t o = 0; o < layer.out; ++o) {
          double dz = w.dz[l][o];
          if (dz == 0.0) continue;
          const double* wr = layer.w.data() + o * layer.in;
          for (std::size_t i = 0; i < layer.in; ++i) dbelow[i] += dz * wr[i];
        }
        if (l > 0) {
          for (std::size_t o = 0; o < dbelow.size(); ++o)
            if (w.z[l - 1][o] <= 0.0) dbelow[o] = 0.0;
        }
      }
      delta = &w.dx;
    }

    // into the embeddings, scaled by each entry's encoding weight
    for (const auto& e : row) {
      std::size_t slot = m.slot_of_index[e.index];
      const double* dsrc = delta->data() + slot * d;
      double* dst = g.embeddings.data() + static_cast<std::size_t>(e.index) * d;
      for (std::size_t k = 0; k < d; ++k) dst[k] += e.weight * dsrc[k];
    }
  }

  if (l2 > 0.0) {
    for (std::size_t i = 0; i < g.embeddings.size(); ++i) g.embeddings[i] += l2 * m.embeddings[i];
    for (std::size_t l = 0; l < m.layers.size(); ++l)
      for (std::size_t i = 0; i < g.layer_w[l].size(); ++i)
        g.layer_w[l][i] += l2 * m.layers[l].w[i];
    for (std::size_t i = 0; i < g.out_w.size(); ++i) g.out_w[i] += l2 * m.out_w[i];
  }
}

DnnTrainOutcome train_dnn(const EncodedDataset& train, const EncodedDataset& valid,
                          const TrainConfig& cfg, const DnnArch& arch) {
  cfg.validate();
  if (arch.embedding_dim == 0) fail(errc::config, "embedding_dim must be >= 1");
  if (train.row_count() == 0) fail(errc::config, "empty training set");
  if (train.slot_count() == 0) fail(errc::structure, "encoded data carries no slot layout");

  DnnTrainOutcome out;
  DnnModel& m = out.model;
  m.embedding_dim = arch.embedding_dim;
  m.slots = train.slot_count();
  m.slot_of_index.assign(train.index_count, 0);
  for (std::size_t s = 0; s + 1 < train.slot_offset.size(); ++s)
    for (std::uint32_t i = train.slot_offset[s]; i < train.slot_offset[s + 1]; ++i)
      m.slot_of_index[i] = static_cast<std::uint32_t>(s);

  Rng init(mix_seed(cfg.seed, 0xD77));
  m.embeddings.resize(static_cast<std::size_t>(train.index_count) * arch.embedding_dim);
  for (auto& v : m.embeddings) v = init.uniform(-0.05, 0.05);
  std::size_t in_width = m.slots * arch.embedding_dim;
  for (std::size_t width : arch.hidden) {
    DnnModel::Layer layer;
    layer.in = in_width;
    layer.out = width;
    double r = std::sqrt(6.0 / static_cast<double>(layer.in + layer.out));
    layer.w.resize(layer.in * layer.out);
    for (auto& v : layer.w) v = init.uniform(-r, r);
    layer.b.assign(layer.out, 0.0);
    m.layers.push_back(std::move(layer));
    in_width = width;
  }
  {
    double r = std::sqrt(6.0 / static_cast<double>(in_width + 1));
    m.out_w.resize(in_width);
    for (auto& v : m.out_w) v = init.uniform(-r, r);
    m.out_b = 0.0;
  }

  DnnModel best = m;
  DnnGrad grad;
  DnnGrad accum;  // adagrad squared-gradient history, same shape as grad
  accum.embeddings.assign(m.embeddings.size(), 0.0);
  accum.layer_w.resize(m.layers.size());
  accum.layer_b.resize(m.layers.size());
  for (std::size_t l = 0; l < m.layers.size(); ++l) {
    accum.layer_w[l].assign(m.layers[l].w.size(), 0.0);
    accum.layer_b[l].assign(m.layers[l].b.size(), 0.0);
  }
  accum.out_w.assign(m.out_w.size(), 0.0);
  accum.out_b = 0.0;
  const double eps = 1e-8;

  auto apply = [&](double* param, double* acc, double g, double lr) {
    if (g == 0.0) return;
    if (cfg.optimizer == Optimizer::adagrad) {
      *acc += g * g;
      *param -= lr * g / (std::sqrt(*acc) + eps);
    } else {
      *param -= lr * g;
    }
  };

  bool degenerate = !both_classes(train.labels) || !both_classes(valid.labels);

  auto step = [&](const std::vector<std::uint32_t>& batch) {
    double loss = dnn_loss(m, train, batch, cfg.l2);
    dnn_grad(m, train, batch, cfg.l2, grad);
    for (std::size_t i = 0; i < m.embeddings.size(); ++i)
      apply(&m.embeddings[i], &accum.embeddings[i], grad.embeddings[i], cfg.learning_rate);
    for (std::size_t l = 0; l < m.layers.size(); ++l) {
      for (std::size_t i = 0; i < m.layers[l].w.size(); ++i)
        apply(&m.layers[l].w[i], &accum.layer_w[l][i], grad.layer_w[l][i], cfg.learning_rate);
      for (std::size_t i = 0; i < m.layers[l].b.size(); ++i)
        apply(&m.layers[l].b[i], &accum.layer_b[l][i], grad.layer_b[l][i], cfg.learning_rate);
    }
    for (std::size_t i = 0; i < m.out_w.size(); ++i)
      apply(&m.out_w[i], &accum.out_w[i], grad.out_w[i], cfg.learning_rate);
    apply(&m.out_b, &accum.out_b, grad.out_b, cfg.learning_rate);
    return loss;
  };
  auto valid_auc = [&] { return auc(score_dnn(m, valid), valid.labels); };
  auto snapshot = [&] { best = m; };

  check_bounds(valid, m.embeddings.size() / m.embedding_dim);
  out.stats = run_epochs(cfg, train.row_count(), degenerate, step, valid_auc, snapshot);
  if (!degenerate) out.model = best;
  return out;
}

// --- serialization -----------------------------------------------------------

namespace {

void write_doubles(std::ofstream& out, const std::vector<double>& v) {
  char buf[40];
  for (double x : v) {
    std::snprintf(buf, sizeof(buf), "%.17g\n", x);
    out << buf;
  }
}

std::vector<double> read_doubles(std::ifstream& in, std::size_t n) {
  std::vector<double> v(n);
  for (auto& x : v)
    if (!(in >> x)) fail(errc::parse, "model file: truncated parameter block");
  return v;
}

void check_header(std::ifstream& in, const char* expected_kind, std::uint64_t expected_hash,
                  std::uint64_t& stored_hash) {
  std::string magic, kind;
  int version = 0;
  in >> magic >> version >> kind >> stored_hash;
  if (magic != "fdisc-model" || version != 1) fail(errc::parse, "not a fdisc-model v1 file");
  if (kind != expected_kind) fail(errc::mismatch, "model kind is '" + kind + "'");
  if (expected_hash != 0 && stored_hash != expected_hash)
    fail(errc::mismatch, "model was trained under a different encoder spec");
}

}  // namespace

void save_lr(const LrModel& model, std::uint64_t encoder_hash, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(errc::io, "cannot write '" + path + "'");
  out << "fdisc-model 1 lr " << encoder_hash << '\n';
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g\n", model.bias);
  out << model.weights.size() << '\n' << buf;
  write_doubles(out, model.weights);
}

LrModel load_lr(const std::string& path, std::uint64_t expected_hash) {
  std::ifstream in(path);
  if (!in) fail(errc::io, "cannot open '" + path + "'");
  std::uint64_t stored = 0;
  check_header(in, "lr", expected_hash, stored);
  std::size_t n = 0;
  LrModel m;
  if (!(in >> n >> m.bias)) fail(errc::parse, "model file: bad lr header");
  m.weights = read_doubles(in, n);
  return m;
}

void save_dnn(const DnnModel& model, std::uint64_t encoder_hash, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(errc::io, "cannot write '" + path + "'");
  out << "fdisc-model 1 dnn " << encoder_hash << '\n';
  out << model.embedding_dim << ' ' << model.slots << ' ' << model.embeddings.size() << ' '
      << model.layers.size() << ' ' << model.slot_of_index.size() << '\n';
  for (auto s : model.slot_of_index) out << s << '\n';
  write_doubles(out, model.embeddings);
  for (const auto& l : model.layers) {
    out << l.in << ' ' << l.out << '\n';
    write_doubles(out, l.w);
    write_doubles(out, l.b);
  }
  out << model.out_w.size() << '\n';
  write_doubles(out, model.out_w);
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g\n", model.out_b);
  out << buf;
}

DnnModel load_dnn(const std::string& path, std::uint64_t expected_hash) {
  std::ifstream in(path);
  if (!in) fail(errc::io, "cannot open '" + path + "'");
  std::uint64_t stored = 0;
  check_header(in, "dnn", expected_hash, stored);
  DnnModel m;
  std::size_t emb_n = 0, layer_n = 0, slot_map_n = 0;
  if (!(in >> m.embedding_dim >> m.slots >> emb_n >> layer_n >> slot_map_n))
    fail(errc::parse, "model file: bad dnn header");
  m.slot_of_index.resize(slot_map_n);
  for (auto& s : m.slot_of_index)
    if (!(in >> s)) fail(errc::parse, "model file: truncated slot map");
  m.embeddings = read_doubles(in, emb_n);
  m.layers.resize(layer_n);
  for (auto& l : m.layers) {
    if (!(in >> l.in >> l.out)) fail(errc::parse, "model file: bad layer header");
    l.w = read_doubles(in, l.in * l.out);
    l.b = read_doubles(in, l.out);
  }
  std::size_t out_n = 0;
  if (!(in >> out_n)) fail(errc::parse, "model file: bad output header");
  m.out_w = read_doubles(in, out_n);
  if (!(in >> m.out_b)) fail(errc::parse, "model file: truncated output bias");
  return m;
}

}  // namespace fdisc
