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

#include "fdisc/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "fdisc/mgd.hpp"
#include "fdisc/rng.hpp"

namespace fdisc {

namespace {

std::string fmt(const char* f, double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), f, v);
  return buf;
}

std::string sanitize(std::string s) {
  for (char& c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '.' && c != '-') c = '_';
  return s;
}

struct CellTask {
  std::size_t encoder_idx, ratio_idx, model_idx;
};

}  // namespace

std::string ExperimentReport::to_csv() const {
  std::ostringstream out;
  out << "dataset,model,encoder,ratio,auc,auc100,embedding_params,net_params,train_rows,"
         "epochs_run,best_epoch,seed,config_hash,status\n";
  for (const auto& c : cells) {
    out << c.dataset << ',' << c.model << ',' << c.encoder << ',' << fmt("%g", c.ratio) << ','
        << fmt("%.17g", c.auc) << ',' << fmt("%.2f", c.auc * 100.0) << ',' << c.embedding_params
        << ',' << c.net_params << ',' << c.train_rows << ',' << c.epochs_run << ','
        << c.best_epoch << ',' << c.seed << ',' << config_hash << ',' << c.status << '\n';
  }
  return out.str();
}

std::string ExperimentReport::to_table() const {
  // One block per (dataset, model); encoders down, ratios across, AUC x100 in
  // the cells.
  std::ostringstream out;
  out << "config_hash=" << config_hash << " seed=" << seed << "\n";
  std::map<std::pair<std::string, std::string>, std::vector<const ExperimentCell*>> groups;
  std::vector<double> ratios;
  for (const auto& c : cells) {
    groups[{c.dataset, c.model}].push_back(&c);
    if (std::find(ratios.begin(), ratios.end(), c.ratio) == ratios.end())
      ratios.push_back(c.ratio);
  }
  for (const auto& [key, group] : groups) {
    out << "\n" << key.first << " / " << key.second << "\n";
    int enc_width = 14;
    for (const auto* c : group)
      enc_width = std::max(enc_width, static_cast<int>(c->encoder.size()) + 2);
    char head[64];
    std::snprintf(head, sizeof(head), "%-*s", enc_width, "encoder");
    out << head;
    for (double r : ratios) {
      std::snprintf(head, sizeof(head), "%10s", (fmt("%g", r * 100.0) + "%").c_str());
      out << head;
    }
    out << "    embed/net params\n";
    std::vector<std::string> encoders;
    for (const auto* c : group)
      if (std::find(encoders.begin(), encoders.end(), c->encoder) == encoders.end())
        encoders.push_back(c->encoder);
    for (const auto& enc : encoders) {
      std::snprintf(head, sizeof(head), "%-*s", enc_width, enc.c_str());
      out << head;
      const ExperimentCell* sample = nullptr;
      for (double r : ratios) {
        const ExperimentCell* found = nullptr;
        for (const auto* c : group)
          if (c->encoder == enc && c->ratio == r) found = c;
        if (found && found->status == "ok") {
          std::snprintf(head, sizeof(head), "%10.2f", found->auc * 100.0);
          out << head;
        } else {
          std::snprintf(head, sizeof(head), "%10s", found ? "error" : "-");
          out << head;
        }
        if (found) sample = found;
      }
      if (sample) out << "    " << sample->embedding_params << "/" << sample->net_params;
      out << "\n";
    }
  }
  return out.str();
}

ExperimentReport run_experiment(const ExperimentConfig& cfg, std::vector<CellAudit>* audit) {
  cfg.validate();
  ExperimentReport report;
  report.config_hash = cfg.hash();
  report.seed = cfg.seed;

  NumericDataset data;
  if (cfg.dataset.synthetic.has_value()) {
    data = generate_synthetic(*cfg.dataset.synthetic).data;
    data.name = cfg.dataset.synthetic->name;
  } else {
    data = load_csv(cfg.dataset.path);
    data.name = cfg.dataset.resolve_name();
  }

  // Split once per ratio; the partition shuffle only depends on split.seed,
  // so valid/test rows are identical across ratios.
  std::vector<SplitResult> splits;
  splits.reserve(cfg.ratios.size());
  for (double ratio : cfg.ratios) {
    SplitSpec spec = cfg.split;
    spec.sample_ratio = ratio;
    splits.push_back(split(data, spec));
  }

  std::filesystem::path out_dir;
  if (!cfg.output_dir.empty()) {
    out_dir = cfg.output_dir;
    std::filesystem::create_directories(out_dir);
    std::ofstream(out_dir / "config.json") << cfg.to_json_string() << '\n';
  }

  std::size_t cell_index = 0;
  for (std::size_t ei = 0; ei < cfg.encoders.size(); ++ei) {
    for (std::size_t ri = 0; ri < cfg.ratios.size(); ++ri) {
      const SplitResult& parts = splits[ri];

      // The encoder is fitted on this ratio's training subsample only.
      EncoderSpec spec;
      std::string fit_error;
      try {
        const EncoderConfig& ec = cfg.encoders[ei];
        if (ec.kind == EncoderKind::mgd) {
          MgdConfig mc;
          mc.granularities = ec.granularities;
          mc.strategy = cfg.strategy;
          mc.missing_bin = cfg.missing_bin;
          mc.seed = mix_seed(cfg.seed, 0x36D0 + ri);
          spec = mgd_select(parts.train, parts.valid, mc).spec;
        } else {
          spec = fit_encoder(parts.train, ec.kind, ec.granularity, cfg.strategy, cfg.missing_bin);
        }
      } catch (const Error& e) {
        fit_error = e.what();
      }

      for (std::size_t mi = 0; mi < cfg.models.size(); ++mi, ++cell_index) {
        const ModelConfig& mc = cfg.models[mi];
        ExperimentCell cell;
        cell.dataset = data.name;
        cell.model = mc.kind;
        cell.encoder = cfg.encoders[ei].describe();
        cell.ratio = cfg.ratios[ri];
        cell.train_rows = parts.train.row_count();
        cell.seed = mix_seed(cfg.seed + mc.train.seed, cell_index);
        cell.auc = std::numeric_limits<double>::quiet_NaN();
        if (!fit_error.empty()) {
          cell.status = "error: " + fit_error;
          report.all_ok = false;
          report.cells.push_back(cell);
          continue;
        }
        try {
          EncodedDataset enc_train = encode_dataset(spec, parts.train);
          EncodedDataset enc_valid = encode_dataset(spec, parts.valid);
          EncodedDataset enc_test = encode_dataset(spec, parts.test);
          if (audit) {
            audit->push_back({cell.encoder + "/" + cell.model + "/" + fmt("%g", cell.ratio),
                              enc_train.row_ids, enc_valid.row_ids, enc_test.row_ids});
          }
          TrainConfig tc = mc.train;
          tc.seed = cell.seed;
          std::string artifact;
          if (mc.kind == "lr") {
            auto outcome = train_lr(enc_train, enc_valid, tc);
            if (outcome.stats.degenerate_labels) {
              cell.status = "degenerate-auc";
              report.all_ok = false;
            } else {
              cell.auc = auc(score_lr(outcome.model, enc_test), enc_test.labels);
            }
            cell.embedding_params = spec.parameter_count(1);
            cell.net_params = 1;  // bias
            cell.epochs_run = outcome.stats.epochs_run;
            cell.best_epoch = outcome.stats.best_epoch;
            if (!out_dir.empty()) {
              artifact = "cell" + std::to_string(cell_index) + "_" + sanitize(cell.encoder);
              save_lr(outcome.model, spec.hash(), (out_dir / (artifact + ".model")).string());
            }
          } else {
            auto outcome = train_dnn(enc_train, enc_valid, tc, mc.arch);
            if (outcome.stats.degenerate_labels) {
              cell.status = "degenerate-auc";
              report.all_ok = false;
            } else {
              cell.auc = auc(score_dnn(outcome.model, enc_test), enc_test.labels);
            }
            cell.embedding_params = spec.parameter_count(mc.arch.embedding_dim);
            cell.net_params = outcome.model.net_parameter_count();
            cell.epochs_run = outcome.stats.epochs_run;
            cell.best_epoch = outcome.stats.best_epoch;
            if (!out_dir.empty()) {
              artifact = "cell" + std::to_string(cell_index) + "_" + sanitize(cell.encoder);
              save_dnn(outcome.model, spec.hash(), (out_dir / (artifact + ".model")).string());
            }
          }
          if (!out_dir.empty()) spec.save((out_dir / (artifact + ".encoder.json")).string());
        } catch (const Error& e) {
          cell.status = std::string("error: ") + e.what();
          report.all_ok = false;
        }
        report.cells.push_back(cell);
      }
    }
  }

  if (!out_dir.empty()) {
    std::ofstream(out_dir / "results.csv") << report.to_csv();
    std::ofstream(out_dir / "table.txt") << report.to_table();
  }
  return report;
}

std::vector<ParamRow> param_table(const std::vector<EncoderConfig>& encoders, std::size_t fields,
                                  std::size_t embedding_dim, bool missing_bin) {
  std::vector<ParamRow> rows;
  for (const auto& e : encoders) {
    ParamRow row;
    row.encoder = e.describe();
    row.fields = fields;
    row.embedding_dim = embedding_dim;
    std::size_t missing = missing_bin ? 1 : 0;
    if (e.kind == EncoderKind::cd) {
      row.params = fields * (e.granularity + missing) * embedding_dim;
    } else if (e.kind == EncoderKind::lle) {
      row.params = fields * (e.granularity + 1 + missing) * embedding_dim;
    } else {
      std::size_t per_field = 0;
      for (auto g : e.granularities) per_field += g + missing;
      row.params = fields * per_field * embedding_dim;
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace fdisc
