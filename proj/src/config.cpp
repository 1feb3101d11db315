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

#include "fdisc/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace fdisc {

using nlohmann::json;

std::string DatasetSource::resolve_name() const {
  if (synthetic.has_value()) return synthetic->name;
  auto slash = path.find_last_of('/');
  std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
  auto dot = base.find_last_of('.');
  return dot == std::string::npos ? base : base.substr(0, dot);
}

std::string EncoderConfig::describe() const {
  if (kind == EncoderKind::mgd) {
    std::ostringstream out;
    out << "mgd{";
    for (std::size_t i = 0; i < granularities.size(); ++i)
      out << (i ? "," : "") << granularities[i];
    out << "}";
    return out.str();
  }
  return std::string(to_string(kind)) + "(" + std::to_string(granularity) + ")";
}

void ExperimentConfig::validate() const {
  if (dataset.path.empty() && !dataset.synthetic.has_value())
    fail(errc::config, "experiment needs a dataset path or a synthetic spec");
  if (!dataset.path.empty() && dataset.synthetic.has_value())
    fail(errc::config, "dataset path and synthetic spec are mutually exclusive");
  if (dataset.synthetic.has_value()) dataset.synthetic->validate();
  if (encoders.empty()) fail(errc::config, "experiment needs at least one encoder");
  if (models.empty()) fail(errc::config, "experiment needs at least one model");
  if (ratios.empty()) fail(errc::config, "experiment needs at least one sampling ratio");
  for (double r : ratios)
    if (!(r > 0.0) || r > 1.0) fail(errc::config, "ratios must be in (0, 1]");
  for (const auto& m : models) {
    if (m.kind != "lr" && m.kind != "dnn") fail(errc::config, "model kind must be lr or dnn");
    m.train.validate();
  }
  for (const auto& e : encoders) {
    if (e.kind == EncoderKind::mgd) {
      if (e.granularities.empty()) fail(errc::config, "mgd encoder needs granularities");
    } else if (e.granularity == 0) {
      fail(errc::config, "encoder granularity must be >= 1");
    }
  }
  SplitSpec probe = split;
  probe.sample_ratio = 1.0;
  probe.validate();
}

namespace {

json synthetic_to_json(const SyntheticSpec& s) {
  return {{"generator", to_string(s.generator)}, {"fields", s.field_count},
          {"rows", s.row_count},                 {"sigma", s.noise_sigma},
          {"seed", s.seed},                      {"name", s.name}};
}

SyntheticSpec synthetic_from_json(const json& j) {
  SyntheticSpec s;
  s.generator = synthetic_generator_from_string(j.at("generator").get<std::string>());
  s.field_count = j.at("fields").get<std::size_t>();
  s.row_count = j.at("rows").get<std::size_t>();
  s.noise_sigma = j.value("sigma", 0.0);
  s.seed = j.value("seed", std::uint64_t{0});
  s.name = j.value("name", std::string("synthetic"));
  return s;
}

json train_to_json(const TrainConfig& t) {
  return {{"optimizer", to_string(t.optimizer)},
          {"learning_rate", t.learning_rate},
          {"epochs", t.epochs},
          {"batch_size", t.batch_size},
          {"l2", t.l2},
          {"seed", t.seed},
          {"patience", t.patience}};
}

TrainConfig train_from_json(const json& j) {
  TrainConfig t;
  t.optimizer = optimizer_from_string(j.value("optimizer", std::string("adagrad")));
  t.learning_rate = j.value("learning_rate", 0.1);
  t.epochs = j.value("epochs", std::size_t{10});
  t.batch_size = j.value("batch_size", std::size_t{256});
  t.l2 = j.value("l2", 0.0);
  t.seed = j.value("seed", std::uint64_t{0});
  t.patience = j.value("patience", std::size_t{3});
  return t;
}

}  // namespace

std::string ExperimentConfig::to_json_string() const {
  json j;
  j["format"] = "fdisc-experiment";
  j["version"] = 1;
  j["name"] = name;
  j["seed"] = seed;
  if (!dataset.path.empty()) j["dataset"]["path"] = dataset.path;
  if (dataset.synthetic.has_value())
    j["dataset"]["synthetic"] = synthetic_to_json(*dataset.synthetic);
  j["split"] = {{"train", split.train_fraction},
                {"valid", split.valid_fraction},
                {"test", split.test_fraction},
                {"seed", split.seed}};
  j["ratios"] = ratios;
  j["strategy"] = to_string(strategy);
  j["missing_bin"] = missing_bin;
  j["encoders"] = json::array();
  for (const auto& e : encoders) {
    json ej;
    ej["kind"] = to_string(e.kind);
    if (e.kind == EncoderKind::mgd)
      ej["granularities"] = e.granularities;
    else
      ej["granularity"] = e.granularity;
    j["encoders"].push_back(ej);
  }
  j["models"] = json::array();
  for (const auto& m : models) {
    json mj;
    mj["kind"] = m.kind;
    mj["train"] = train_to_json(m.train);
    if (m.kind == "dnn") {
      mj["embedding_dim"] = m.arch.embedding_dim;
      mj["hidden"] = m.arch.hidden;
    }
    j["models"].push_back(mj);
  }
  j["output_dir"] = output_dir;
  return j.dump(2);
}

ExperimentConfig ExperimentConfig::from_json_string(const std::string& text) try {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded() || j.value("format", "") != "fdisc-experiment" || j.value("version", 0) != 1)
    fail(errc::parse, "not a fdisc-experiment v1 document");
  ExperimentConfig cfg;
  cfg.name = j.value("name", std::string("experiment"));
  cfg.seed = j.value("seed", std::uint64_t{0});
  if (j.contains("dataset")) {
    const auto& dj = j["dataset"];
    cfg.dataset.path = dj.value("path", std::string{});
    if (dj.contains("synthetic")) cfg.dataset.synthetic = synthetic_from_json(dj["synthetic"]);
  }
  if (j.contains("split")) {
    const auto& sj = j["split"];
    cfg.split.train_fraction = sj.value("train", 0.8);
    cfg.split.valid_fraction = sj.value("valid", 0.1);
    cfg.split.test_fraction = sj.value("test", 0.1);
    cfg.split.seed = sj.value("seed", std::uint64_t{0});
  }
  cfg.ratios = j.value("ratios", std::vector<double>{1.0});
  cfg.strategy = bin_strategy_from_string(j.value("strategy", std::string("equal_frequency")));
  cfg.missing_bin = j.value("missing_bin", false);
  for (const auto& ej : j.value("encoders", json::array())) {
    EncoderConfig e;
    e.kind = encoder_kind_from_string(ej.at("kind").get<std::string>());
    if (e.kind == EncoderKind::mgd)
      e.granularities = ej.value("granularities", std::vector<std::uint32_t>{});
    else
      e.granularity = ej.value("granularity", std::size_t{10});
    cfg.encoders.push_back(e);
  }
  for (const auto& mj : j.value("models", json::array())) {
    ModelConfig m;
    m.kind = mj.value("kind", std::string("lr"));
    if (mj.contains("train")) m.train = train_from_json(mj["train"]);
    if (m.kind == "dnn") {
      m.arch.embedding_dim = mj.value("embedding_dim", std::size_t{10});
      m.arch.hidden = mj.value("hidden", std::vector<std::size_t>{64, 32});
    }
    cfg.models.push_back(m);
  }
  cfg.output_dir = j.value("output_dir", std::string{});
  return cfg;
} catch (const json::exception& e) {
  fail(errc::parse, std::string("experiment config: ") + e.what());
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(errc::io, "cannot open '" + path + "'");
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return from_json_string(text);
}

std::uint64_t ExperimentConfig::hash() const {
  // The hash identifies the experiment's content; where results are written
  // is not part of it.
  ExperimentConfig canon_cfg = *this;
  canon_cfg.output_dir.clear();
  std::string canon = canon_cfg.to_json_string();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canon) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

void SimulateConfig::validate() const {
  if (trials < 2) fail(errc::config, "trials must be >= 2");
  if (k_small == 0) fail(errc::config, "k_small must be >= 1");
  if (samples_per_field < 2 * k_small)
    fail(errc::config, "samples_per_field too small for the requested bins");
  if (robustness_sizes.empty() || robustness_sigmas.empty())
    fail(errc::config, "robustness grid must not be empty");
  for (auto n : robustness_sizes)
    if (n < 2) fail(errc::config, "robustness bin sizes must be >= 2");
  if (!(bin_span_lo < bin_span_hi)) fail(errc::config, "bin span must be a nonempty interval");
}

std::string SimulateConfig::to_json_string() const {
  json j;
  j["format"] = "fdisc-simulate";
  j["version"] = 1;
  j["seed"] = seed;
  j["trials"] = trials;
  j["split_fields"] = split_fields;
  j["samples_per_field"] = samples_per_field;
  j["k_small"] = k_small;
  j["dominance_bins"] = dominance_bins;
  j["affine_bins"] = affine_bins;
  j["robustness_sizes"] = robustness_sizes;
  j["robustness_sigmas"] = robustness_sigmas;
  j["bin_span"] = {bin_span_lo, bin_span_hi};
  j["zero_noise_checks"] = zero_noise_checks;
  return j.dump(2);
}

SimulateConfig SimulateConfig::from_json_string(const std::string& text) try {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded() || j.value("format", "") != "fdisc-simulate" || j.value("version", 0) != 1)
    fail(errc::parse, "not a fdisc-simulate v1 document");
  SimulateConfig cfg;
  cfg.seed = j.value("seed", cfg.seed);
  cfg.trials = j.value("trials", cfg.trials);
  cfg.split_fields = j.value("split_fields", cfg.split_fields);
  cfg.samples_per_field = j.value("samples_per_field", cfg.samples_per_field);
  cfg.k_small = j.value("k_small", cfg.k_small);
  cfg.dominance_bins = j.value("dominance_bins", cfg.dominance_bins);
  cfg.affine_bins = j.value("affine_bins", cfg.affine_bins);
  cfg.robustness_sizes = j.value("robustness_sizes", cfg.robustness_sizes);
  cfg.robustness_sigmas = j.value("robustness_sigmas", cfg.robustness_sigmas);
  if (j.contains("bin_span")) {
    cfg.bin_span_lo = j["bin_span"].at(0).get<double>();
    cfg.bin_span_hi = j["bin_span"].at(1).get<double>();
  }
  cfg.zero_noise_checks = j.value("zero_noise_checks", true);
  return cfg;
} catch (const json::exception& e) {
  fail(errc::parse, std::string("simulate config: ") + e.what());
}

SimulateConfig SimulateConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(errc::io, "cannot open '" + path + "'");
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return from_json_string(text);
}

}  // namespace fdisc
