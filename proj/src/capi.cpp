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

#include "fdisc/fdisc.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "fdisc/dataset.hpp"
#include "fdisc/encoding.hpp"
#include "fdisc/experiment.hpp"
#include "fdisc/mgd.hpp"
#include "fdisc/model.hpp"
#include "fdisc/simulate.hpp"

using nlohmann::json;

struct fdisc_dataset {
  fdisc::NumericDataset data;
};
struct fdisc_encoder {
  fdisc::EncoderSpec spec;
};
struct fdisc_encoded {
  fdisc::EncodedDataset data;
};
struct fdisc_model {
  // exactly one of the two is in use
  bool is_lr = true;
  fdisc::LrModel lr;
  fdisc::DnnModel dnn;
  std::uint64_t encoder_hash = 0;
};

namespace {

thread_local std::string g_last_error;

int code_of(fdisc::errc c) {
  switch (c) {
    case fdisc::errc::parse: return FDISC_ERR_PARSE;
    case fdisc::errc::structure: return FDISC_ERR_STRUCTURE;
    case fdisc::errc::config: return FDISC_ERR_CONFIG;
    case fdisc::errc::degenerate: return FDISC_ERR_DEGENERATE;
    case fdisc::errc::io: return FDISC_ERR_IO;
    case fdisc::errc::mismatch: return FDISC_ERR_MISMATCH;
    case fdisc::errc::violation: return FDISC_ERR_VIOLATION;
  }
  return FDISC_ERR_INTERNAL;
}

template <class Fn>
int guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const fdisc::Error& e) {
    g_last_error = e.what();
    return code_of(e.code());
  } catch (const json::exception& e) {
    g_last_error = e.what();
    return FDISC_ERR_PARSE;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return FDISC_ERR_INTERNAL;
  }
}

int invalid(const char* msg) {
  g_last_error = msg;
  return FDISC_ERR_INVALID;
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

json parse_json(const char* text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) fdisc::fail(fdisc::errc::parse, "malformed JSON document");
  return j;
}

}  // namespace

extern "C" {

const char* fdisc_version(void) { return "1.0.0"; }

const char* fdisc_last_error(void) { return g_last_error.c_str(); }

int fdisc_dataset_load_csv(const char* path, fdisc_dataset** out) {
  if (!path || !out) return invalid("null argument");
  return guarded([&] {
    auto* d = new fdisc_dataset{fdisc::load_csv(path)};
    *out = d;
    return FDISC_OK;
  });
}

int fdisc_dataset_synthetic(const char* spec_json, fdisc_dataset** out) {
  if (!spec_json || !out) return invalid("null argument");
  return guarded([&] {
    json j = parse_json(spec_json);
    fdisc::SyntheticSpec spec;
    spec.generator = fdisc::synthetic_generator_from_string(
        j.value("generator", std::string("smooth_nonlinear")));
    spec.field_count = j.value("fields", std::size_t{4});
    spec.row_count = j.value("rows", std::size_t{1000});
    spec.noise_sigma = j.value("sigma", 0.0);
    spec.seed = j.value("seed", std::uint64_t{0});
    spec.name = j.value("name", std::string("synthetic"));
    *out = new fdisc_dataset{fdisc::generate_synthetic(spec).data};
    return FDISC_OK;
  });
}

int fdisc_dataset_rows(const fdisc_dataset* d, size_t* out) {
  if (!d || !out) return invalid("null argument");
  *out = d->data.row_count();
  return FDISC_OK;
}

int fdisc_dataset_fields(const fdisc_dataset* d, size_t* out) {
  if (!d || !out) return invalid("null argument");
  *out = d->data.field_count;
  return FDISC_OK;
}

int fdisc_dataset_split(const fdisc_dataset* d, const char* spec_json, fdisc_dataset** train,
                        fdisc_dataset** valid, fdisc_dataset** test) {
  if (!d || !spec_json || !train || !valid || !test) return invalid("null argument");
  return guarded([&] {
    json j = parse_json(spec_json);
    fdisc::SplitSpec spec;
    spec.train_fraction = j.value("train", 0.8);
    spec.valid_fraction = j.value("valid", 0.1);
    spec.test_fraction = j.value("test", 0.1);
    spec.sample_ratio = j.value("ratio", 1.0);
    spec.seed = j.value("seed", std::uint64_t{0});
    auto parts = fdisc::split(d->data, spec);
    *train = new fdisc_dataset{std::move(parts.train)};
    *valid = new fdisc_dataset{std::move(parts.valid)};
    *test = new fdisc_dataset{std::move(parts.test)};
    return FDISC_OK;
  });
}

void fdisc_dataset_free(fdisc_dataset* d) { delete d; }

int fdisc_encoder_fit(const fdisc_dataset* train, const char* spec_json, fdisc_encoder** out) {
  if (!train || !spec_json || !out) return invalid("null argument");
  return guarded([&] {
    json j = parse_json(spec_json);
    auto kind = fdisc::encoder_kind_from_string(j.value("kind", std::string("cd")));
    auto strategy =
        fdisc::bin_strategy_from_string(j.value("strategy", std::string("equal_frequency")));
    auto spec = fdisc::fit_encoder(train->data, kind, j.value("granularity", std::size_t{10}),
                                   strategy, j.value("missing_bin", false));
    *out = new fdisc_encoder{std::move(spec)};
    return FDISC_OK;
  });
}

int fdisc_encoder_fit_mgd(const fdisc_dataset* train, const fdisc_dataset* valid,
                          const char* spec_json, fdisc_encoder** out) {
  if (!train || !valid || !spec_json || !out) return invalid("null argument");
  return guarded([&] {
    json j = parse_json(spec_json);
    fdisc::MgdConfig cfg;
    if (j.contains("granularities"))
      cfg.granularities = j["granularities"].get<std::vector<std::uint32_t>>();
    cfg.strategy =
        fdisc::bin_strategy_from_string(j.value("strategy", std::string("equal_frequency")));
    cfg.missing_bin = j.value("missing_bin", false);
    cfg.seed = j.value("seed", std::uint64_t{0});
    auto sel = fdisc::mgd_select(train->data, valid->data, cfg);
    *out = new fdisc_encoder{std::move(sel.spec)};
    return FDISC_OK;
  });
}

int fdisc_encoder_save(const fdisc_encoder* e, const char* path) {
  if (!e || !path) return invalid("null argument");
  return guarded([&] {
    e->spec.save(path);
    return FDISC_OK;
  });
}

int fdisc_encoder_load(const char* path, fdisc_encoder** out) {
  if (!path || !out) return invalid("null argument");
  return guarded([&] {
    *out = new fdisc_encoder{fdisc::EncoderSpec::load(path)};
    return FDISC_OK;
  });
}

int fdisc_encoder_params(const fdisc_encoder* e, size_t embedding_dim, size_t* out) {
  if (!e || !out || embedding_dim == 0) return invalid("bad argument");
  *out = e->spec.parameter_count(embedding_dim);
  return FDISC_OK;
}

int fdisc_encoder_binspec_text(const fdisc_encoder* e, char** out) {
  if (!e || !out) return invalid("null argument");
  return guarded([&] {
    *out = dup_string(fdisc::binspecs_to_text(e->spec.binspecs));
    return FDISC_OK;
  });
}

int fdisc_encoder_encode(const fdisc_encoder* e, const fdisc_dataset* d, fdisc_encoded** out) {
  if (!e || !d || !out) return invalid("null argument");
  return guarded([&] {
    *out = new fdisc_encoded{fdisc::encode_dataset(e->spec, d->data)};
    return FDISC_OK;
  });
}

void fdisc_encoder_free(fdisc_encoder* e) { delete e; }

int fdisc_encoded_dump(const fdisc_encoded* e, const char* path) {
  if (!e || !path) return invalid("null argument");
  return guarded([&] {
    std::ofstream out(path);
    if (!out) fdisc::fail(fdisc::errc::io, std::string("cannot write '") + path + "'");
    fdisc::dump_encoded(e->data, out);
    return FDISC_OK;
  });
}

void fdisc_encoded_free(fdisc_encoded* e) { delete e; }

int fdisc_train(const fdisc_encoded* train, const fdisc_encoded* valid, const char* spec_json,
                fdisc_model** out) {
  if (!train || !valid || !spec_json || !out) return invalid("null argument");
  return guarded([&] {
    json j = parse_json(spec_json);
    fdisc::TrainConfig cfg;
    cfg.optimizer = fdisc::optimizer_from_string(j.value("optimizer", std::string("adagrad")));
    cfg.learning_rate = j.value("learning_rate", 0.1);
    cfg.epochs = j.value("epochs", std::size_t{10});
    cfg.batch_size = j.value("batch_size", std::size_t{256});
    cfg.l2 = j.value("l2", 0.0);
    cfg.seed = j.value("seed", std::uint64_t{0});
    cfg.patience = j.value("patience", std::size_t{3});
    std::string kind = j.value("kind", std::string("lr"));
    auto* m = new fdisc_model;
    m->encoder_hash = train->data.encoder_hash;
    if (kind == "lr") {
      m->is_lr = true;
      m->lr = fdisc::train_lr(train->data, valid->data, cfg).model;
    } else if (kind == "dnn") {
      m->is_lr = false;
      fdisc::DnnArch arch;
      arch.embedding_dim = j.value("embedding_dim", std::size_t{10});
      arch.hidden = j.value("hidden", std::vector<std::size_t>{64, 32});
      m->dnn = fdisc::train_dnn(train->data, valid->data, cfg, arch).model;
    } else {
      delete m;
      fdisc::fail(fdisc::errc::config, "model kind must be lr or dnn");
    }
    *out = m;
    return FDISC_OK;
  });
}

int fdisc_model_auc(const fdisc_model* m, const fdisc_encoded* data, double* auc_out) {
  if (!m || !data || !auc_out) return invalid("null argument");
  return guarded([&] {
    if (m->encoder_hash != 0 && data->data.encoder_hash != 0 &&
        m->encoder_hash != data->data.encoder_hash)
      fdisc::fail(fdisc::errc::mismatch, "data was encoded under a different encoder spec");
    auto scores = m->is_lr ? fdisc::score_lr(m->lr, data->data)
                           : fdisc::score_dnn(m->dnn, data->data);
    *auc_out = fdisc::auc(scores, data->data.labels);
    return FDISC_OK;
  });
}

int fdisc_model_save(const fdisc_model* m, const char* path) {
  if (!m || !path) return invalid("null argument");
  return guarded([&] {
    if (m->is_lr)
      fdisc::save_lr(m->lr, m->encoder_hash, path);
    else
      fdisc::save_dnn(m->dnn, m->encoder_hash, path);
    return FDISC_OK;
  });
}

int fdisc_model_load(const char* path, uint64_t expected_encoder_hash, fdisc_model** out) {
  if (!path || !out) return invalid("null argument");
  return guarded([&] {
    // Peek at the kind field of the header.
    std::ifstream in(path);
    if (!in) fdisc::fail(fdisc::errc::io, std::string("cannot open '") + path + "'");
    std::string magic, kind;
    int version = 0;
    in >> magic >> version >> kind;
    in.close();
    auto* m = new fdisc_model;
    m->encoder_hash = expected_encoder_hash;
    if (kind == "lr") {
      m->is_lr = true;
      m->lr = fdisc::load_lr(path, expected_encoder_hash);
    } else {
      m->is_lr = false;
      m->dnn = fdisc::load_dnn(path, expected_encoder_hash);
    }
    *out = m;
    return FDISC_OK;
  });
}

void fdisc_model_free(fdisc_model* m) { delete m; }

int fdisc_experiment_run(const char* config_json, char** csv_out, char** table_out) {
  if (!config_json) return invalid("null argument");
  return guarded([&] {
    auto cfg = fdisc::ExperimentConfig::from_json_string(config_json);
    auto report = fdisc::run_experiment(cfg);
    if (csv_out) *csv_out = dup_string(report.to_csv());
    if (table_out) *table_out = dup_string(report.to_table());
    if (!report.all_ok) {
      g_last_error = "one or more grid cells failed; see the status column";
      return FDISC_ERR_DEGENERATE;
    }
    return FDISC_OK;
  });
}

int fdisc_simulate_run(const char* config_json, char** csv_out, char** summary_out,
                       size_t* violations_out) {
  return guarded([&] {
    fdisc::SimulateConfig cfg;
    if (config_json) cfg = fdisc::SimulateConfig::from_json_string(config_json);
    auto report = fdisc::run_simulate(cfg);
    if (csv_out) *csv_out = dup_string(report.to_csv());
    if (summary_out) *summary_out = dup_string(report.summary());
    if (violations_out) *violations_out = report.violations;
    if (report.violations > 0) {
      g_last_error = "simulation campaign found " + std::to_string(report.violations) +
                     " violated checks";
      return FDISC_ERR_VIOLATION;
    }
    return FDISC_OK;
  });
}

int fdisc_params_table(const char* config_json, char** csv_out) {
  if (!config_json || !csv_out) return invalid("null argument");
  return guarded([&] {
    json j = parse_json(config_json);
    std::vector<fdisc::EncoderConfig> encoders;
    for (const auto& ej : j.value("encoders", json::array())) {
      fdisc::EncoderConfig e;
      e.kind = fdisc::encoder_kind_from_string(ej.at("kind").get<std::string>());
      if (e.kind == fdisc::EncoderKind::mgd)
        e.granularities = ej.value("granularities", std::vector<std::uint32_t>{});
      else
        e.granularity = ej.value("granularity", std::size_t{10});
      encoders.push_back(e);
    }
    auto rows = fdisc::param_table(encoders, j.value("fields", std::size_t{1}),
                                   j.value("embedding_dim", std::size_t{1}),
                                   j.value("missing_bin", false));
    std::ostringstream out;
    out << "encoder,fields,embedding_dim,params\n";
    for (const auto& r : rows)
      out << r.encoder << ',' << r.fields << ',' << r.embedding_dim << ',' << r.params << '\n';
    *csv_out = dup_string(out.str());
    return FDISC_OK;
  });
}

void fdisc_string_free(char* s) { std::free(s); }

}  // extern "C"
