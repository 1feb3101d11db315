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

// Command-line front end. Talks to the library exclusively through the C API
// in fdisc/fdisc.h.
//
// Exit codes: 0 success, 1 usage/config problem, 2 data error,
//             3 verification campaign found violations.

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <unistd.h>

#include <CLI11.hpp>
#include <json.hpp>

#include "fdisc/fdisc.h"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitViolation = 3;

int exit_code_for(int status) {
  switch (status) {
    case FDISC_OK: return kExitOk;
    case FDISC_ERR_INVALID:
    case FDISC_ERR_CONFIG: return kExitUsage;
    case FDISC_ERR_VIOLATION: return kExitViolation;
    default: return kExitData;
  }
}

[[noreturn]] void die(int status) {
  std::cerr << "fdisc: " << fdisc_last_error() << "\n";
  std::exit(exit_code_for(status));
}

void check(int status) {
  if (status != FDISC_OK) die(status);
}

// Relative dataset paths fall back to $FDISC_DATA_DIR when the file is not
// found where given.
std::string resolve_data_path(const std::string& path) {
  if (std::filesystem::exists(path)) return path;
  const char* dir = std::getenv("FDISC_DATA_DIR");
  if (dir && !path.empty() && path.front() != '/') {
    std::filesystem::path candidate = std::filesystem::path(dir) / path;
    if (std::filesystem::exists(candidate)) return candidate.string();
  }
  return path;
}

struct DatasetHandle {
  fdisc_dataset* ptr = nullptr;
  ~DatasetHandle() { fdisc_dataset_free(ptr); }
};
struct EncoderHandle {
  fdisc_encoder* ptr = nullptr;
  ~EncoderHandle() { fdisc_encoder_free(ptr); }
};
struct EncodedHandle {
  fdisc_encoded* ptr = nullptr;
  ~EncodedHandle() { fdisc_encoded_free(ptr); }
};
struct ModelHandle {
  fdisc_model* ptr = nullptr;
  ~ModelHandle() { fdisc_model_free(ptr); }
};
struct CString {
  char* ptr = nullptr;
  ~CString() { fdisc_string_free(ptr); }
};

// Shared dataset flags: either --data CSV or --synthetic JSON.
struct DataArgs {
  std::string path;
  std::string synthetic;

  void attach(CLI::App* cmd) {
    auto* d = cmd->add_option("--data", path, "CSV file (label first, no header)");
    auto* s = cmd->add_option("--synthetic", synthetic,
                              "synthetic spec JSON, e.g. "
                              "'{\"generator\":\"smooth_nonlinear\",\"fields\":4,\"rows\":10000}'");
    d->excludes(s);
  }

  fdisc_dataset* open() const {
    fdisc_dataset* d = nullptr;
    if (!synthetic.empty()) {
      check(fdisc_dataset_synthetic(synthetic.c_str(), &d));
    } else if (!path.empty()) {
      check(fdisc_dataset_load_csv(resolve_data_path(path).c_str(), &d));
    } else {
      std::cerr << "fdisc: provide --data or --synthetic\n";
      std::exit(kExitUsage);
    }
    return d;
  }
};

std::string encoder_spec_json(const std::string& kind, std::size_t granularity,
                              const std::string& strategy, bool missing_bin) {
  json j = {{"kind", kind}, {"granularity", granularity}, {"strategy", strategy},
            {"missing_bin", missing_bin}};
  return j.dump();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << "fdisc: cannot open '" << path << "'\n";
    std::exit(kExitData);
  }
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) {
    std::cerr << "fdisc: cannot write '" << path << "'\n";
    std::exit(kExitData);
  }
  out << content;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fdisc - feature discretization toolkit"};
  app.require_subcommand(1);

  // --- bin: fit bin boundaries and print/save them --------------------------
  auto* bin_cmd = app.add_subcommand("bin", "fit per-field bin boundaries");
  DataArgs bin_data;
  bin_data.attach(bin_cmd);
  std::size_t bin_k = 10;
  std::string bin_strategy = "equal_frequency";
  std::string bin_out;
  bin_cmd->add_option("-k,--granularity", bin_k, "number of bins per field");
  bin_cmd->add_option("--strategy", bin_strategy, "equal_frequency | equal_width");
  bin_cmd->add_option("-o,--out", bin_out, "output file (default: stdout)");

  // --- encode: turn a dataset into sparse rows -------------------------------
  auto* enc_cmd = app.add_subcommand("encode", "encode a dataset into sparse rows");
  DataArgs enc_data;
  enc_data.attach(enc_cmd);
  std::string enc_kind = "cd";
  std::size_t enc_k = 10;
  std::string enc_strategy = "equal_frequency";
  bool enc_missing = false;
  std::string enc_load, enc_save, enc_out;
  enc_cmd->add_option("--kind", enc_kind, "cd | lle");
  enc_cmd->add_option("-k,--granularity", enc_k, "number of bins per field");
  enc_cmd->add_option("--strategy", enc_strategy, "equal_frequency | equal_width");
  enc_cmd->add_flag("--missing-bin", enc_missing, "reserve a per-field index for NaN");
  enc_cmd->add_option("--encoder", enc_load, "reuse a saved encoder spec instead of fitting");
  enc_cmd->add_option("--save-encoder", enc_save, "persist the fitted encoder spec");
  enc_cmd->add_option("-o,--out", enc_out, "output file (default: stdout)");

  // --- train ------------------------------------------------------------------
  auto* train_cmd = app.add_subcommand("train", "split, encode and train one model");
  DataArgs train_data;
  train_data.attach(train_cmd);
  std::string tr_kind = "lle", tr_strategy = "equal_frequency", tr_model = "lr";
  std::size_t tr_k = 10;
  double tr_train = 0.8, tr_valid = 0.1, tr_test = 0.1, tr_ratio = 1.0;
  std::uint64_t tr_seed = 0;
  std::string tr_train_json, tr_model_out, tr_encoder_out;
  train_cmd->add_option("--kind", tr_kind, "encoder: cd | lle");
  train_cmd->add_option("-k,--granularity", tr_k, "bins per field");
  train_cmd->add_option("--strategy", tr_strategy, "equal_frequency | equal_width");
  train_cmd->add_option("--model", tr_model, "lr | dnn");
  train_cmd->add_option("--train-fraction", tr_train, "");
  train_cmd->add_option("--valid-fraction", tr_valid, "");
  train_cmd->add_option("--test-fraction", tr_test, "");
  train_cmd->add_option("--ratio", tr_ratio, "training subsample ratio in (0,1]");
  train_cmd->add_option("--seed", tr_seed, "master seed");
  train_cmd->add_option("--train-config", tr_train_json,
                        "extra training config JSON (merged over defaults)");
  train_cmd->add_option("--save-model", tr_model_out, "persist the trained model");
  train_cmd->add_option("--save-encoder", tr_encoder_out, "persist the encoder spec");

  // --- experiment ---------------------------------------------------------------
  auto* exp_cmd = app.add_subcommand("experiment", "run a full grid from a config file");
  std::string exp_config;
  std::string exp_output;
  std::int64_t exp_seed = -1;
  exp_cmd->add_option("-c,--config", exp_config, "fdisc-experiment JSON file")->required();
  exp_cmd->add_option("--output-dir", exp_output, "override the config's output_dir");
  exp_cmd->add_option("--seed", exp_seed, "override the config's master seed");

  // --- simulate -------------------------------------------------------------------
  auto* sim_cmd = app.add_subcommand("simulate", "run the bin-quality verification campaign");
  std::string sim_config, sim_csv;
  std::int64_t sim_seed = -1, sim_trials = -1;
  sim_cmd->add_option("-c,--config", sim_config, "fdisc-simulate JSON file (default campaign if omitted)");
  sim_cmd->add_option("--csv", sim_csv, "write the full CSV report here");
  sim_cmd->add_option("--seed", sim_seed, "override the campaign seed");
  sim_cmd->add_option("--trials", sim_trials, "override the Monte-Carlo trial count");

  // --- params ------------------------------------------------------------------------
  auto* par_cmd = app.add_subcommand("params", "embedding-parameter totals per encoder");
  std::size_t par_fields = 1, par_dim = 1, par_k = 10;
  bool par_missing = false;
  std::string par_encoder = "lle";
  std::vector<std::uint32_t> par_granularities;
  par_cmd->add_option("--fields", par_fields, "number of numeric fields")->required();
  par_cmd->add_option("--dim", par_dim, "embedding dimension");
  par_cmd->add_option("--encoder", par_encoder, "cd | lle | mgd");
  par_cmd->add_option("-k,--granularity", par_k, "bins per field (cd/lle)");
  par_cmd->add_option("--granularities", par_granularities, "mgd granularity set")
      ->delimiter(',');
  par_cmd->add_flag("--missing-bin", par_missing, "count per-field missing indices");

  CLI11_PARSE(app, argc, argv);

  if (bin_cmd->parsed()) {
    DatasetHandle data{bin_data.open()};
    EncoderHandle enc;
    check(fdisc_encoder_fit(data.ptr, encoder_spec_json("cd", bin_k, bin_strategy, false).c_str(),
                            &enc.ptr));
    CString text;
    check(fdisc_encoder_binspec_text(enc.ptr, &text.ptr));
    if (bin_out.empty())
      std::cout << text.ptr;
    else
      write_file(bin_out, text.ptr);
    return kExitOk;
  }

  if (enc_cmd->parsed()) {
    DatasetHandle data{enc_data.open()};
    EncoderHandle enc;
    if (!enc_load.empty()) {
      check(fdisc_encoder_load(enc_load.c_str(), &enc.ptr));
    } else {
      check(fdisc_encoder_fit(data.ptr,
                              encoder_spec_json(enc_kind, enc_k, enc_strategy, enc_missing).c_str(),
                              &enc.ptr));
    }
    if (!enc_save.empty()) check(fdisc_encoder_save(enc.ptr, enc_save.c_str()));
    EncodedHandle rows;
    check(fdisc_encoder_encode(enc.ptr, data.ptr, &rows.ptr));
    std::string out_path = enc_out;
    if (out_path.empty()) {
      out_path = std::filesystem::temp_directory_path() /
                 ("fdisc_encode_" + std::to_string(::getpid()) + ".tmp");
      check(fdisc_encoded_dump(rows.ptr, out_path.c_str()));
      std::cout << read_file(out_path);
      std::filesystem::remove(out_path);
    } else {
      check(fdisc_encoded_dump(rows.ptr, out_path.c_str()));
    }
    return kExitOk;
  }

  if (train_cmd->parsed()) {
    DatasetHandle data{train_data.open()};
    json split_j = {{"train", tr_train}, {"valid", tr_valid}, {"test", tr_test},
                    {"ratio", tr_ratio}, {"seed", tr_seed}};
    DatasetHandle train, valid, test;
    check(fdisc_dataset_split(data.ptr, split_j.dump().c_str(), &train.ptr, &valid.ptr,
                              &test.ptr));
    EncoderHandle enc;
    check(fdisc_encoder_fit(train.ptr,
                            encoder_spec_json(tr_kind, tr_k, tr_strategy, false).c_str(),
                            &enc.ptr));
    EncodedHandle enc_train, enc_valid, enc_test;
    check(fdisc_encoder_encode(enc.ptr, train.ptr, &enc_train.ptr));
    check(fdisc_encoder_encode(enc.ptr, valid.ptr, &enc_valid.ptr));
    check(fdisc_encoder_encode(enc.ptr, test.ptr, &enc_test.ptr));

    json train_j = json::parse(tr_train_json.empty() ? "{}" : tr_train_json, nullptr, false);
    if (train_j.is_discarded() || !train_j.is_object()) {
      std::cerr << "fdisc: --train-config is not a JSON object\n";
      return kExitUsage;
    }
    train_j["kind"] = tr_model;
    if (!train_j.contains("seed")) train_j["seed"] = tr_seed;
    ModelHandle model;
    check(fdisc_train(enc_train.ptr, enc_valid.ptr, train_j.dump().c_str(), &model.ptr));

    double valid_auc = 0.0, test_auc = 0.0;
    check(fdisc_model_auc(model.ptr, enc_valid.ptr, &valid_auc));
    check(fdisc_model_auc(model.ptr, enc_test.ptr, &test_auc));
    std::printf("valid_auc100 %.2f\ntest_auc100 %.2f\n", valid_auc * 100.0, test_auc * 100.0);

    if (!tr_model_out.empty()) check(fdisc_model_save(model.ptr, tr_model_out.c_str()));
    if (!tr_encoder_out.empty()) check(fdisc_encoder_save(enc.ptr, tr_encoder_out.c_str()));
    return kExitOk;
  }

  if (exp_cmd->parsed()) {
    json cfg = json::parse(read_file(exp_config), nullptr, false);
    if (cfg.is_discarded()) {
      std::cerr << "fdisc: '" << exp_config << "' is not valid JSON\n";
      return kExitUsage;
    }
    if (!exp_output.empty()) cfg["output_dir"] = exp_output;
    if (exp_seed >= 0) cfg["seed"] = static_cast<std::uint64_t>(exp_seed);
    if (cfg.contains("dataset") && cfg["dataset"].contains("path"))
      cfg["dataset"]["path"] = resolve_data_path(cfg["dataset"]["path"].get<std::string>());
    CString csv, table;
    int status = fdisc_experiment_run(cfg.dump().c_str(), &csv.ptr, &table.ptr);
    if (table.ptr) std::cout << table.ptr;
    if (status != FDISC_OK && !table.ptr) die(status);
    if (status != FDISC_OK) {
      std::cerr << "fdisc: " << fdisc_last_error() << "\n";
      return exit_code_for(status);
    }
    return kExitOk;
  }

  if (sim_cmd->parsed()) {
    json cfg;
    if (!sim_config.empty()) {
      cfg = json::parse(read_file(sim_config), nullptr, false);
      if (cfg.is_discarded()) {
        std::cerr << "fdisc: '" << sim_config << "' is not valid JSON\n";
        return kExitUsage;
      }
    } else {
      cfg = {{"format", "fdisc-simulate"}, {"version", 1}};
    }
    if (sim_seed >= 0) cfg["seed"] = static_cast<std::uint64_t>(sim_seed);
    if (sim_trials >= 0) cfg["trials"] = static_cast<std::uint64_t>(sim_trials);
    CString csv, summary;
    size_t violations = 0;
    int status = fdisc_simulate_run(cfg.dump().c_str(), &csv.ptr, &summary.ptr, &violations);
    if (summary.ptr) std::cout << summary.ptr;
    if (!sim_csv.empty() && csv.ptr) write_file(sim_csv, csv.ptr);
    if (status != FDISC_OK && status != FDISC_ERR_VIOLATION) die(status);
    return violations == 0 ? kExitOk : kExitViolation;
  }

  if (par_cmd->parsed()) {
    json spec;
    spec["fields"] = par_fields;
    spec["embedding_dim"] = par_dim;
    spec["missing_bin"] = par_missing;
    json enc;
    enc["kind"] = par_encoder;
    if (par_encoder == "mgd")
      enc["granularities"] = par_granularities;
    else
      enc["granularity"] = par_k;
    spec["encoders"] = json::array({enc});
    CString csv;
    check(fdisc_params_table(spec.dump().c_str(), &csv.ptr));
    std::cout << csv.ptr;
    return kExitOk;
  }

  return kExitUsage;
}
