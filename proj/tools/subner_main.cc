// Copyright (c) 2026 The subner Authors
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

// subner command-line tool: train | tag | eval | ablate | vocab-stats.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "subner/subner.h"

namespace {

constexpr int kExitUsage = SUBNER_ERR_USAGE;

// Thrown to unwind with a C API status.
struct ApiFailure {
  subner_status status;
};

void check(subner_status s) {
  if (s != SUBNER_OK) throw ApiFailure{s};
}

std::string take(char* s) {
  std::string out(s ? s : "");
  subner_string_free(s);
  return out;
}

// Config flags shared by train, ablate and vocab-stats.
struct ConfigFlags {
  std::string config_path;
  std::vector<std::string> sets;
  std::optional<std::string> seed, units, epochs, batch_size, lr, dropout;
  bool word_embeddings = false;
  bool no_word_embeddings = false;

  void add(CLI::App* app, bool with_units) {
    app->add_option("--config", config_path, "Config file (key = value)");
    app->add_option("--set", sets,
                    "Override one config key, key=value (repeatable)");
    app->add_option("--seed", seed, "Random seed");
    if (with_units) {
      app->add_option("--units", units,
                      "Subword units, e.g. char,phoneme,byte or none");
    }
    app->add_option("--epochs", epochs, "Number of training epochs");
    app->add_option("--batch-size", batch_size, "Utterances per batch");
    app->add_option("--lr", lr, "Adam learning rate");
    app->add_option("--dropout", dropout, "Dropout rate on token embeddings");
    auto* on = app->add_flag("--word-embeddings", word_embeddings,
                             "Enable word-level embeddings");
    app->add_flag("--no-word-embeddings", no_word_embeddings,
                  "Disable word-level embeddings")
        ->excludes(on);
  }

  // defaults < --config < --set < dedicated flags
  subner_config* build() const {
    subner_config* c = nullptr;
    if (config_path.empty()) {
      check(subner_config_new(&c));
    } else {
      check(subner_config_load(config_path.c_str(), &c));
    }
    auto set = [&](const std::string& k, const std::string& v) {
      subner_status s = subner_config_set(c, k.c_str(), v.c_str());
      if (s != SUBNER_OK) {
        subner_config_free(c);
        throw ApiFailure{s};
      }
    };
    for (const auto& kv : sets) {
      const size_t eq = kv.find('=');
      if (eq == std::string::npos) {
        subner_config_free(c);
        throw CLI::ValidationError("--set", "expected key=value, got '" + kv + "'");
      }
      set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (seed) set("seed", *seed);
    if (units) set("units", *units);
    if (epochs) set("max_epochs", *epochs);
    if (batch_size) set("batch_size", *batch_size);
    if (lr) set("learning_rate", *lr);
    if (dropout) set("dropout_rate", *dropout);
    if (word_embeddings) set("word_embeddings", "true");
    if (no_word_embeddings) set("word_embeddings", "false");
    return c;
  }
};

struct ConfigHandle {
  subner_config* c;
  ~ConfigHandle() { subner_config_free(c); }
};

struct ModelHandle {
  subner_model* m = nullptr;
  ~ModelHandle() { subner_model_free(m); }
};

void write_output(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  out << text;
  if (!out) {
    std::cerr << "subner: cannot write " << path << '\n';
    throw ApiFailure{SUBNER_ERR_DATA};
  }
}

const char* opt(const std::string& s) { return s.empty() ? nullptr : s.c_str(); }

struct LogSink {
  std::ofstream file;
};

void log_line(const char* kind, const char* line, void* user) {
  auto* sink = static_cast<LogSink*>(user);
  if (std::string(kind) == "warning") {
    std::cerr << "warning: " << line << '\n';
    return;
  }
  std::cout << line << '\n' << std::flush;
  if (sink->file.is_open()) sink->file << line << '\n' << std::flush;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "subner: named entity tagger built on character, phoneme and byte "
      "embeddings.\nConfig precedence: built-in defaults < --config file < "
      "--set key=value < dedicated flags."};
  app.require_subcommand(1);
  app.set_version_flag("--version", subner_version());

  // train
  auto* train_cmd = app.add_subcommand("train", "Train a model and write it");
  ConfigFlags train_cfg;
  train_cfg.add(train_cmd, true);
  std::string train_path, dev_path, lexicon_path, vectors_path, model_out,
      log_path;
  unsigned threads = 1;
  train_cmd->add_option("--train", train_path, "Training corpus")->required();
  train_cmd->add_option("--dev", dev_path, "Development corpus")->required();
  train_cmd->add_option("--lexicon", lexicon_path, "Pronunciation lexicon");
  train_cmd->add_option("--word-vectors", vectors_path,
                        "Pre-trained word vectors (word v1 ... v64)");
  train_cmd->add_option("--model,--out", model_out, "Output model file")
      ->required();
  train_cmd->add_option("--log", log_path, "Also write the epoch log here");
  train_cmd->add_option("--threads", threads,
                        "Worker threads per batch (results do not depend on it)");

  // tag
  auto* tag_cmd = app.add_subcommand(
      "tag", "Tag a corpus file, or whitespace-tokenized lines from stdin");
  std::string tag_model, tag_input, tag_out;
  tag_cmd->add_option("--model", tag_model, "Model file")->required();
  tag_cmd->add_option("--input", tag_input,
                      "Corpus file (token or token<TAB>label lines)");
  tag_cmd->add_option("--out", tag_out, "Output file (default stdout)");

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "Score predictions against gold");
  std::string eval_pred, eval_gold, eval_model, eval_train, eval_out;
  bool eval_oov = false;
  eval_cmd->add_option("--pred", eval_pred, "Predicted corpus")->required();
  eval_cmd->add_option("--gold", eval_gold, "Gold corpus")->required();
  eval_cmd->add_flag("--oov", eval_oov,
                     "Append the out-of-vocabulary report (needs --model or "
                     "--train)");
  eval_cmd->add_option("--model", eval_model,
                       "Model whose training vocabulary defines OOV");
  eval_cmd->add_option("--train", eval_train,
                       "Training corpus whose words define OOV");
  eval_cmd->add_option("--out", eval_out, "Output file (default stdout)");

  // ablate
  auto* ablate_cmd = app.add_subcommand(
      "ablate",
      "Train every subword subset with and without word embeddings, plus "
      "word-only");
  ConfigFlags ablate_cfg;
  ablate_cfg.add(ablate_cmd, true);
  std::string ab_train, ab_dev, ab_test, ab_lexicon, ab_vectors, ab_out;
  unsigned repeats = 1, ab_threads = 1;
  ablate_cmd->add_option("--train", ab_train, "Training corpus")->required();
  ablate_cmd->add_option("--dev", ab_dev, "Development corpus")->required();
  ablate_cmd->add_option("--test", ab_test, "Test corpus");
  ablate_cmd->add_option("--lexicon", ab_lexicon, "Pronunciation lexicon");
  ablate_cmd->add_option("--word-vectors", ab_vectors, "Pre-trained word vectors");
  ablate_cmd->add_option("--repeats", repeats, "Seeds per setting")
      ->check(CLI::PositiveNumber);
  ablate_cmd->add_option("--threads", ab_threads, "Worker threads per batch");
  ablate_cmd->add_option("--out", ab_out, "Output file (default stdout)");

  // vocab-stats
  auto* vocab_cmd = app.add_subcommand(
      "vocab-stats", "Vocabulary sizes and parameter counts");
  ConfigFlags vocab_cfg;
  vocab_cfg.add(vocab_cmd, true);
  std::string vs_model, vs_train, vs_lexicon, vs_out;
  auto* vs_model_opt =
      vocab_cmd->add_option("--model", vs_model, "Trained model file");
  vocab_cmd->add_option("--train", vs_train, "Training corpus")
      ->excludes(vs_model_opt);
  vocab_cmd->add_option("--lexicon", vs_lexicon, "Pronunciation lexicon");
  vocab_cmd->add_option("--out", vs_out, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*train_cmd) {
      ConfigHandle cfg{train_cfg.build()};
      LogSink sink;
      if (!log_path.empty()) {
        sink.file.open(log_path);
        if (!sink.file) {
          std::cerr << "subner: cannot write " << log_path << '\n';
          return SUBNER_ERR_DATA;
        }
      }
      subner_train_options o{};
      o.train_path = train_path.c_str();
      o.dev_path = dev_path.c_str();
      o.lexicon_path = opt(lexicon_path);
      o.word_vectors_path = opt(vectors_path);
      o.threads = threads;
      o.log = log_line;
      o.log_user = &sink;
      ModelHandle model;
      check(subner_train(cfg.c, &o, &model.m));
      check(subner_model_save(model.m, model_out.c_str()));
    } else if (*tag_cmd) {
      ModelHandle model;
      check(subner_model_load(tag_model.c_str(), &model.m));
      if (!tag_input.empty()) {
        // TODO: stream to stdout through the C API instead of /dev/stdout.
        const std::string dest = tag_out.empty() ? "/dev/stdout" : tag_out;
        check(subner_tag_file(model.m, tag_input.c_str(), dest.c_str()));
      } else {
        std::ofstream file;
        if (!tag_out.empty()) file.open(tag_out);
        std::ostream& out = tag_out.empty() ? std::cout : file;
        std::string line;
        while (std::getline(std::cin, line)) {
          char* tagged = nullptr;
          check(subner_tag_line(model.m, line.c_str(), &tagged));
          out << take(tagged) << '\n';
        }
      }
    } else if (*eval_cmd) {
      ModelHandle model;
      if (!eval_model.empty()) {
        check(subner_model_load(eval_model.c_str(), &model.m));
      }
      char* report = nullptr;
      check(subner_eval(eval_pred.c_str(), eval_gold.c_str(), eval_oov ? 1 : 0,
                        model.m, opt(eval_train), &report));
      write_output(eval_out, take(report));
    } else if (*ablate_cmd) {
      ConfigHandle cfg{ablate_cfg.build()};
      char* units = nullptr;
      check(subner_config_get(cfg.c, "units", &units));
      std::string unit_list = take(units);
      if (unit_list.empty()) unit_list = "char,phoneme,byte";
      LogSink sink;
      subner_train_options o{};
      o.train_path = ab_train.c_str();
      o.dev_path = ab_dev.c_str();
      o.lexicon_path = opt(ab_lexicon);
      o.word_vectors_path = opt(ab_vectors);
      o.threads = ab_threads;
      o.log = [](const char* kind, const char* line, void*) {
        if (std::string(kind) == "warning") std::cerr << "warning: " << line << '\n';
      };
      o.log_user = &sink;
      char* report = nullptr;
      check(subner_ablate(cfg.c, unit_list.c_str(), &o, opt(ab_test), repeats,
                          &report));
      write_output(ab_out, take(report));
    } else if (*vocab_cmd) {
      char* report = nullptr;
      if (!vs_model.empty()) {
        ModelHandle model;
        check(subner_model_load(vs_model.c_str(), &model.m));
        check(subner_vocab_stats_model(model.m, &report));
      } else if (!vs_train.empty()) {
        ConfigHandle cfg{vocab_cfg.build()};
        check(subner_vocab_stats_data(cfg.c, vs_train.c_str(),
                                      opt(vs_lexicon), &report));
      } else {
        std::cerr << "subner vocab-stats: give --model or --train\n";
        return kExitUsage;
      }
      write_output(vs_out, take(report));
    }
  } catch (const ApiFailure& f) {
    const char* msg = subner_last_error();
    if (msg && *msg) std::cerr << "subner: " << msg << '\n';
    return f.status;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "subner: " << e.what() << '\n';
    return kExitUsage;
  }
  return 0;
}
