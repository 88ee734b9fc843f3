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

#include "subner/subner.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <new>
#include <sstream>
#include <string>

#include "subner/ablation.h"
#include "subner/error.h"
#include "subner/model_io.h"
#include "subner/training.h"
#include "subner/utf8.h"

struct subner_config {
  subner::TrainConfig value;
};

struct subner_model {
  subner::Model value;
};

namespace {

thread_local std::string g_last_error;

subner_status fail(subner_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

// Runs `body`, translating exceptions into status codes.
template <typename F>
subner_status guarded(F&& body) {
  try {
    g_last_error.clear();
    body();
    return SUBNER_OK;
  } catch (const subner::Error& e) {
    return fail(static_cast<subner_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(SUBNER_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(SUBNER_ERR_INTERNAL, e.what());
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void require(const void* p, const char* what) {
  if (!p) throw subner::DomainError(std::string(what) + " must not be null");
}

std::string config_text(const subner::TrainConfig& c) {
  std::ostringstream out;
  subner::write_config(out, c);
  return out.str();
}

subner::TrainOptions train_options(const subner_train_options* o,
                                   const subner::TrainConfig& config,
                                   subner::WordVectors* vectors) {
  require(o, "options");
  require(o->train_path, "train_path");
  require(o->dev_path, "dev_path");
  subner::TrainOptions t;
  if (o->lexicon_path) t.lexicon = subner::read_lexicon(o->lexicon_path);
  if (o->word_vectors_path) {
    *vectors =
        subner::read_word_vectors(o->word_vectors_path, config.word_embed_dim);
    if (o->log) {
      for (const auto& w : vectors->warnings) o->log("warning", w.c_str(), o->log_user);
    }
    t.word_vectors = vectors;
  }
  t.threads = o->threads == 0 ? 1 : o->threads;
  if (o->log) {
    subner_log_fn log = o->log;
    void* user = o->log_user;
    t.on_epoch = [log, user](const subner::EpochLog& e, const subner::Model&) {
      log("epoch", subner::format_epoch_log(e).c_str(), user);
    };
  }
  return t;
}

subner::Corpus read_gold(const char* path, const char* split) {
  subner::CorpusReadOptions ro;
  ro.split = split;
  return subner::read_corpus(path, ro);
}

}  // namespace

extern "C" {

const char* subner_version(void) { return "0.1.0"; }

const char* subner_last_error(void) { return g_last_error.c_str(); }

void subner_string_free(char* s) { std::free(s); }

subner_status subner_config_new(subner_config** out) {
  return guarded([&] {
    require(out, "out");
    *out = new subner_config();
  });
}

subner_status subner_config_load(const char* path, subner_config** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    subner::TrainConfig c = subner::read_config(path);
    *out = new subner_config{c};
  });
}

subner_status subner_config_set(subner_config* config, const char* key,
                                const char* value) {
  return guarded([&] {
    require(config, "config");
    require(key, "key");
    require(value, "value");
    subner::set_config_value(config->value, key, value);
  });
}

subner_status subner_config_get(const subner_config* config, const char* key,
                                char** value) {
  return guarded([&] {
    require(config, "config");
    require(key, "key");
    require(value, "value");
    for (const auto& [k, v] : subner::config_entries(config->value)) {
      if (k == key) {
        *value = dup_string(v);
        return;
      }
    }
    throw subner::DomainError(std::string("unknown config key '") + key + "'");
  });
}

subner_status subner_config_dump(const subner_config* config, char** text) {
  return guarded([&] {
    require(config, "config");
    require(text, "text");
    *text = dup_string(config_text(config->value));
  });
}

void subner_config_free(subner_config* config) { delete config; }

subner_status subner_train(const subner_config* config,
                           const subner_train_options* options,
                           subner_model** out) {
  return guarded([&] {
    require(config, "config");
    require(out, "out");
    config->value.validate();
    subner::WordVectors vectors;
    auto t = train_options(options, config->value, &vectors);
    auto train = read_gold(options->train_path, "train");
    auto dev = read_gold(options->dev_path, "dev");
    subner::TrainResult r = subner::train(config->value, train, dev, t);
    *out = new subner_model{std::move(r.best)};
  });
}

subner_status subner_model_save(const subner_model* model, const char* path) {
  return guarded([&] {
    require(model, "model");
    require(path, "path");
    subner::save_model(model->value, std::string(path));
  });
}

subner_status subner_model_load(const char* path, subner_model** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    subner::Model m = subner::load_model(std::string(path));
    *out = new subner_model{std::move(m)};
  });
}

void subner_model_free(subner_model* model) { delete model; }

subner_status subner_model_config(const subner_model* model, char** text) {
  return guarded([&] {
    require(model, "model");
    require(text, "text");
    *text = dup_string(config_text(model->value.config));
  });
}

subner_status subner_tag_line(const subner_model* model, const char* line,
                              char** out) {
  return guarded([&] {
    require(model, "model");
    require(line, "line");
    require(out, "out");
    auto raw = subner::split_whitespace(line);
    std::string result;
    if (!raw.empty()) {
      std::vector<std::string> tokens;
      for (const auto& t : raw) {
        if (!subner::utf8::is_valid(t)) {
          throw subner::DataError("input is not valid UTF-8");
        }
        tokens.push_back(subner::utf8::to_lower(t));
      }
      auto labels = subner::tag_tokens(model->value, tokens);
      for (size_t i = 0; i < raw.size(); ++i) {
        if (i) result += ' ';
        result += raw[i] + '/' + labels[i];
      }
    }
    *out = dup_string(result);
  });
}

subner_status subner_tag_file(const subner_model* model, const char* in_path,
                              const char* out_path) {
  return guarded([&] {
    require(model, "model");
    require(in_path, "in_path");
    require(out_path, "out_path");
    subner::CorpusReadOptions ro;
    ro.allow_unlabeled = true;
    ro.strict_sequences = false;
    auto corpus = subner::read_corpus(in_path, ro);
    subner::write_corpus(subner::tag_corpus(model->value, corpus), out_path);
  });
}

subner_status subner_eval(const char* pred_path, const char* gold_path,
                          int oov, const subner_model* model,
                          const char* train_path, char** report) {
  return guarded([&] {
    require(pred_path, "pred_path");
    require(gold_path, "gold_path");
    require(report, "report");
    subner::CorpusReadOptions pred_opts;
    pred_opts.strict_sequences = false;
    auto pred = subner::read_corpus(pred_path, pred_opts);
    auto gold = read_gold(gold_path, "gold");
    std::string text = subner::format_prf_report(subner::per_token_prf(pred, gold));
    if (oov) {
      subner::Vocabulary words;
      if (model) {
        words = model->value.featurizer.words;
      } else if (train_path) {
        words = subner::build_word_vocab(read_gold(train_path, "train"));
      } else {
        throw subner::DomainError(
            "the OOV report needs a model or a training corpus");
      }
      text += '\n' + subner::format_oov_report(subner::oov_slice(pred, gold, words));
    }
    *report = dup_string(text);
  });
}

subner_status subner_ablate(const subner_config* config, const char* units,
                            const subner_train_options* options,
                            const char* test_path, unsigned repeats,
                            char** report) {
  return guarded([&] {
    require(config, "config");
    require(units, "units");
    require(report, "report");
    subner::WordVectors vectors;
    subner::AblationOptions ao;
    ao.train = train_options(options, config->value, &vectors);
    ao.repeats = repeats;
    auto train = read_gold(options->train_path, "train");
    auto dev = read_gold(options->dev_path, "dev");
    subner::Corpus test;
    if (test_path) {
      test = read_gold(test_path, "test");
      ao.test = &test;
    }
    auto rows = subner::run_ablation(config->value, subner::parse_units(units),
                                     train, dev, ao);
    *report = dup_string(subner::format_ablation(rows));
  });
}

subner_status subner_vocab_stats_model(const subner_model* model,
                                       char** report) {
  return guarded([&] {
    require(model, "model");
    require(report, "report");
    *report = dup_string(
        subner::format_vocab_report(subner::vocab_report(model->value)));
  });
}

subner_status subner_vocab_stats_data(const subner_config* config,
                                      const char* train_path,
                                      const char* lexicon_path,
                                      char** report) {
  return guarded([&] {
    require(config, "config");
    require(train_path, "train_path");
    require(report, "report");
    auto train = read_gold(train_path, "train");
    std::vector<subner::RawLexiconEntry> lexicon;
    if (lexicon_path) lexicon = subner::read_lexicon(lexicon_path);
    auto featurizer = subner::build_featurizer(
        train, subner::compile_lexicon(lexicon), config->value.word_embeddings);
    *report = dup_string(subner::format_vocab_report(subner::vocab_report(
        featurizer, subner::TagSet::FromCorpus(train), config->value)));
  });
}

}  // extern "C"
