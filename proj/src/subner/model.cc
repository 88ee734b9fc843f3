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

#include "subner/model.h"

#include "subner/error.h"

namespace subner {

namespace {

void expect_shape(const ParamStore& store, ParamId id,
                  const std::vector<size_t>& shape) {
  if (store.value(id).shape() != shape) {
    throw ModelFormatError(ModelFormatError::Kind::kShapeMismatch,
                           "parameter " + store.name(id) + " has shape " +
                               shape_string(store.value(id).shape()) +
                               ", expected " + shape_string(shape));
  }
}

}  // namespace

std::array<size_t, 3> Model::unit_vocab_sizes() const {
  return {featurizer.chars.size(), featurizer.lexicon.vocab().size(),
          ByteCodec::kVocabSize};
}

Model Model::Create(const TrainConfig& config, Featurizer featurizer,
                    TagSet tags, Rng& rng) {
  config.validate();
  if (tags.size() == 0) throw DataError("empty tag set");
  Model m;
  m.config = config;
  m.featurizer = std::move(featurizer);
  m.featurizer.with_word_ids = config.word_embeddings;
  m.tags = std::move(tags);

  std::optional<size_t> word_vocab;
  if (config.word_embeddings) word_vocab = m.featurizer.words.size();
  m.encoders = SubwordEncoders::Create(m.params, config.encoder_dims(),
                                       config.units, m.unit_vocab_sizes(),
                                       word_vocab, rng);
  const size_t in = m.encoders.output_dim();
  const size_t hidden = config.word_hidden_dim;
  m.word_fwd = LstmParams::Create(m.params, "word_lstm.fwd", in, hidden, rng);
  m.word_bwd = LstmParams::Create(m.params, "word_lstm.bwd", in, hidden, rng);
  const size_t k = m.tags.size();
  m.projection =
      m.params.add("output.projection", glorot_uniform(k, 2 * hidden, rng));
  m.projection_bias = m.params.add("output.bias", Tensor({k}, 0.0));
  m.transitions = m.params.add("crf.transitions", init_transitions(k, rng));
  return m;
}

void Model::bind() {
  config.validate();
  featurizer.with_word_ids = config.word_embeddings;
  encoders = SubwordEncoders::Bind(params, config.encoder_dims(), config.units,
                                   config.word_embeddings);
  const auto vocab = unit_vocab_sizes();
  for (Unit u : config.units) {
    const auto& ue = encoders.units[static_cast<int>(u)];
    if (params.value(ue->table).rows() != vocab[static_cast<int>(u)]) {
      throw ModelFormatError(
          ModelFormatError::Kind::kShapeMismatch,
          std::string(unit_name(u)) + ".embed rows disagree with vocabulary");
    }
  }
  if (encoders.word_table &&
      params.value(*encoders.word_table).rows() != featurizer.words.size()) {
    throw ModelFormatError(ModelFormatError::Kind::kShapeMismatch,
                           "word.embed rows disagree with word vocabulary");
  }
  word_fwd = LstmParams::Bind(params, "word_lstm.fwd");
  word_bwd = LstmParams::Bind(params, "word_lstm.bwd");
  const size_t in = encoders.output_dim(), hidden = config.word_hidden_dim;
  for (const auto* p : {&word_fwd, &word_bwd}) {
    if (p->input_dim != in || p->hidden_dim != hidden) {
      throw ModelFormatError(ModelFormatError::Kind::kShapeMismatch,
                             "word-level LSTM disagrees with the config");
    }
  }
  const size_t k = tags.size();
  projection = params.find("output.projection");
  projection_bias = params.find("output.bias");
  transitions = params.find("crf.transitions");
  expect_shape(params, projection, {k, 2 * hidden});
  expect_shape(params, projection_bias, {k});
  expect_shape(params, transitions, {k + 2, k + 2});
}

Featurizer build_featurizer(const Corpus& train, PhonemeLexicon lexicon,
                            bool with_word_ids) {
  Featurizer f;
  f.chars = build_char_vocab(train);
  f.lexicon = std::move(lexicon);
  f.words = build_word_vocab(train);
  f.with_word_ids = with_word_ids;
  return f;
}

std::vector<Var> forward_utterance(Tape& tape, const Model& model,
                                   std::span<const WordFeatures> words,
                                   bool training, Rng* rng) {
  if (words.empty()) throw DomainError("forward_utterance: empty utterance");
  const bool use_dropout = training && model.config.dropout_rate > 0.0;
  if (use_dropout && !rng) throw DomainError("dropout requires an RNG");
  std::vector<Var> embedded;
  embedded.reserve(words.size());
  for (const auto& w : words) {
    Var e = embed_word(tape, w, model.encoders);
    if (use_dropout) {
      e = tape.mul_const(e, dropout_mask(tape.value(e).shape(),
                                         model.config.dropout_rate, *rng));
    }
    embedded.push_back(e);
  }
  std::vector<Var> states =
      bilstm_sequence(tape, embedded, model.word_fwd, model.word_bwd);
  Var proj = tape.param(model.projection);
  Var bias = tape.param(model.projection_bias);
  std::vector<Var> scores;
  scores.reserve(states.size());
  for (Var s : states) scores.push_back(tape.affine({{proj, s}}, bias));
  return scores;
}

Var utterance_loss(Tape& tape, const Model& model,
                   std::span<const WordFeatures> words,
                   std::span<const size_t> gold, bool training, Rng* rng) {
  if (gold.size() != words.size()) {
    throw DomainError("utterance_loss: label count differs from token count");
  }
  std::vector<Var> scores = forward_utterance(tape, model, words, training, rng);
  return crf_nll(tape, scores, gold, tape.param(model.transitions));
}

Tensor emissions(const Model& model, std::span<const WordFeatures> words) {
  Tape tape(model.params, nullptr);
  std::vector<Var> scores = forward_utterance(tape, model, words, false, nullptr);
  return stack_rows(tape, scores);
}

std::vector<std::string> tag_tokens(const Model& model,
                                    const std::vector<std::string>& tokens) {
  auto feats = model.featurizer.featurize(tokens);
  Tensor e = emissions(model, feats);
  ViterbiResult best =
      viterbi_decode(e, model.params.value(model.transitions));
  std::vector<std::string> labels;
  labels.reserve(best.tags.size());
  for (size_t y : best.tags) labels.push_back(model.tags.label(y));
  return labels;
}

Corpus tag_corpus(const Model& model, const Corpus& corpus) {
  Corpus out = corpus;
  for (auto& u : out.utterances) u.labels = tag_tokens(model, u.tokens);
  return out;
}

}  // namespace subner
