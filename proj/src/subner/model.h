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

// The full tagger: subword encoders -> dropout -> word-level BiLSTM ->
// linear emission layer -> CRF.

#ifndef SUBNER_MODEL_H_
#define SUBNER_MODEL_H_

#include <span>
#include <string>
#include <vector>

#include "subner/config.h"
#include "subner/corpus.h"
#include "subner/crf.h"
#include "subner/encoders.h"
#include "subner/featurize.h"
#include "subner/tape.h"

namespace subner {

struct Model {
  TrainConfig config;
  Featurizer featurizer;
  TagSet tags;
  ParamStore params;

  // Views into `params`; rebuilt by bind().
  SubwordEncoders encoders;
  LstmParams word_fwd;
  LstmParams word_bwd;
  ParamId projection = 0;       // K x (2 * word_hidden)
  ParamId projection_bias = 0;  // K
  ParamId transitions = 0;      // (K + 2) x (K + 2)

  // Fresh parameters drawn from `rng`.
  static Model Create(const TrainConfig& config, Featurizer featurizer,
                      TagSet tags, Rng& rng);

  // Resolves all parameter views by name and validates their shapes against
  // the config, vocabularies and tag set.
  void bind();

  size_t num_tags() const { return tags.size(); }
  std::array<size_t, 3> unit_vocab_sizes() const;
};

// Vocabularies from the training split; the lexicon is taken as given.
Featurizer build_featurizer(const Corpus& train, PhonemeLexicon lexicon,
                            bool with_word_ids);

// Per-token emission score vectors (length K). When `training`, an
// inverted-dropout mask drawn from `rng` is applied to every per-token
// embedding before the word-level BiLSTM.
std::vector<Var> forward_utterance(Tape& tape, const Model& model,
                                   std::span<const WordFeatures> words,
                                   bool training, Rng* rng);

// CRF negative log-likelihood of `gold` (tag ids).
Var utterance_loss(Tape& tape, const Model& model,
                   std::span<const WordFeatures> words,
                   std::span<const size_t> gold, bool training, Rng* rng);

// T x K emissions with dropout disabled.
Tensor emissions(const Model& model, std::span<const WordFeatures> words);

// Viterbi labels for already-lowercased tokens.
std::vector<std::string> tag_tokens(const Model& model,
                                    const std::vector<std::string>& tokens);

// Tags every utterance; the returned corpus carries predicted labels.
Corpus tag_corpus(const Model& model, const Corpus& corpus);

}  // namespace subner

#endif  // SUBNER_MODEL_H_
