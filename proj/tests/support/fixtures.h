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

#ifndef SUPPORT_FIXTURES_H_
#define SUPPORT_FIXTURES_H_

#include <sstream>
#include <string>

#include "subner/gradcheck.h"
#include "subner/training.h"

namespace fixtures {

// Two utterances, one entity type (K = 3), every unit plus word embeddings,
// all hidden sizes 4.
struct TinyModel {
  subner::Model model;
  std::vector<subner::FeaturizedUtterance> data;
};

inline TinyModel tiny_full_model(uint64_t seed = 1) {
  subner::Corpus c;
  c.utterances = {
      {{"play", "zorbski", "now"}, {"O", "B-artist", "O"}},
      {{"by", "mel", "tonski"}, {"O", "B-artist", "I-artist"}},
  };
  std::istringstream lex(
      "play\tp l eI\nzorbski\tz O r b s k i\nnow\tn aU\nby\tb aI\n"
      "mel\tm E l\ntonski\tt O n s k i\n");
  subner::TrainConfig cfg;
  cfg.word_embeddings = true;
  cfg.dropout_rate = 0.0;
  cfg.subword_embed_dim = 4;
  cfg.subword_hidden_dim = 4;
  cfg.word_embed_dim = 4;
  cfg.word_hidden_dim = 4;
  subner::Rng rng(seed);
  TinyModel t;
  t.model = subner::Model::Create(
      cfg,
      subner::build_featurizer(
          c, subner::compile_lexicon(subner::parse_lexicon(lex, "tiny")), true),
      subner::TagSet::FromCorpus(c), rng);
  // Non-zero biases and peepholes so every parameter gets a generic gradient.
  for (subner::ParamId id = 0; id < t.model.params.size(); ++id) {
    auto& v = t.model.params.value(id);
    if (t.model.params.name(id) == "crf.transitions") continue;
    for (double& x : v.data()) {
      if (x == 0.0) x = 0.2 * (2.0 * subner::uniform01(rng) - 1.0);
    }
  }
  t.data = subner::featurize_corpus(t.model, c);
  return t;
}

// Sum of the two utterance NLLs. check_gradients perturbs t.model.params in
// place, so the store handed to the loss is the model's own.
inline subner::GradCheckResult tiny_gradcheck(TinyModel& t, double eps) {
  subner::LossFn fn = [&t](const subner::ParamStore& store,
                           subner::GradBuffer* grads) {
    double total = 0.0;
    for (const auto& u : t.data) {
      subner::Tape tape(store, grads);
      subner::Var loss =
          subner::utterance_loss(tape, t.model, u.words, u.tags, false, nullptr);
      if (grads) tape.backward(loss);
      total += tape.value(loss)[0];
    }
    return total;
  };
  return subner::check_gradients(fn, t.model.params, eps);
}

}  // namespace fixtures

#endif  // SUPPORT_FIXTURES_H_
