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

#include <algorithm>

#include "doctest.h"
#include "subner/error.h"
#include "subner/eval.h"
#include "subner/tensor.h"
#include "support/synthetic.h"

using namespace subner;

namespace {

using Labels = std::vector<std::vector<std::string>>;

Corpus corpus_of(const std::vector<std::vector<std::string>>& tokens,
                 const Labels& labels) {
  Corpus c;
  for (size_t i = 0; i < tokens.size(); ++i) {
    c.utterances.push_back({tokens[i], labels[i]});
  }
  return c;
}

}  // namespace

TEST_CASE("per-token PRF hand count") {
  const Labels gold = {{"B-song", "I-song", "O", "B-artist"}};
  const Labels pred = {{"B-song", "O", "O", "B-artist"}};
  PRF r = per_token_prf(pred, gold);
  CHECK(r.tp == 2);
  CHECK(r.fp == 0);
  CHECK(r.fn == 1);
  CHECK(r.precision == doctest::Approx(100.0));
  CHECK(r.recall == doctest::Approx(66.6667).epsilon(1e-5));
  CHECK(r.f1 == doctest::Approx(80.0));
  CHECK(r.per_label.at("I-song").fn == 1);
}

TEST_CASE("per-token PRF extremes") {
  const Labels gold = {{"B-song", "O"}, {"B-city", "I-city"}};
  PRF same = per_token_prf(gold, gold);
  CHECK(same.precision == 100.0);
  CHECK(same.recall == 100.0);
  CHECK(same.f1 == 100.0);

  const Labels all_o = {{"O", "O"}, {"O", "O"}};
  PRF none = per_token_prf(all_o, gold);
  CHECK(none.recall == 0.0);
  CHECK(none.f1 == 0.0);

  // A wrong entity label is both a false positive and a false negative.
  PRF swapped = per_token_prf(Labels{{"B-city"}}, Labels{{"B-song"}});
  CHECK(swapped.fp == 1);
  CHECK(swapped.fn == 1);

  CHECK_THROWS_AS(per_token_prf(Labels{{"O"}}, Labels{{"O", "O"}}), DataError);
  CHECK_THROWS_AS(per_token_prf(Labels{}, gold), DataError);
}

TEST_CASE("PRF bounds and invariance properties") {
  Rng rng(3);
  const std::vector<std::string> inventory = {"O", "O", "O", "B-a", "I-a", "B-b"};
  for (int trial = 0; trial < 200; ++trial) {
    Labels gold, pred;
    const size_t n = 1 + rng() % 6;
    for (size_t u = 0; u < n; ++u) {
      const size_t len = 1 + rng() % 5;
      std::vector<std::string> g, p;
      for (size_t t = 0; t < len; ++t) {
        g.push_back(inventory[rng() % inventory.size()]);
        p.push_back(inventory[rng() % inventory.size()]);
      }
      gold.push_back(g);
      pred.push_back(p);
    }
    PRF r = per_token_prf(pred, gold);
    for (double v : {r.precision, r.recall, r.f1}) {
      CHECK(v >= 0.0);
      CHECK(v <= 100.0);
    }
    if (r.precision > 0 && r.recall > 0) {
      CHECK(r.f1 <= std::max(r.precision, r.recall) + 1e-12);
      CHECK(r.f1 >= std::min(r.precision, r.recall) - 1e-12);
    }

    // Reordering utterances.
    Labels g2 = gold, p2 = pred;
    std::reverse(g2.begin(), g2.end());
    std::reverse(p2.begin(), p2.end());
    PRF rev = per_token_prf(p2, g2);
    CHECK(rev.tp == r.tp);
    CHECK(rev.f1 == r.f1);

    // Self-concatenation doubles counts and keeps rates.
    Labels g3 = gold, p3 = pred;
    g3.insert(g3.end(), gold.begin(), gold.end());
    p3.insert(p3.end(), pred.begin(), pred.end());
    PRF dbl = per_token_prf(p3, g3);
    CHECK(dbl.tp == 2 * r.tp);
    CHECK(dbl.fp == 2 * r.fp);
    CHECK(dbl.fn == 2 * r.fn);
    CHECK(dbl.precision == doctest::Approx(r.precision));
    CHECK(dbl.f1 == doctest::Approx(r.f1));
  }
}

TEST_CASE("macro F1 averages per-label scores") {
  const Labels gold = {{"B-a", "B-b"}};
  const Labels pred = {{"B-a", "O"}};
  PRF r = per_token_prf(pred, gold);
  CHECK(macro_f1(r) == doctest::Approx(50.0));
}

TEST_CASE("OOV slice") {
  Vocabulary train_words({"play", "queen"});
  Corpus gold = corpus_of({{"play", "queen"}, {"play", "zorbo", "queen"}},
                          {{"O", "B-artist"}, {"O", "B-artist", "B-artist"}});

  Corpus no_oov;
  no_oov.utterances = {gold.utterances[0]};
  OOVReport empty = oov_slice(no_oov, no_oov, train_words);
  CHECK(empty.utterances_with_oov == 0);
  CHECK(empty.oov_token_count == 0);
  CHECK(empty.prf_on_oov_tokens.tp == 0);

  Corpus pred = gold;
  pred.utterances[1].labels = {"O", "O", "B-artist"};
  OOVReport r = oov_slice(pred, gold, train_words);
  CHECK(r.utterances_with_oov == 1);
  CHECK(r.oov_token_count == 1);
  CHECK(r.prf_on_oov_tokens.fn == 1);
  CHECK(r.prf_on_oov_tokens.tp == 0);
  CHECK(r.prf_on_oov_utterances.tp == 1);
  CHECK(r.prf_on_oov_utterances.fn == 1);
}

TEST_CASE("OOV slice on an engineered split, scored by hand") {
  synth::Options o;
  o.train_utterances = 120;
  o.test_utterances = 40;
  o.test_oov_rate = 0.0;
  auto data = synth::generate(o);
  Vocabulary words = build_word_vocab(data.train);

  // Replace exactly 10 tokens with unseen words and fix a prediction for each.
  Corpus gold = data.test;
  Corpus pred = gold;
  size_t placed = 0, want_tp = 0, want_fp = 0, want_fn = 0;
  for (size_t u = 0; u < gold.size() && placed < 10; u += 3) {
    auto& g = gold.utterances[u];
    auto& p = pred.utterances[u];
    const size_t t = u % g.size();
    g.tokens[t] = p.tokens[t] = "unseen" + std::to_string(placed);
    // Cycle through: correct, predicted O, predicted wrong entity type.
    const std::string& gl = g.labels[t];
    switch (placed % 3) {
      case 0:
        p.labels[t] = gl;
        if (gl != "O") ++want_tp;
        break;
      case 1:
        p.labels[t] = "O";
        if (gl != "O") ++want_fn;
        break;
      default:
        p.labels[t] = "B-other";
        ++want_fp;
        if (gl != "O") ++want_fn;
        break;
    }
    ++placed;
  }
  REQUIRE(placed == 10);
  OOVReport r = oov_slice(pred, gold, words);
  CHECK(r.oov_token_count == 10);
  CHECK(r.utterances_with_oov == 10);
  CHECK(r.prf_on_oov_tokens.tp == want_tp);
  CHECK(r.prf_on_oov_tokens.fp == want_fp);
  CHECK(r.prf_on_oov_tokens.fn == want_fn);

  size_t oov_gold_entities = 0;
  for (const auto& u : gold.utterances) {
    for (size_t t = 0; t < u.size(); ++t) {
      if (!words.contains(u.tokens[t]) && u.labels[t] != "O") ++oov_gold_entities;
    }
  }
  CHECK(r.prf_on_oov_tokens.tp + r.prf_on_oov_tokens.fn == oov_gold_entities);
}

TEST_CASE("report formatting") {
  PRF r = per_token_prf(Labels{{"B-song", "O", "O", "B-artist"}},
                        Labels{{"B-song", "I-song", "O", "B-artist"}});
  const std::string text = format_prf_report(r);
  CHECK(text.find("P\tR\tF1\n100.00\t66.67\t80.00\n") != std::string::npos);
  CHECK(text.find("total\t2\t0\t1\t") != std::string::npos);
}
