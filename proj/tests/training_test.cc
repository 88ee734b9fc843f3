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
#include <set>

#include "doctest.h"
#include "subner/ablation.h"
#include "subner/error.h"
#include "subner/training.h"
#include "support/fixtures.h"
#include "support/synthetic.h"

using namespace subner;

namespace {

TrainConfig small_config() {
  TrainConfig c;
  c.subword_embed_dim = 6;
  c.subword_hidden_dim = 6;
  c.word_embed_dim = 6;
  c.word_hidden_dim = 8;
  c.max_epochs = 3;
  return c;
}

synth::Data small_data(size_t train = 30, size_t dev = 10) {
  synth::Options o;
  o.train_utterances = train;
  o.dev_utterances = dev;
  o.test_utterances = 10;
  return synth::generate(o);
}

std::vector<FeaturizedUtterance> toy_data(size_t n) {
  std::vector<FeaturizedUtterance> d(n);
  for (size_t i = 0; i < n; ++i) {
    d[i].words.resize(1 + i % 5);
    d[i].tags.assign(1 + i % 5, 0);
  }
  return d;
}

bool same_grads(const GradBuffer& a, const GradBuffer& b) {
  if (a.size() != b.size()) return false;
  for (ParamId id = 0; id < a.size(); ++id) {
    if (!(a[id] == b[id])) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("make_batches sizes and padding") {
  auto data = toy_data(10);
  Rng rng(1);
  auto batches = make_batches(data, 4, rng, false);
  REQUIRE(batches.size() == 3);
  CHECK(batches[0].size() == 4);
  CHECK(batches[1].size() == 4);
  CHECK(batches[2].size() == 2);

  std::set<size_t> seen;
  for (const auto& b : batches) {
    for (size_t i = 0; i < b.size(); ++i) {
      seen.insert(b.members[i]);
      CHECK(b.words[i].size() == b.max_length());
      CHECK(real_words(b, i).size() == data[b.members[i]].words.size());
      CHECK(real_tags(b, i).size() == data[b.members[i]].tags.size());
    }
  }
  CHECK(seen.size() == 10);

  Rng one(1);
  CHECK(make_batches(data, 64, one, false).size() == 1);

  Rng a(5), b(5);
  auto ba = make_batches(data, 3, a, false);
  auto bb = make_batches(data, 3, b, false);
  REQUIRE(ba.size() == bb.size());
  for (size_t i = 0; i < ba.size(); ++i) CHECK(ba[i].members == bb[i].members);

  CHECK_THROWS_AS(make_batches(data, 0, a, false), DomainError);
  CHECK_THROWS_AS(make_batches({}, 4, a, false), DataError);
}

TEST_CASE("padding does not change per-utterance losses or gradients") {
  auto data = small_data();
  Rng rng(2);
  Model m = Model::Create(small_config(),
                          build_featurizer(data.train, compile_lexicon(data.lexicon), false),
                          TagSet::FromCorpus(data.train), rng);
  auto feats = featurize_corpus(m, data.train);
  // Shortest utterance alone, then next to the longest one.
  size_t shortest = 0, longest = 0;
  for (size_t i = 0; i < feats.size(); ++i) {
    if (feats[i].words.size() < feats[shortest].words.size()) shortest = i;
    if (feats[i].words.size() > feats[longest].words.size()) longest = i;
  }
  REQUIRE(feats[shortest].words.size() < feats[longest].words.size());
  std::vector<FeaturizedUtterance> alone = {feats[shortest]};
  std::vector<FeaturizedUtterance> pair = {feats[shortest], feats[longest]};

  for (bool training : {false, true}) {
    Rng r1(0), r2(0);
    Batch b1 = make_batches(alone, 4, r1, false)[0];
    Batch b2 = make_batches(pair, 4, r2, false)[0];
    const size_t pos = b2.members[0] == 0 ? 0 : 1;
    CHECK(b2.words[pos].size() > feats[shortest].words.size());

    GradBuffer g1(m.params), g2(m.params);
    auto l1 = batch_losses(m, b1, training, {77}, &g1);
    std::vector<uint64_t> seeds(2, 99);
    seeds[pos] = 77;
    auto l2 = batch_losses(m, b2, training, seeds, &g2);
    CHECK(l1[0] == l2[pos]);
  }
}

TEST_CASE("batch gradients do not depend on thread count") {
  auto data = small_data();
  Rng rng(3);
  Model m = Model::Create(small_config(),
                          build_featurizer(data.train, compile_lexicon(data.lexicon), false),
                          TagSet::FromCorpus(data.train), rng);
  auto feats = featurize_corpus(m, data.train);
  Rng br(4);
  Batch b = make_batches(feats, 5, br, false)[0];
  std::vector<uint64_t> seeds = {1, 2, 3, 4, 5};
  GradBuffer g1(m.params), g2(m.params), g3(m.params);
  auto l1 = batch_losses(m, b, true, seeds, &g1, 1);
  auto l2 = batch_losses(m, b, true, seeds, &g2, 2);
  auto l3 = batch_losses(m, b, true, seeds, &g3, 5);
  CHECK(l1 == l2);
  CHECK(l1 == l3);
  CHECK(same_grads(g1, g2));
  CHECK(same_grads(g1, g3));

  CHECK_THROWS_AS(batch_losses(m, b, true, {1}, &g1), DomainError);
}

TEST_CASE("inference is deterministic and shaped T x K") {
  auto data = small_data();
  Rng rng(4);
  TrainConfig c = small_config();
  c.word_embeddings = true;
  Model m = Model::Create(c, build_featurizer(data.train, compile_lexicon(data.lexicon), true),
                          TagSet::FromCorpus(data.train), rng);
  const auto& u = data.dev.utterances[0];
  auto words = m.featurizer.featurize(u.tokens);
  Tensor e1 = emissions(m, words);
  Tensor e2 = emissions(m, words);
  CHECK(e1.rows() == u.size());
  CHECK(e1.cols() == m.num_tags());
  CHECK(e1 == e2);
  CHECK(tag_tokens(m, u.tokens).size() == u.size());
}

TEST_CASE("end-to-end gradient check") {
  auto t = fixtures::tiny_full_model();
  CHECK(t.model.num_tags() == 3);
  auto r = fixtures::tiny_gradcheck(t, 1e-5);
  INFO("worst " << r.worst_param << "[" << r.worst_index << "] analytic "
                << r.analytic << " numeric " << r.numeric);
  CHECK(r.coordinates == t.model.params.total_elements());
  CHECK(r.max_relative_error < 1e-4);
}

TEST_CASE("train runs max_epochs and keeps the best dev checkpoint") {
  auto data = small_data();
  TrainOptions opts;
  opts.lexicon = data.lexicon;
  TrainConfig c = small_config();
  c.max_epochs = 1;
  TrainResult one = train(c, data.train, data.dev, opts);
  CHECK(one.log.size() == 1);
  CHECK(one.best_epoch == 1);

  c.max_epochs = 4;
  std::vector<double> seen;
  opts.on_epoch = [&](const EpochLog& e, const Model&) { seen.push_back(e.dev.f1); };
  TrainResult r = train(c, data.train, data.dev, opts);
  REQUIRE(r.log.size() == 4);
  CHECK(seen.size() == 4);
  double best = 0.0;
  for (const auto& e : r.log) best = std::max(best, e.dev.f1);
  CHECK(r.best_dev_f1 == best);
  CHECK(r.log[r.best_epoch - 1].dev.f1 == best);
  CHECK(evaluate(r.best, data.dev).f1 == best);
  CHECK(format_epoch_log(r.log[0]).rfind("1\t", 0) == 0);

  opts.on_epoch = nullptr;
  TrainResult again = train(c, data.train, data.dev, opts);
  CHECK(again.best.params == r.best.params);
  opts.threads = 2;
  TrainResult threaded = train(c, data.train, data.dev, opts);
  CHECK(threaded.best.params == r.best.params);
}

TEST_CASE("train input errors") {
  auto data = small_data();
  TrainOptions opts;
  opts.lexicon = data.lexicon;
  CHECK_THROWS_AS(train(small_config(), data.train, Corpus{}, opts), DataError);
  CHECK_THROWS_AS(train(small_config(), Corpus{}, data.dev, opts), DataError);
  TrainConfig bad = small_config();
  bad.batch_size = 0;
  CHECK_THROWS_AS(train(bad, data.train, data.dev, opts), DomainError);
}

TEST_CASE("divergence surfaces as a numerical error") {
  auto data = small_data(8, 4);
  TrainOptions opts;
  opts.lexicon = data.lexicon;
  TrainConfig c = small_config();
  c.learning_rate = 1e308;
  c.max_epochs = 5;
  std::string msg;
  try {
    train(c, data.train, data.dev, opts);
  } catch (const NumericalError& e) {
    msg = e.what();
  }
  CHECK(msg.find("epoch") != std::string::npos);
}

TEST_CASE("word embeddings add exactly one table") {
  auto data = small_data(60, 5);
  Featurizer f = build_featurizer(data.train, compile_lexicon(data.lexicon), true);
  const size_t words = f.words.size();
  TrainConfig c;
  Rng r1(1), r2(1);
  Model sub = Model::Create(c, f, TagSet::FromCorpus(data.train), r1);
  c.word_embeddings = true;
  Model both = Model::Create(c, f, TagSet::FromCorpus(data.train), r2);
  auto embed = [](const Model& m) {
    size_t n = 0;
    for (ParamId id = 0; id < m.params.size(); ++id) {
      const auto& name = m.params.name(id);
      if (name.size() >= 6 && name.compare(name.size() - 6, 6, ".embed") == 0) {
        n += m.params.value(id).size();
      }
    }
    return n;
  };
  CHECK(embed(both) - embed(sub) == words * 64);
}

TEST_CASE("ablation grid and seeds") {
  auto grid = ablation_grid({Unit::kChar, Unit::kPhoneme, Unit::kByte});
  REQUIRE(grid.size() == 15);
  CHECK(grid[0].name() == "char");
  CHECK(grid[0].group() == "subwords");
  CHECK(grid[1].name() == "phoneme");
  CHECK(grid[2].name() == "byte");
  CHECK(grid[3].name() == "char+phoneme");
  CHECK(grid[6].name() == "char+phoneme+byte");
  CHECK(grid[6].group() == "subwords");
  CHECK(grid[7].name() == "char");
  CHECK(grid[7].group() == "combined");
  CHECK(grid[14].name() == "word");
  CHECK(grid[14].group() == "word");
  CHECK(grid[14].units.empty());

  CHECK(derive_seed(1, 0, 0) == derive_seed(1, 0, 0));
  CHECK(derive_seed(1, 0, 0) != derive_seed(1, 0, 1));
  CHECK(derive_seed(1, 0, 0) != derive_seed(1, 1, 0));
  CHECK(derive_seed(1, 0, 0) != derive_seed(2, 0, 0));
}

TEST_CASE("run_ablation produces one row per setting") {
  auto data = small_data(12, 4);
  TrainConfig c = small_config();
  c.max_epochs = 1;
  AblationOptions opts;
  opts.repeats = 2;
  opts.test = &data.test;
  opts.train.lexicon = data.lexicon;
  auto rows = run_ablation(c, {Unit::kChar, Unit::kByte}, data.train, data.dev, opts);
  REQUIRE(rows.size() == 7);
  for (const auto& r : rows) {
    CHECK(r.dev_f1.size() == 2);
    CHECK(r.test_f1.size() == 2);
    CHECK(r.mean_dev_f1 == doctest::Approx((r.dev_f1[0] + r.dev_f1[1]) / 2));
  }
  const std::string text = format_ablation(rows);
  CHECK(text.find("comparison\tunits\ttest_f1\tdelta") != std::string::npos);
}
