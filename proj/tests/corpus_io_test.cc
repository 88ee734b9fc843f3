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

#include <sstream>

#include "doctest.h"
#include "subner/config.h"
#include "subner/corpus.h"
#include "subner/error.h"
#include "subner/model_io.h"
#include "support/synthetic.h"

using namespace subner;

namespace {

Corpus parse(const std::string& text, CorpusReadOptions opts = {}) {
  std::istringstream in(text);
  return parse_corpus(in, "mem", opts);
}

std::string data_error(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const DataError& e) {
    return e.what();
  }
  return "";
}

struct Fixture {
  synth::Data data;
  Model model;
};

Fixture small_model(bool word_embeddings, uint64_t seed = 3) {
  synth::Options o;
  o.train_utterances = 40;
  o.dev_utterances = 10;
  o.test_utterances = 100;
  o.seed = seed;
  Fixture f;
  f.data = synth::generate(o);
  TrainConfig c;
  c.word_embeddings = word_embeddings;
  c.subword_embed_dim = 4;
  c.subword_hidden_dim = 3;
  c.word_embed_dim = 5;
  c.word_hidden_dim = 6;
  Rng rng(seed);
  f.model = Model::Create(
      c, build_featurizer(f.data.train, compile_lexicon(f.data.lexicon), word_embeddings),
      TagSet::FromCorpus(f.data.train), rng);
  return f;
}

std::string saved(const Model& m) {
  std::ostringstream out;
  save_model(m, out);
  return out.str();
}

ModelFormatError::Kind load_error(const std::string& bytes) {
  std::istringstream in(bytes);
  try {
    load_model(in);
  } catch (const ModelFormatError& e) {
    return e.kind();
  }
  FAIL("load unexpectedly succeeded");
  return ModelFormatError::Kind::kMalformed;
}

}  // namespace

TEST_CASE("read_corpus basics") {
  Corpus c = parse("play\tO\nQueen\tB-artist\n\n");
  REQUIRE(c.size() == 1);
  CHECK(c.utterances[0].tokens == std::vector<std::string>{"play", "queen"});
  CHECK(c.utterances[0].labels == std::vector<std::string>{"O", "B-artist"});
  CHECK(c.token_count() == 2);

  CHECK(data_error([] { parse("play\tO\nqueen\n"); }).find("mem:2") != std::string::npos);
  CHECK(data_error([] { parse("play\tX-artist\n"); }).find("mem:1") != std::string::npos);
  CHECK_FALSE(data_error([] { parse(""); }).empty());
  CHECK_FALSE(data_error([] { parse("\n\n"); }).empty());
  CHECK_FALSE(data_error([] { parse("a\tO\nb\tI-song\n"); }).empty());
  CHECK_FALSE(data_error([] { parse("a\tO\tO\n"); }).empty());

  CorpusReadOptions lenient;
  lenient.strict_sequences = false;
  CHECK(parse("a\tO\nb\tI-song\n", lenient).size() == 1);
  CorpusReadOptions unlabeled;
  unlabeled.allow_unlabeled = true;
  CHECK(parse("a\nb\n\nc\n", unlabeled).size() == 2);
}

TEST_CASE("corpus write/read round trip") {
  synth::Options o;
  o.train_utterances = 50;
  auto data = synth::generate(o);
  for (const Corpus* c : {&data.train, &data.dev, &data.test}) {
    std::ostringstream out;
    write_corpus(out, *c);
    CorpusReadOptions opts;
    opts.split = c->split;
    std::istringstream in(out.str());
    CHECK(parse_corpus(in, "mem", opts) == *c);
  }
}

TEST_CASE("BIO2 helpers and tag set") {
  CHECK(is_bio2_label("O"));
  CHECK(is_bio2_label("B-song"));
  CHECK_FALSE(is_bio2_label("B-"));
  CHECK_FALSE(is_bio2_label("S-song"));
  CHECK(is_well_formed_bio2({"B-a", "I-a", "O"}));
  CHECK_FALSE(is_well_formed_bio2({"B-a", "I-b"}));
  Corpus c = parse("x\tB-song\ny\tO\nz\tB-artist\n");
  TagSet tags = TagSet::FromCorpus(c);
  CHECK(tags.labels() ==
        std::vector<std::string>{"O", "B-artist", "I-artist", "B-song", "I-song"});
  CHECK_THROWS_AS(tags.id("B-city"), DataError);
}

TEST_CASE("config round trip and errors") {
  TrainConfig c;
  c.learning_rate = 0.1 + 0.2;  // not exactly representable as typed
  c.units = {Unit::kByte, Unit::kChar};
  c.word_embeddings = true;
  c.seed = 12345678901234ull;
  std::ostringstream out;
  write_config(out, c);
  std::istringstream in(out.str());
  TrainConfig back = parse_config(in, "mem");
  CHECK(back.learning_rate == c.learning_rate);
  CHECK(back.units == std::vector<Unit>{Unit::kChar, Unit::kByte});
  CHECK(back.seed == c.seed);
  CHECK(back.word_embeddings);

  std::istringstream typo("learning_rat = 0.1\n");
  CHECK_THROWS_AS(parse_config(typo, "mem"), DomainError);
  std::istringstream bad("batch_size = four\n");
  CHECK_THROWS_AS(parse_config(bad, "mem"), DomainError);

  TrainConfig invalid;
  invalid.units.clear();
  CHECK_THROWS_AS(invalid.validate(), DomainError);
  invalid.word_embeddings = true;
  CHECK_NOTHROW(invalid.validate());
  invalid.dropout_rate = 1.0;
  CHECK_THROWS_AS(invalid.validate(), DomainError);

  CHECK(reference_batch_size("en") == 1024);
  CHECK(reference_batch_size("de") == 256);
  CHECK(reference_batch_size("es") == 4);
}

TEST_CASE("model save/load is bit exact") {
  for (bool word : {false, true}) {
    Fixture f = small_model(word);
    const std::string bytes = saved(f.model);
    std::istringstream in(bytes);
    Model back = load_model(in);
    CHECK(back.params == f.model.params);
    CHECK(back.config == f.model.config);
    CHECK(back.featurizer == f.model.featurizer);
    CHECK(back.tags == f.model.tags);
    CHECK(saved(back) == bytes);

    // Same decisions on 100 utterances.
    size_t same = 0;
    for (const auto& u : f.data.test.utterances) {
      same += tag_tokens(f.model, u.tokens) == tag_tokens(back, u.tokens);
    }
    CHECK(same == 100);
  }
}

TEST_CASE("model load failures are distinct") {
  Fixture f = small_model(true);
  const std::string bytes = saved(f.model);

  CHECK(load_error(bytes.substr(0, bytes.size() - 1)) ==
        ModelFormatError::Kind::kTruncated);
  CHECK(load_error(bytes.substr(0, bytes.find("params\t"))) ==
        ModelFormatError::Kind::kTruncated);

  std::string v2 = bytes;
  v2.replace(v2.find("subner-model\t1"), 14, "subner-model\t2");
  CHECK(load_error(v2) == ModelFormatError::Kind::kUnknownVersion);

  // Declared shape disagrees with the config.
  std::string shape = bytes;
  const size_t at = shape.find("output.bias\t");
  REQUIRE(at != std::string::npos);
  const size_t eol = shape.find('\n', at);
  const std::string dims = shape.substr(at + 12, eol - at - 12);
  shape.replace(at + 12, dims.size(), std::to_string(std::stoul(dims) + 1));
  // Keep the byte count consistent so only the shape is wrong.
  shape.append(8, '\0');
  CHECK(load_error(shape) == ModelFormatError::Kind::kShapeMismatch);

  CHECK(load_error(bytes + "x") == ModelFormatError::Kind::kMalformed);
  CHECK(load_error("hello\n") == ModelFormatError::Kind::kMalformed);
}

TEST_CASE("word vectors") {
  Fixture f = small_model(true);
  Model& m = f.model;
  const ParamId table = *m.encoders.word_table;
  const Tensor before = m.params.value(table);

  std::istringstream none("zzzzunseen 1 2 3 4 5\n");
  CHECK(apply_word_vectors(m, parse_word_vectors(none, "mem", 5)) == 0);
  CHECK(m.params.value(table) == before);

  const std::string w = m.featurizer.words.entry(5);
  std::istringstream one(w + " 1 2 3 4 5\n\n" + w + " 6 7 8 9 10\n");
  WordVectors v = parse_word_vectors(one, "mem", 5);
  CHECK(v.warnings.size() == 1);
  CHECK(apply_word_vectors(m, v) == 1);
  const Tensor& after = m.params.value(table);
  for (size_t r = 0; r < after.rows(); ++r) {
    for (size_t c = 0; c < after.cols(); ++c) {
      if (r == 5) {
        CHECK(after.at(r, c) == 6.0 + c);
      } else {
        CHECK(after.at(r, c) == before.at(r, c));
      }
    }
  }

  std::istringstream wrong("a 1 2 3\nb 1 2 3 4 5 6\n");
  CHECK(data_error([&] { parse_word_vectors(wrong, "vec", 3); }).find("vec:2") !=
        std::string::npos);
  std::istringstream dim_mismatch("a 1 2 3\n");
  CHECK_THROWS_AS(apply_word_vectors(m, parse_word_vectors(dim_mismatch, "mem", 3)),
                  DataError);
}

TEST_CASE("vocab report") {
  Fixture f = small_model(false);
  VocabReport r = vocab_report(f.model);
  CHECK(r.bytes == 257);
  CHECK(r.subword_total == r.chars + r.phonemes + 257);
  CHECK(r.words == f.model.featurizer.words.size());
  REQUIRE(r.params.size() == 3);
  CHECK(r.params[0].configuration == "subwords_only");
  CHECK(r.params[2].configuration == "combined");
  CHECK(r.word_embedding_delta == r.words * 5);
  CHECK(r.params[2].embedding - r.params[0].embedding == r.words * 5);
  CHECK(format_vocab_report(r).find("byte\t257\n") != std::string::npos);
}
