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

#include "subner/model_io.h"

#include <bit>
#include <charconv>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "subner/error.h"
#include "subner/utf8.h"

namespace subner {

namespace {

using Kind = ModelFormatError::Kind;

constexpr const char* kMagic = "subner-model";

std::string code_point_name(char32_t cp) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "U+%04X", static_cast<unsigned>(cp));
  return buf;
}

void write_le(std::ostream& out, double x) {
  uint64_t bits = std::bit_cast<uint64_t>(x);
  char bytes[8];
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((bits >> (8 * i)) & 0xFF);
  out.write(bytes, 8);
}

double read_le(const unsigned char* bytes) {
  uint64_t bits = 0;
  for (int i = 7; i >= 0; --i) bits = (bits << 8) | bytes[i];
  return std::bit_cast<double>(bits);
}

// Line reader over the text header.
class HeaderReader {
 public:
  explicit HeaderReader(std::istream& in) : in_(in) {}

  std::string next() {
    std::string line;
    if (!std::getline(in_, line)) {
      throw ModelFormatError(Kind::kTruncated,
                             "model header ends early (line " +
                                 std::to_string(line_no_ + 1) + ")");
    }
    ++line_no_;
    return line;
  }

  // "<name>\t<count>"
  size_t section(const std::string& name) {
    const std::string line = next();
    const std::string prefix = name + "\t";
    if (line.compare(0, prefix.size(), prefix) != 0) {
      fail("expected section '" + name + "'");
    }
    return parse_count(line.substr(prefix.size()));
  }

  size_t parse_count(const std::string& text) {
    size_t n = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), n);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
      fail("bad count '" + text + "'");
    }
    return n;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ModelFormatError(Kind::kMalformed, "model header line " +
                                                 std::to_string(line_no_) +
                                                 ": " + what);
  }

 private:
  std::istream& in_;
  size_t line_no_ = 0;
};

std::vector<size_t> parse_dims(HeaderReader& r, const std::string& text) {
  std::vector<size_t> dims;
  size_t start = 0;
  while (start <= text.size()) {
    size_t x = text.find('x', start);
    if (x == std::string::npos) x = text.size();
    dims.push_back(r.parse_count(text.substr(start, x - start)));
    if (dims.back() == 0) r.fail("zero dimension");
    start = x + 1;
  }
  return dims;
}

std::vector<std::string> read_vocab_section(HeaderReader& r,
                                            const std::string& name) {
  const size_t n = r.section(name);
  if (n < 2) r.fail(name + " vocabulary lacks reserved entries");
  std::vector<std::string> entries;
  for (size_t i = 0; i < n; ++i) {
    std::string line = r.next();
    if (i == 0 && line != kPadToken) r.fail(name + " entry 0 must be <PAD>");
    if (i == 1 && line != kUnkToken) r.fail(name + " entry 1 must be <UNK>");
    if (i >= 2) entries.push_back(std::move(line));
  }
  return entries;
}

Model load_model_impl(std::istream& in) {
  HeaderReader r(in);
  const std::string magic = r.next();
  const std::string prefix = std::string(kMagic) + "\t";
  if (magic.compare(0, prefix.size(), prefix) != 0) {
    throw ModelFormatError(Kind::kMalformed, "not a subner model file");
  }
  if (magic.substr(prefix.size()) != std::to_string(kModelFormatVersion)) {
    throw ModelFormatError(Kind::kUnknownVersion,
                           "unsupported model format version '" +
                               magic.substr(prefix.size()) + "'");
  }

  Model m;
  const size_t config_keys = config_entries(TrainConfig{}).size();
  for (size_t i = 0; i < config_keys; ++i) {
    const std::string line = r.next();
    const size_t t1 = line.find('\t');
    const size_t t2 = line.find('\t', t1 == std::string::npos ? 0 : t1 + 1);
    if (line.compare(0, 7, "config\t") != 0 || t2 == std::string::npos) {
      r.fail("expected config<TAB>key<TAB>value");
    }
    try {
      set_config_value(m.config, line.substr(t1 + 1, t2 - t1 - 1),
                       line.substr(t2 + 1));
    } catch (const DomainError& e) {
      r.fail(e.what());
    }
  }

  {
    const size_t n = r.section("tags");
    std::vector<std::string> labels;
    for (size_t i = 0; i < n; ++i) labels.push_back(r.next());
    m.tags = TagSet(std::move(labels));
  }
  {
    std::vector<char32_t> scalars;
    for (const auto& e : read_vocab_section(r, "chars")) {
      unsigned value = 0;
      if (e.size() < 3 || e.compare(0, 2, "U+") != 0 ||
          std::from_chars(e.data() + 2, e.data() + e.size(), value, 16).ptr !=
              e.data() + e.size()) {
        r.fail("bad character entry '" + e + "'");
      }
      scalars.push_back(static_cast<char32_t>(value));
    }
    m.featurizer.chars = CharVocab(std::move(scalars));
  }
  Vocabulary phoneme_vocab(read_vocab_section(r, "phonemes"));
  m.featurizer.words = Vocabulary(read_vocab_section(r, "words"));
  {
    const size_t n = r.section("lexicon");
    std::unordered_map<std::string, std::vector<std::string>> prons;
    for (size_t i = 0; i < n; ++i) {
      const std::string line = r.next();
      const size_t tab = line.find('\t');
      if (tab == std::string::npos) r.fail("bad lexicon entry");
      prons.emplace(line.substr(0, tab),
                    split_whitespace(std::string_view(line).substr(tab + 1)));
    }
    m.featurizer.lexicon =
        PhonemeLexicon(std::move(prons), std::move(phoneme_vocab));
  }

  const size_t n_params = r.section("params");
  std::vector<std::pair<std::string, std::vector<size_t>>> declared;
  size_t total = 0;
  for (size_t i = 0; i < n_params; ++i) {
    const std::string line = r.next();
    const size_t tab = line.find('\t');
    if (tab == std::string::npos) r.fail("bad parameter declaration");
    auto dims = parse_dims(r, line.substr(tab + 1));
    size_t count = 1;
    for (size_t d : dims) count *= d;
    total += count;
    declared.emplace_back(line.substr(0, tab), std::move(dims));
  }
  if (r.next() != "end") r.fail("expected 'end'");

  std::vector<unsigned char> blob(total * 8);
  in.read(reinterpret_cast<char*>(blob.data()),
          static_cast<std::streamsize>(blob.size()));
  if (static_cast<size_t>(in.gcount()) != blob.size()) {
    throw ModelFormatError(Kind::kTruncated,
                           "model data truncated: expected " +
                               std::to_string(blob.size()) + " bytes, got " +
                               std::to_string(in.gcount()));
  }
  if (in.peek() != std::char_traits<char>::eof()) {
    throw ModelFormatError(Kind::kMalformed,
                           "unexpected bytes after parameter data");
  }

  size_t offset = 0;
  for (auto& [name, dims] : declared) {
    Tensor t(dims, 0.0);
    for (double& x : t.data()) {
      x = read_le(blob.data() + offset);
      offset += 8;
    }
    m.params.add(name, std::move(t));
  }

  try {
    m.bind();
  } catch (const ModelFormatError&) {
    throw;
  } catch (const Error& e) {
    throw ModelFormatError(Kind::kShapeMismatch, e.what());
  }
  return m;
}

std::vector<double> parse_vector(const std::vector<std::string>& fields,
                                 const std::string& where) {
  std::vector<double> v;
  v.reserve(fields.size() - 1);
  for (size_t i = 1; i < fields.size(); ++i) {
    const std::string& f = fields[i];
    double x = 0.0;
    auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), x);
    if (ec != std::errc() || ptr != f.data() + f.size() || !std::isfinite(x)) {
      throw DataError(where + ": bad number '" + f + "'");
    }
    v.push_back(x);
  }
  return v;
}

size_t embedding_elements(const Model& m) {
  size_t n = 0;
  for (ParamId i = 0; i < m.params.size(); ++i) {
    const std::string& name = m.params.name(i);
    if (name.size() >= 6 && name.compare(name.size() - 6, 6, ".embed") == 0) {
      n += m.params.value(i).size();
    }
  }
  return n;
}

}  // namespace

void save_model(const Model& model, std::ostream& out) {
  out << kMagic << '\t' << kModelFormatVersion << '\n';
  for (const auto& [k, v] : config_entries(model.config)) {
    out << "config\t" << k << '\t' << v << '\n';
  }
  out << "tags\t" << model.tags.size() << '\n';
  for (const auto& l : model.tags.labels()) out << l << '\n';

  const auto& scalars = model.featurizer.chars.scalars();
  out << "chars\t" << scalars.size() + 2 << '\n'
      << kPadToken << '\n'
      << kUnkToken << '\n';
  for (char32_t cp : scalars) out << code_point_name(cp) << '\n';

  const auto& phonemes = model.featurizer.lexicon.vocab().entries();
  out << "phonemes\t" << phonemes.size() << '\n';
  for (const auto& p : phonemes) out << p << '\n';

  const auto& words = model.featurizer.words.entries();
  out << "words\t" << words.size() << '\n';
  for (const auto& w : words) out << w << '\n';

  const auto lex_words = model.featurizer.lexicon.sorted_words();
  out << "lexicon\t" << lex_words.size() << '\n';
  for (const auto& w : lex_words) {
    out << w << '\t';
    const auto* seq = model.featurizer.lexicon.find(w);
    for (size_t i = 0; i < seq->size(); ++i) {
      out << (i ? " " : "") << (*seq)[i];
    }
    out << '\n';
  }

  out << "params\t" << model.params.size() << '\n';
  for (ParamId i = 0; i < model.params.size(); ++i) {
    out << model.params.name(i) << '\t'
        << shape_string(model.params.value(i).shape()) << '\n';
  }
  out << "end\n";
  for (ParamId i = 0; i < model.params.size(); ++i) {
    for (double x : model.params.value(i).data()) write_le(out, x);
  }
}

void save_model(const Model& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write model " + path);
  save_model(model, out);
  out.flush();
  if (!out) throw DataError("error writing model " + path);
}

Model load_model(std::istream& in) { return load_model_impl(in); }

Model load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open model " + path);
  return load_model_impl(in);
}

WordVectors parse_word_vectors(std::istream& in, const std::string& source,
                               size_t dim) {
  if (dim == 0) throw DomainError("word vector dimension must be positive");
  WordVectors wv;
  wv.dim = dim;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto fields = split_whitespace(line);
    if (fields.empty()) continue;
    const std::string where = source + ":" + std::to_string(line_no);
    if (fields.size() != dim + 1) {
      throw DataError(where + ": expected " + std::to_string(dim) +
                      " values, got " + std::to_string(fields.size() - 1));
    }
    if (!utf8::is_valid(fields[0])) throw DataError(where + ": invalid UTF-8");
    std::string word = utf8::to_lower(fields[0]);
    auto values = parse_vector(fields, where);
    auto [it, inserted] = wv.vectors.emplace(word, values);
    if (!inserted) {
      it->second = std::move(values);
      wv.warnings.push_back(where + ": duplicate vector for '" + word +
                            "', keeping the last one");
    }
  }
  return wv;
}

WordVectors read_word_vectors(const std::string& path, size_t dim) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open word vectors " + path);
  return parse_word_vectors(in, path, dim);
}

size_t apply_word_vectors(Model& model, const WordVectors& vectors) {
  if (!model.encoders.word_table) return 0;
  Tensor& table = model.params.value(*model.encoders.word_table);
  if (vectors.dim != table.cols()) {
    throw DataError("word vectors have dimension " +
                    std::to_string(vectors.dim) + ", model expects " +
                    std::to_string(table.cols()));
  }
  size_t replaced = 0;
  const auto& entries = model.featurizer.words.entries();
  for (size_t id = 2; id < entries.size(); ++id) {
    auto it = vectors.vectors.find(entries[id]);
    if (it == vectors.vectors.end()) continue;
    auto row = table.row(id);
    std::copy(it->second.begin(), it->second.end(), row.begin());
    ++replaced;
  }
  return replaced;
}

VocabReport vocab_report(const Featurizer& featurizer, const TagSet& tags,
                         const TrainConfig& config) {
  VocabReport r;
  r.chars = featurizer.chars.size();
  r.phonemes = featurizer.lexicon.vocab().size();
  r.bytes = ByteCodec::kVocabSize;
  r.words = featurizer.words.size();
  r.subword_total = r.chars + r.phonemes + r.bytes;

  const std::vector<Unit> units =
      config.units.empty()
          ? std::vector<Unit>(kAllUnits.begin(), kAllUnits.end())
          : config.units;
  auto count = [&](const char* name, std::vector<Unit> u, bool word) {
    TrainConfig c = config;
    c.units = std::move(u);
    c.word_embeddings = word;
    Rng rng(0);
    Model m = Model::Create(c, featurizer, tags, rng);
    return ParamCount{name, m.params.total_elements(), embedding_elements(m)};
  };
  r.params.push_back(count("subwords_only", units, false));
  r.params.push_back(count("word_only", {}, true));
  r.params.push_back(count("combined", units, true));
  r.word_embedding_delta = r.params[2].embedding - r.params[0].embedding;
  return r;
}

VocabReport vocab_report(const Model& model) {
  return vocab_report(model.featurizer, model.tags, model.config);
}

std::string format_vocab_report(const VocabReport& r) {
  std::ostringstream out;
  out << "vocabulary\tsize\n"
      << "char\t" << r.chars << '\n'
      << "phoneme\t" << r.phonemes << '\n'
      << "byte\t" << r.bytes << '\n'
      << "subword_total\t" << r.subword_total << '\n'
      << "word\t" << r.words << '\n'
      << "configuration\tparams\tembedding_params\n";
  for (const auto& p : r.params) {
    out << p.configuration << '\t' << p.total << '\t' << p.embedding << '\n';
  }
  out << "word_embedding_delta\t" << r.word_embedding_delta << '\n';
  return out.str();
}

}  // namespace subner
