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

#include "subner/featurize.h"

#include <algorithm>
#include <fstream>
#include <istream>
#include <set>

#include "subner/error.h"
#include "subner/utf8.h"

namespace subner {

Vocabulary::Vocabulary() : Vocabulary(std::vector<std::string>{}) {}

Vocabulary::Vocabulary(const std::vector<std::string>& entries) {
  entries_ = {kPadToken, kUnkToken};
  entries_.insert(entries_.end(), entries.begin(), entries.end());
  for (size_t i = 2; i < entries_.size(); ++i) {
    if (!index_.emplace(entries_[i], static_cast<Id>(i)).second) {
      throw DataError("duplicate vocabulary entry: " + entries_[i]);
    }
  }
}

Id Vocabulary::lookup(std::string_view entry) const {
  auto it = index_.find(std::string(entry));
  return it == index_.end() ? kUnkId : it->second;
}

bool Vocabulary::contains(std::string_view entry) const {
  return index_.count(std::string(entry)) > 0;
}

CharVocab::CharVocab(std::vector<char32_t> scalars)
    : scalars_(std::move(scalars)) {
  for (size_t i = 0; i < scalars_.size(); ++i) {
    if (!index_.emplace(scalars_[i], static_cast<Id>(i + 2)).second) {
      throw DataError("duplicate character in vocabulary");
    }
  }
}

Id CharVocab::lookup(char32_t cp) const {
  auto it = index_.find(cp);
  return it == index_.end() ? kUnkId : it->second;
}

CharVocab build_char_vocab(const Corpus& train) {
  if (train.utterances.empty()) {
    throw DataError("cannot build a character vocabulary from an empty corpus");
  }
  std::set<char32_t> seen;
  for (const auto& u : train.utterances) {
    for (const auto& tok : u.tokens) {
      for (char32_t cp : utf8::decode(tok)) seen.insert(cp);
    }
  }
  return CharVocab(std::vector<char32_t>(seen.begin(), seen.end()));
}

std::vector<Id> chars_of(std::string_view word, const CharVocab& vocab) {
  if (word.empty()) throw DataError("cannot featurize an empty word");
  std::vector<Id> ids;
  for (char32_t cp : utf8::decode(word)) ids.push_back(vocab.lookup(cp));
  return ids;
}

std::vector<Id> bytes_of(std::string_view word) {
  if (word.empty()) throw DataError("cannot featurize an empty word");
  std::vector<Id> ids;
  ids.reserve(word.size());
  for (char c : word) ids.push_back(static_cast<unsigned char>(c));
  return ids;
}

std::vector<RawLexiconEntry> parse_lexicon(std::istream& in,
                                           const std::string& source) {
  std::vector<RawLexiconEntry> out;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto where = source + ":" + std::to_string(line_no);
    const size_t tab = line.find('\t');
    if (tab == std::string::npos || tab == 0) {
      throw DataError(where + ": expected word<TAB>phonemes");
    }
    RawLexiconEntry e;
    e.word = line.substr(0, tab);
    if (!utf8::is_valid(e.word)) throw DataError(where + ": invalid UTF-8");
    e.phonemes = split_whitespace(std::string_view(line).substr(tab + 1));
    if (e.phonemes.empty()) {
      throw DataError(where + ": empty pronunciation for '" + e.word + "'");
    }
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<RawLexiconEntry> read_lexicon(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open lexicon " + path);
  return parse_lexicon(in, path);
}

PhonemeLexicon::PhonemeLexicon(
    std::unordered_map<std::string, std::vector<std::string>> pronunciations,
    Vocabulary vocab)
    : pronunciations_(std::move(pronunciations)), vocab_(std::move(vocab)) {
  for (const auto& [word, seq] : pronunciations_) {
    for (const auto& tok : seq) {
      if (!vocab_.contains(tok)) {
        throw DataError("phoneme '" + tok + "' of '" + word +
                        "' missing from phoneme vocabulary");
      }
    }
  }
}

const std::vector<std::string>* PhonemeLexicon::find(
    std::string_view word) const {
  auto it = pronunciations_.find(utf8::to_lower(word));
  return it == pronunciations_.end() ? nullptr : &it->second;
}

std::vector<std::string> PhonemeLexicon::sorted_words() const {
  std::vector<std::string> words;
  words.reserve(pronunciations_.size());
  for (const auto& [w, _] : pronunciations_) words.push_back(w);
  std::sort(words.begin(), words.end());
  return words;
}

PhonemeLexicon compile_lexicon(const std::vector<RawLexiconEntry>& raw) {
  std::unordered_map<std::string, std::vector<std::string>> unmarked;
  for (const auto& e : raw) {
    if (e.phonemes.empty()) {
      throw DataError("empty pronunciation for '" + e.word + "'");
    }
    const std::string word = utf8::to_lower(e.word);
    auto [it, inserted] = unmarked.emplace(word, e.phonemes);
    if (!inserted && it->second != e.phonemes) {
      throw DataError("conflicting pronunciations for '" + word + "'");
    }
  }

  std::unordered_map<std::string, std::vector<std::string>> marked;
  std::set<std::string> tokens;
  for (auto& [word, phones] : unmarked) {
    std::vector<std::string> seq = phones;
    if (seq.size() == 1) {
      seq[0] += "_BE";
    } else {
      seq.front() += "_B";
      seq.back() += "_E";
    }
    tokens.insert(seq.begin(), seq.end());
    marked.emplace(word, std::move(seq));
  }
  return PhonemeLexicon(std::move(marked),
                        Vocabulary({tokens.begin(), tokens.end()}));
}

std::vector<Id> phonemes_of(std::string_view word,
                            const PhonemeLexicon& lexicon) {
  const auto* seq = lexicon.find(word);
  if (!seq) return {kUnkId};
  std::vector<Id> ids;
  ids.reserve(seq->size());
  for (const auto& tok : *seq) ids.push_back(lexicon.vocab().lookup(tok));
  return ids;
}

Vocabulary build_word_vocab(const Corpus& train) {
  std::set<std::string> types;
  for (const auto& u : train.utterances) {
    types.insert(u.tokens.begin(), u.tokens.end());
  }
  return Vocabulary({types.begin(), types.end()});
}

WordFeatures Featurizer::featurize(std::string_view word) const {
  WordFeatures f;
  f.chars = chars_of(word, chars);
  f.phonemes = phonemes_of(word, lexicon);
  f.bytes = bytes_of(word);
  if (with_word_ids) f.word = words.lookup(word);
  return f;
}

std::vector<WordFeatures> Featurizer::featurize(
    const std::vector<std::string>& tokens) const {
  std::vector<WordFeatures> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back(featurize(t));
  return out;
}

WordFeatures padding_features(bool with_word_ids) {
  WordFeatures f;
  f.chars = {kPadId};
  f.phonemes = {kPadId};
  f.bytes = {ByteCodec::kPad};
  if (with_word_ids) f.word = kPadId;
  return f;
}

}  // namespace subner
