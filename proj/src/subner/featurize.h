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

// Subword featurization: characters, marked phonemes and UTF-8 bytes.

#ifndef SUBNER_FEATURIZE_H_
#define SUBNER_FEATURIZE_H_

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "subner/corpus.h"

namespace subner {

using Id = int;

// Every string vocabulary reserves PAD = 0 and UNK = 1.
inline constexpr Id kPadId = 0;
inline constexpr Id kUnkId = 1;
inline constexpr const char* kPadToken = "<PAD>";
inline constexpr const char* kUnkToken = "<UNK>";

// String -> dense id map with PAD and UNK reserved. Entries after the
// reserved ids are kept in insertion order, which callers make sorted.
class Vocabulary {
 public:
  Vocabulary();
  // `entries` must not include the reserved tokens; duplicates throw.
  explicit Vocabulary(const std::vector<std::string>& entries);

  size_t size() const { return entries_.size(); }
  // kUnkId when absent.
  Id lookup(std::string_view entry) const;
  bool contains(std::string_view entry) const;
  const std::string& entry(Id id) const { return entries_.at(id); }
  // Entries in id order, reserved tokens included.
  const std::vector<std::string>& entries() const { return entries_; }

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) {
    return a.entries_ == b.entries_;
  }

 private:
  std::vector<std::string> entries_;
  std::unordered_map<std::string, Id> index_;
};

// Unicode scalar value -> id; PAD = 0, UNK = 1, then scalars ascending.
class CharVocab {
 public:
  CharVocab() = default;
  explicit CharVocab(std::vector<char32_t> scalars);

  size_t size() const { return scalars_.size() + 2; }
  Id lookup(char32_t cp) const;
  // Scalars in id order starting at id 2.
  const std::vector<char32_t>& scalars() const { return scalars_; }

  friend bool operator==(const CharVocab& a, const CharVocab& b) {
    return a.scalars_ == b.scalars_;
  }

 private:
  std::vector<char32_t> scalars_;
  std::unordered_map<char32_t, Id> index_;
};

// Distinct scalar values of all training tokens. Throws on an empty corpus.
CharVocab build_char_vocab(const Corpus& train);

// One id per Unicode scalar value; unseen scalars map to UNK.
std::vector<Id> chars_of(std::string_view word, const CharVocab& vocab);

// Bytes 0..255 are their own ids; PAD is 256.
struct ByteCodec {
  static constexpr Id kPad = 256;
  static constexpr size_t kVocabSize = 257;
};

std::vector<Id> bytes_of(std::string_view word);

struct RawLexiconEntry {
  std::string word;
  std::vector<std::string> phonemes;  // unmarked X-SAMPA tokens
};

// Reads `word<TAB>ph ph ...` lines; '#' lines and blank lines are skipped.
std::vector<RawLexiconEntry> parse_lexicon(std::istream& in,
                                           const std::string& source);
std::vector<RawLexiconEntry> read_lexicon(const std::string& path);

// Word -> marked phoneme sequence, plus the vocabulary of marked tokens.
class PhonemeLexicon {
 public:
  PhonemeLexicon() = default;
  PhonemeLexicon(std::unordered_map<std::string, std::vector<std::string>>
                     pronunciations,
                 Vocabulary vocab);

  const Vocabulary& vocab() const { return vocab_; }
  size_t entry_count() const { return pronunciations_.size(); }
  // Marked tokens for the lowercased word, or nullptr.
  const std::vector<std::string>* find(std::string_view word) const;
  // Words sorted, for serialization.
  std::vector<std::string> sorted_words() const;

  friend bool operator==(const PhonemeLexicon& a, const PhonemeLexicon& b) {
    return a.pronunciations_ == b.pronunciations_ && a.vocab_ == b.vocab_;
  }

 private:
  std::unordered_map<std::string, std::vector<std::string>> pronunciations_;
  Vocabulary vocab_;
};

// Appends "_B" to the first phoneme and "_E" to the last; a one-phoneme word
// gets "_BE". Words are lowercased. Duplicate words must agree.
PhonemeLexicon compile_lexicon(const std::vector<RawLexiconEntry>& raw);

// Marked phoneme ids, or [UNK] for words outside the lexicon.
std::vector<Id> phonemes_of(std::string_view word,
                            const PhonemeLexicon& lexicon);

// Word types of the training split, sorted.
Vocabulary build_word_vocab(const Corpus& train);

struct WordFeatures {
  std::vector<Id> chars;
  std::vector<Id> phonemes;
  std::vector<Id> bytes;
  std::optional<Id> word;

  friend bool operator==(const WordFeatures&, const WordFeatures&) = default;
};

// Frozen vocabularies needed to featurize any token.
struct Featurizer {
  CharVocab chars;
  PhonemeLexicon lexicon;
  Vocabulary words;
  bool with_word_ids = false;

  WordFeatures featurize(std::string_view word) const;
  std::vector<WordFeatures> featurize(
      const std::vector<std::string>& tokens) const;

  friend bool operator==(const Featurizer&, const Featurizer&) = default;
};

// Feature bundle used for padded batch positions.
WordFeatures padding_features(bool with_word_ids);

}  // namespace subner

#endif  // SUBNER_FEATURIZE_H_
