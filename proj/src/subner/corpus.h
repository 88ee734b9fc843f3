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

// Tagged corpora in a CoNLL-style two-column format:
//
//   play<TAB>O
//   queen<TAB>B-artist
//   <blank line between utterances>
//
// Tokens are lowercased on read. Labels follow BIO2.

#ifndef SUBNER_CORPUS_H_
#define SUBNER_CORPUS_H_

#include <iosfwd>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace subner {

struct TaggedUtterance {
  std::vector<std::string> tokens;
  std::vector<std::string> labels;

  size_t size() const { return tokens.size(); }
  friend bool operator==(const TaggedUtterance&,
                         const TaggedUtterance&) = default;
};

struct Corpus {
  std::vector<TaggedUtterance> utterances;
  std::string split;  // "train", "dev", "test" or free-form

  size_t size() const { return utterances.size(); }
  size_t token_count() const;
  friend bool operator==(const Corpus&, const Corpus&) = default;
};

// "O", "B-<type>" or "I-<type>" with a non-empty type.
bool is_bio2_label(std::string_view label);
// Entity type of a B-/I- label, empty for "O".
std::string_view entity_type(std::string_view label);
// Every I-X continues a B-X or I-X of the same type.
bool is_well_formed_bio2(const std::vector<std::string>& labels);

// Ordered label inventory: "O" first, then B-X, I-X for each entity type in
// sorted order.
class TagSet {
 public:
  TagSet() = default;
  explicit TagSet(std::vector<std::string> labels);
  static TagSet FromCorpus(const Corpus& corpus);

  size_t size() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(size_t id) const { return labels_.at(id); }
  bool contains(const std::string& label) const;
  // Throws DataError for labels outside the set.
  size_t id(const std::string& label) const;

  friend bool operator==(const TagSet& a, const TagSet& b) {
    return a.labels_ == b.labels_;
  }

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, size_t> index_;
};

struct CorpusReadOptions {
  std::string split;
  // Require BIO2 sequence well-formedness (not just label syntax). Gold data
  // is strict; model predictions may contain I-X after O.
  bool strict_sequences = true;
  // Accept lines without a label column (labels become "O").
  bool allow_unlabeled = false;
};

Corpus parse_corpus(std::istream& in, const std::string& source,
                    const CorpusReadOptions& options = {});
Corpus read_corpus(const std::string& path,
                   const CorpusReadOptions& options = {});
void write_corpus(std::ostream& out, const Corpus& corpus);
void write_corpus(const Corpus& corpus, const std::string& path);

// Splits on ASCII whitespace.
std::vector<std::string> split_whitespace(std::string_view line);

}  // namespace subner

#endif  // SUBNER_CORPUS_H_
