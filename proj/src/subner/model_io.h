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

// Model container, pre-trained word vectors and the vocabulary report.
//
// Container layout: a UTF-8 text header terminated by the line "end", then
// the raw little-endian float64 data of every parameter in header order.
//
//   subner-model<TAB>1
//   config<TAB><key><TAB><value>          one line per TrainConfig key
//   tags<TAB><n>                          followed by n label lines
//   chars<TAB><n>                         n lines, U+XXXX in id order
//   phonemes<TAB><n>                      n lines, marked tokens in id order
//   words<TAB><n>                         n lines, words in id order
//   lexicon<TAB><n>                       n lines, word<TAB>tok tok ...
//   params<TAB><n>                        n lines, name<TAB>dims (e.g. 35x35)
//   end
//
// Vocabulary sections list every id, reserved PAD/UNK included.

#ifndef SUBNER_MODEL_IO_H_
#define SUBNER_MODEL_IO_H_

#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

#include "subner/model.h"

namespace subner {

inline constexpr int kModelFormatVersion = 1;

void save_model(const Model& model, std::ostream& out);
void save_model(const Model& model, const std::string& path);
// Throws ModelFormatError (truncated / unknown version / shape mismatch /
// malformed). Nothing is returned on failure.
Model load_model(std::istream& in);
Model load_model(const std::string& path);

struct WordVectors {
  size_t dim = 0;
  std::unordered_map<std::string, std::vector<double>> vectors;
  std::vector<std::string> warnings;
};

// `word v1 ... v_dim` per line. Words are lowercased; the last duplicate
// wins and leaves a warning.
WordVectors parse_word_vectors(std::istream& in, const std::string& source,
                               size_t dim);
WordVectors read_word_vectors(const std::string& path, size_t dim);

// Overwrites rows of the word-embedding table for words of the model's word
// vocabulary. Returns the number of rows replaced.
size_t apply_word_vectors(Model& model, const WordVectors& vectors);

struct ParamCount {
  std::string configuration;
  size_t total = 0;
  size_t embedding = 0;  // sum over embedding tables
};

struct VocabReport {
  size_t chars = 0;
  size_t phonemes = 0;
  size_t bytes = 0;
  size_t words = 0;
  size_t subword_total = 0;  // chars + phonemes + bytes
  std::vector<ParamCount> params;  // subwords-only, word-only, combined
  // Embedding parameters of "combined" minus "subwords-only".
  size_t word_embedding_delta = 0;
};

// Parameter counts are taken from freshly constructed models of each
// configuration over the same vocabularies and tag set.
VocabReport vocab_report(const Featurizer& featurizer, const TagSet& tags,
                         const TrainConfig& config);
VocabReport vocab_report(const Model& model);
std::string format_vocab_report(const VocabReport& report);

}  // namespace subner

#endif  // SUBNER_MODEL_IO_H_
