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

#include "subner/corpus.h"

#include <fstream>
#include <istream>
#include <ostream>
#include <set>

#include "subner/error.h"
#include "subner/utf8.h"

namespace subner {

size_t Corpus::token_count() const {
  size_t n = 0;
  for (const auto& u : utterances) n += u.size();
  return n;
}

bool is_bio2_label(std::string_view label) {
  if (label == "O") return true;
  if (label.size() < 3 || label[1] != '-') return false;
  return label[0] == 'B' || label[0] == 'I';
}

std::string_view entity_type(std::string_view label) {
  if (label.size() < 3) return {};
  return label.substr(2);
}

bool is_well_formed_bio2(const std::vector<std::string>& labels) {
  std::string_view prev = "O";
  for (const auto& l : labels) {
    if (!is_bio2_label(l)) return false;
    if (l[0] == 'I' &&
        (prev == "O" || entity_type(prev) != entity_type(l))) {
      return false;
    }
    prev = l;
  }
  return true;
}

TagSet::TagSet(std::vector<std::string> labels) : labels_(std::move(labels)) {
  for (size_t i = 0; i < labels_.size(); ++i) {
    if (!is_bio2_label(labels_[i])) {
      throw DataError("tag set label is not BIO2: " + labels_[i]);
    }
    if (!index_.emplace(labels_[i], i).second) {
      throw DataError("duplicate tag set label: " + labels_[i]);
    }
  }
  for (const auto& l : labels_) {
    if (l == "O") continue;
    std::string partner = (l[0] == 'B' ? "I-" : "B-") + l.substr(2);
    if (!index_.count(partner)) {
      throw DataError("tag set has " + l + " without " + partner);
    }
  }
}

TagSet TagSet::FromCorpus(const Corpus& corpus) {
  std::set<std::string> types;
  for (const auto& u : corpus.utterances) {
    for (const auto& l : u.labels) {
      if (l != "O") types.emplace(entity_type(l));
    }
  }
  std::vector<std::string> labels = {"O"};
  for (const auto& t : types) {
    labels.push_back("B-" + t);
    labels.push_back("I-" + t);
  }
  return TagSet(std::move(labels));
}

bool TagSet::contains(const std::string& label) const {
  return index_.count(label) > 0;
}

size_t TagSet::id(const std::string& label) const {
  auto it = index_.find(label);
  if (it == index_.end()) throw DataError("label not in tag set: " + label);
  return it->second;
}

std::vector<std::string> split_whitespace(std::string_view line) {
  std::vector<std::string> out;
  size_t i = 0;
  auto is_space = [](char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' ||
           c == '\v';
  };
  while (i < line.size()) {
    while (i < line.size() && is_space(line[i])) ++i;
    size_t start = i;
    while (i < line.size() && !is_space(line[i])) ++i;
    if (i > start) out.emplace_back(line.substr(start, i - start));
  }
  return out;
}

Corpus parse_corpus(std::istream& in, const std::string& source,
                    const CorpusReadOptions& options) {
  Corpus corpus;
  corpus.split = options.split;
  TaggedUtterance current;
  size_t first_line_of_current = 0;
  std::string line;
  size_t line_no = 0;

  auto flush = [&]() {
    if (current.tokens.empty()) return;
    if (options.strict_sequences && !is_well_formed_bio2(current.labels)) {
      throw DataError(source + ":" + std::to_string(first_line_of_current) +
                      ": utterance is not well-formed BIO2 (I- without B-)");
    }
    corpus.utterances.push_back(std::move(current));
    current = {};
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) {
      flush();
      continue;
    }
    const auto where = source + ":" + std::to_string(line_no);
    const size_t tab = line.find('\t');
    std::string token, label;
    if (tab == std::string::npos) {
      if (!options.allow_unlabeled) {
        throw DataError(where + ": expected token<TAB>label");
      }
      token = line;
      label = "O";
    } else {
      token = line.substr(0, tab);
      label = line.substr(tab + 1);
      if (label.find('\t') != std::string::npos) {
        throw DataError(where + ": more than two columns");
      }
    }
    if (token.empty() || token.find(' ') != std::string::npos) {
      throw DataError(where + ": token must be non-empty without spaces");
    }
    if (!is_bio2_label(label)) {
      throw DataError(where + ": label '" + label + "' is not BIO2");
    }
    if (!utf8::is_valid(token)) throw DataError(where + ": invalid UTF-8");
    if (current.tokens.empty()) first_line_of_current = line_no;
    current.tokens.push_back(utf8::to_lower(token));
    current.labels.push_back(std::move(label));
  }
  flush();
  if (corpus.utterances.empty()) {
    throw DataError(source + ": corpus is empty");
  }
  return corpus;
}

Corpus read_corpus(const std::string& path, const CorpusReadOptions& options) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open corpus " + path);
  return parse_corpus(in, path, options);
}

void write_corpus(std::ostream& out, const Corpus& corpus) {
  for (const auto& u : corpus.utterances) {
    for (size_t i = 0; i < u.size(); ++i) {
      out << u.tokens[i] << '\t' << u.labels[i] << '\n';
    }
    out << '\n';
  }
}

void write_corpus(const Corpus& corpus, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write corpus " + path);
  write_corpus(out, corpus);
  if (!out) throw DataError("error writing corpus " + path);
}

}  // namespace subner
