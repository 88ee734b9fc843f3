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

#include "support/synthetic.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <stdexcept>

namespace synth {

namespace {

using subner::Corpus;
using subner::TaggedUtterance;

const std::vector<std::string> kOnsets = {"b", "d", "f", "g", "k", "l",
                                          "m", "n", "p", "r", "s", "t",
                                          "v", "z", "sh", "ch", "th"};
const std::vector<std::string> kVowels = {"a", "e", "i", "o", "u",
                                          "a", "e", "i", "o", "ö", "é"};
const std::vector<std::string> kCodas = {"", "", "", "n", "r", "l", "s", "k"};

struct EntityType {
  std::string name;
  std::vector<std::string> suffixes;
};

const std::vector<EntityType> kTypes = {
    {"artist", {"ski", "mond"}},
    {"city", {"burg", "ville"}},
    {"song", {"ella", "ita"}},
};

class Generator {
 public:
  explicit Generator(uint64_t seed) : rng_(seed) {}

  size_t uniform(size_t lo, size_t hi) {  // inclusive
    return std::uniform_int_distribution<size_t>(lo, hi)(rng_);
  }
  double real() { return std::uniform_real_distribution<double>(0, 1)(rng_); }
  template <typename T>
  const T& pick(const std::vector<T>& v) {
    return v[uniform(0, v.size() - 1)];
  }
  std::mt19937_64& rng() { return rng_; }

  std::string stem(size_t min_syl, size_t max_syl) {
    std::string s;
    const size_t n = uniform(min_syl, max_syl);
    for (size_t i = 0; i < n; ++i) s += pick(kOnsets) + pick(kVowels) + pick(kCodas);
    return s;
  }

  static bool has_entity_suffix(const std::string& w) {
    for (const auto& t : kTypes) {
      for (const auto& suf : t.suffixes) {
        if (w.size() >= suf.size() &&
            w.compare(w.size() - suf.size(), suf.size(), suf) == 0) {
          return true;
        }
      }
    }
    return false;
  }

  // A word never produced before. Type < 0 makes a filler.
  std::string fresh_word(int type) {
    for (;;) {
      std::string w;
      if (type < 0) {
        w = stem(1, 3);
        if (has_entity_suffix(w)) continue;
      } else {
        w = stem(1, 2) + pick(kTypes[type].suffixes);
      }
      if (used_.insert(w).second) return w;
    }
  }

  const std::set<std::string>& used() const { return used_; }

 private:
  std::mt19937_64 rng_;
  std::set<std::string> used_;
};

struct Pools {
  std::vector<std::string> fillers;
  std::vector<std::vector<std::string>> entities;  // per type
};

TaggedUtterance make_utterance(Generator& g, const Pools& pools,
                               const Options& o) {
  const size_t n_fill = g.uniform(o.min_fillers, o.max_fillers);
  const size_t n_ent =
      std::min(g.uniform(1, std::max<size_t>(1, o.max_entities)), n_fill + 1);
  // Distinct gaps between fillers keep spans apart.
  std::vector<size_t> gaps(n_fill + 1);
  for (size_t i = 0; i < gaps.size(); ++i) gaps[i] = i;
  std::shuffle(gaps.begin(), gaps.end(), g.rng());
  std::vector<bool> has_entity(n_fill + 1, false);
  for (size_t i = 0; i < n_ent; ++i) has_entity[gaps[i]] = true;

  TaggedUtterance u;
  for (size_t gap = 0; gap <= n_fill; ++gap) {
    if (has_entity[gap]) {
      const size_t type = g.uniform(0, kTypes.size() - 1);
      const size_t len = g.real() < 0.6 ? 1 : 2;
      for (size_t k = 0; k < len; ++k) {
        u.tokens.push_back(g.pick(pools.entities[type]));
        u.labels.push_back((k == 0 ? "B-" : "I-") + kTypes[type].name);
      }
    }
    if (gap < n_fill) {
      u.tokens.push_back(g.pick(pools.fillers));
      u.labels.push_back("O");
    }
  }
  return u;
}

int type_of_label(const std::string& label) {
  if (label == "O") return -1;
  const std::string name = label.substr(2);
  for (size_t t = 0; t < kTypes.size(); ++t) {
    if (kTypes[t].name == name) return static_cast<int>(t);
  }
  throw std::logic_error("unknown synthetic label " + label);
}

}  // namespace

std::vector<std::string> pseudo_g2p(const std::string& word) {
  static const std::map<std::string, std::vector<std::string>> kDigraphs = {
      {"sh", {"S"}}, {"ch", {"tS"}}, {"th", {"T"}}, {"ck", {"k"}},
      {"ö", {"2"}},  {"é", {"e"}},   {"ü", {"y"}},  {"ä", {"{"}}};
  static const std::map<char, std::vector<std::string>> kSingles = {
      {'a', {"a"}},   {'b', {"b"}}, {'c', {"k"}},   {'d', {"d"}},
      {'e', {"E"}},   {'f', {"f"}}, {'g', {"g"}},   {'h', {"h"}},
      {'i', {"i"}},   {'j', {"dZ"}}, {'k', {"k"}},  {'l', {"l"}},
      {'m', {"m"}},   {'n', {"n"}}, {'o', {"O"}},   {'p', {"p"}},
      {'q', {"k"}},   {'r', {"r\\"}}, {'s', {"s"}}, {'t', {"t"}},
      {'u', {"u"}},   {'v', {"v"}}, {'w', {"w"}},   {'x', {"k", "s"}},
      {'y', {"j"}},   {'z', {"z"}}};
  std::vector<std::string> out;
  size_t i = 0;
  while (i < word.size()) {
    bool matched = false;
    for (const auto& [graph, phones] : kDigraphs) {
      if (word.compare(i, graph.size(), graph) == 0) {
        out.insert(out.end(), phones.begin(), phones.end());
        i += graph.size();
        matched = true;
        break;
      }
    }
    if (matched) continue;
    auto it = kSingles.find(word[i]);
    if (it != kSingles.end()) out.insert(out.end(), it->second.begin(), it->second.end());
    ++i;
  }
  if (out.empty()) out.push_back("@");
  return out;
}

Data generate(const Options& o) {
  Generator g(o.seed);
  Pools pools;
  for (size_t i = 0; i < o.filler_pool; ++i) pools.fillers.push_back(g.fresh_word(-1));
  pools.entities.resize(kTypes.size());
  for (size_t t = 0; t < kTypes.size(); ++t) {
    for (size_t i = 0; i < o.entity_pool; ++i) {
      pools.entities[t].push_back(g.fresh_word(static_cast<int>(t)));
    }
  }

  Data d;
  for (const auto& t : kTypes) d.entity_types.push_back(t.name);
  d.train.split = "train";
  d.dev.split = "dev";
  d.test.split = "test";
  for (size_t i = 0; i < o.train_utterances; ++i) {
    d.train.utterances.push_back(make_utterance(g, pools, o));
  }
  for (size_t i = 0; i < o.dev_utterances; ++i) {
    d.dev.utterances.push_back(make_utterance(g, pools, o));
  }

  // Test draws seen words only, so the fresh swaps are the only OOV tokens.
  std::set<std::string> seen;
  for (const auto& u : d.train.utterances) seen.insert(u.tokens.begin(), u.tokens.end());
  Pools seen_pools;
  auto keep_seen = [&](const std::vector<std::string>& pool) {
    std::vector<std::string> out;
    for (const auto& w : pool) {
      if (seen.count(w)) out.push_back(w);
    }
    if (out.empty()) throw std::runtime_error("train split too small for test pools");
    return out;
  };
  seen_pools.fillers = keep_seen(pools.fillers);
  for (const auto& p : pools.entities) seen_pools.entities.push_back(keep_seen(p));
  for (size_t i = 0; i < o.test_utterances; ++i) {
    d.test.utterances.push_back(make_utterance(g, seen_pools, o));
  }

  std::vector<std::pair<size_t, size_t>> positions;
  for (size_t u = 0; u < d.test.size(); ++u) {
    for (size_t t = 0; t < d.test.utterances[u].size(); ++t) positions.emplace_back(u, t);
  }
  const size_t n_oov = static_cast<size_t>(
      std::llround(o.test_oov_rate * static_cast<double>(positions.size())));
  std::shuffle(positions.begin(), positions.end(), g.rng());
  std::set<size_t> oov_utts;
  for (size_t i = 0; i < n_oov; ++i) {
    auto [u, t] = positions[i];
    auto& utt = d.test.utterances[u];
    utt.tokens[t] = g.fresh_word(type_of_label(utt.labels[t]));
    oov_utts.insert(u);
  }
  d.test_oov_tokens = n_oov;
  d.test_oov_utterances = oov_utts.size();

  for (const auto& w : g.used()) d.lexicon.push_back({w, pseudo_g2p(w)});
  return d;
}

void write_lexicon(const std::vector<subner::RawLexiconEntry>& lexicon,
                   const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  for (const auto& e : lexicon) {
    out << e.word << '\t';
    for (size_t i = 0; i < e.phonemes.size(); ++i) {
      out << (i ? " " : "") << e.phonemes[i];
    }
    out << '\n';
  }
}

}  // namespace synth
