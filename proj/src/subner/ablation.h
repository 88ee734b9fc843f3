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

// Grid of unit subsets with and without word embeddings, plus word-only.

#ifndef SUBNER_ABLATION_H_
#define SUBNER_ABLATION_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "subner/training.h"

namespace subner {

struct AblationSetting {
  std::vector<Unit> units;
  bool word_embeddings = false;

  // "subwords", "combined" or "word".
  std::string group() const;
  // "char+phoneme", "word" for word-only.
  std::string name() const;
};

// Every nonempty subset of `units` (by size, then in canonical unit order)
// without word embeddings, the same subsets with word embeddings, then the
// word-only model.
std::vector<AblationSetting> ablation_grid(const std::vector<Unit>& units);

// splitmix64 of (master, index, repeat); independent of execution order.
uint64_t derive_seed(uint64_t master, size_t index, size_t repeat);

struct AblationRow {
  AblationSetting setting;
  std::vector<double> dev_f1;   // one per repeat
  std::vector<double> test_f1;  // empty without a test corpus
  double mean_dev_f1 = 0.0;
  double mean_test_f1 = 0.0;
};

struct AblationOptions {
  size_t repeats = 1;
  const Corpus* test = nullptr;
  TrainOptions train;
};

std::vector<AblationRow> run_ablation(const TrainConfig& base,
                                      const std::vector<Unit>& units,
                                      const Corpus& train_corpus,
                                      const Corpus& dev_corpus,
                                      const AblationOptions& options);

// Results matrix (one row per setting), a blank line, then the comparison
// of the best subword-only, word-level and best combined settings.
// Same, over an explicit list. Seeds derive from each setting's position in
// `settings`.
std::vector<AblationRow> run_settings(const TrainConfig& base,
                                      const std::vector<AblationSetting>& settings,
                                      const Corpus& train_corpus,
                                      const Corpus& dev_corpus,
                                      const AblationOptions& options);

std::string format_ablation(const std::vector<AblationRow>& rows);

}  // namespace subner

#endif  // SUBNER_ABLATION_H_
