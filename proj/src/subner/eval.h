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

#ifndef SUBNER_EVAL_H_
#define SUBNER_EVAL_H_

#include <map>
#include <string>
#include <vector>

#include "subner/corpus.h"
#include "subner/featurize.h"

namespace subner {

struct Counts {
  size_t tp = 0;
  size_t fp = 0;
  size_t fn = 0;
};

// Precision, recall and F1 as percentages.
struct PRF {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  size_t tp = 0;
  size_t fp = 0;
  size_t fn = 0;
  // tp/fn keyed by gold label, fp keyed by predicted label.
  std::map<std::string, Counts> per_label;

  static PRF FromCounts(size_t tp, size_t fp, size_t fn);
};

// Micro-averaged per-token scores. A token counts as tp when prediction and
// gold agree on a non-O label; a non-O prediction that disagrees is fp; a
// non-O gold that is not matched is fn. O/O tokens count nowhere.
// `mask`, when given, selects the positions to score (same shape as gold).
PRF per_token_prf(const std::vector<std::vector<std::string>>& predictions,
                  const std::vector<std::vector<std::string>>& gold,
                  const std::vector<std::vector<bool>>* mask = nullptr);

PRF per_token_prf(const Corpus& predictions, const Corpus& gold);

// Unweighted mean of per-label F1 over gold/predicted non-O labels.
double macro_f1(const PRF& prf);

struct OOVReport {
  size_t utterances_with_oov = 0;
  size_t oov_token_count = 0;
  PRF prf_on_oov_utterances;
  PRF prf_on_oov_tokens;
};

// A token is OOV when absent from `train_words` (the frozen training word
// vocabulary). An empty slice yields zero counts.
OOVReport oov_slice(const Corpus& predictions, const Corpus& gold,
                    const Vocabulary& train_words);

// Per-label table followed by the summary lines "P\tR\tF1" and the values.
std::string format_prf_report(const PRF& prf);
std::string format_oov_report(const OOVReport& report);

}  // namespace subner

#endif  // SUBNER_EVAL_H_
