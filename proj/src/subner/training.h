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

// Mini-batch training with dev-set model selection.

#ifndef SUBNER_TRAINING_H_
#define SUBNER_TRAINING_H_

#include <functional>
#include <string>
#include <vector>

#include "subner/eval.h"
#include "subner/model.h"
#include "subner/model_io.h"

namespace subner {

struct FeaturizedUtterance {
  std::vector<WordFeatures> words;
  std::vector<size_t> tags;
};

std::vector<FeaturizedUtterance> featurize_corpus(const Model& model,
                                                  const Corpus& corpus);

// Utterances padded to the longest member. Padded positions carry
// padding_features() and tag 0 and are masked out.
struct Batch {
  std::vector<size_t> members;  // indices into the featurized corpus
  std::vector<std::vector<WordFeatures>> words;
  std::vector<std::vector<size_t>> tags;
  std::vector<std::vector<bool>> mask;

  size_t size() const { return members.size(); }
  size_t max_length() const { return words.empty() ? 0 : words[0].size(); }
};

// Shuffles utterance order with `rng` and groups consecutive utterances
// into batches of at most `batch_size`.
std::vector<Batch> make_batches(const std::vector<FeaturizedUtterance>& data,
                                size_t batch_size, Rng& rng,
                                bool with_word_ids);

// Real positions of batch member `i`.
std::span<const WordFeatures> real_words(const Batch& batch, size_t i);
std::span<const size_t> real_tags(const Batch& batch, size_t i);

// NLL of every batch member, reading real positions only. `seeds` drive the
// per-member dropout masks and are ignored when !training. When `grads` is
// non-null it receives the gradient of the batch loss (mean over members).
// Members run on up to `threads` threads; results are reduced in member
// order, so they do not depend on the thread count.
std::vector<double> batch_losses(const Model& model, const Batch& batch,
                                 bool training,
                                 const std::vector<uint64_t>& seeds,
                                 GradBuffer* grads, size_t threads = 1);

struct EpochLog {
  size_t epoch = 0;  // 1-based
  double train_loss = 0.0;  // mean per-utterance NLL over the epoch
  PRF dev;
};

// `epoch<TAB>train_loss<TAB>dev_p<TAB>dev_r<TAB>dev_f1`
std::string format_epoch_log(const EpochLog& log);

struct TrainOptions {
  std::vector<RawLexiconEntry> lexicon;
  const WordVectors* word_vectors = nullptr;
  size_t threads = 1;
  // Called after every epoch with the log entry and the current model.
  std::function<void(const EpochLog&, const Model&)> on_epoch;
};

struct TrainResult {
  Model best;
  size_t best_epoch = 0;
  double best_dev_f1 = 0.0;
  std::vector<EpochLog> log;
  size_t word_vectors_applied = 0;
};

// Runs exactly config.max_epochs epochs and returns the parameters of the
// epoch with the highest dev F1 (the earliest on ties). Non-finite losses or
// gradients throw NumericalError naming the epoch and batch.
TrainResult train(const TrainConfig& config, const Corpus& train_corpus,
                  const Corpus& dev_corpus, const TrainOptions& options);

// Per-token PRF of Viterbi predictions against the corpus labels.
PRF evaluate(const Model& model, const Corpus& corpus);

}  // namespace subner

#endif  // SUBNER_TRAINING_H_
