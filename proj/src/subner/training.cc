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

#include "subner/training.h"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>
#include <thread>

#include "subner/adam.h"
#include "subner/error.h"

namespace subner {

namespace {

std::string where(size_t epoch, size_t batch) {
  return "epoch " + std::to_string(epoch) + ", batch " +
         std::to_string(batch + 1);
}

}  // namespace

std::vector<FeaturizedUtterance> featurize_corpus(const Model& model,
                                                  const Corpus& corpus) {
  std::vector<FeaturizedUtterance> out;
  out.reserve(corpus.size());
  for (const auto& u : corpus.utterances) {
    if (u.tokens.empty()) throw DataError("empty utterance in corpus");
    FeaturizedUtterance f;
    f.words = model.featurizer.featurize(u.tokens);
    f.tags.reserve(u.labels.size());
    for (const auto& l : u.labels) f.tags.push_back(model.tags.id(l));
    out.push_back(std::move(f));
  }
  return out;
}

std::vector<Batch> make_batches(const std::vector<FeaturizedUtterance>& data,
                                size_t batch_size, Rng& rng,
                                bool with_word_ids) {
  if (data.empty()) throw DataError("cannot batch an empty corpus");
  if (batch_size == 0) throw DomainError("batch_size must be at least 1");
  std::vector<size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);

  const WordFeatures pad = padding_features(with_word_ids);
  std::vector<Batch> batches;
  for (size_t start = 0; start < order.size(); start += batch_size) {
    Batch b;
    const size_t end = std::min(order.size(), start + batch_size);
    b.members.assign(order.begin() + start, order.begin() + end);
    size_t longest = 0;
    for (size_t i : b.members) longest = std::max(longest, data[i].words.size());
    for (size_t i : b.members) {
      const auto& u = data[i];
      auto words = u.words;
      auto tags = u.tags;
      std::vector<bool> mask(longest, false);
      std::fill(mask.begin(), mask.begin() + u.words.size(), true);
      words.resize(longest, pad);
      tags.resize(longest, 0);
      b.words.push_back(std::move(words));
      b.tags.push_back(std::move(tags));
      b.mask.push_back(std::move(mask));
    }
    batches.push_back(std::move(b));
  }
  return batches;
}

std::span<const WordFeatures> real_words(const Batch& batch, size_t i) {
  const auto& m = batch.mask[i];
  const size_t n = std::count(m.begin(), m.end(), true);
  return std::span<const WordFeatures>(batch.words[i]).first(n);
}

std::span<const size_t> real_tags(const Batch& batch, size_t i) {
  const auto& m = batch.mask[i];
  const size_t n = std::count(m.begin(), m.end(), true);
  return std::span<const size_t>(batch.tags[i]).first(n);
}

std::vector<double> batch_losses(const Model& model, const Batch& batch,
                                 bool training,
                                 const std::vector<uint64_t>& seeds,
                                 GradBuffer* grads, size_t threads) {
  const size_t n = batch.size();
  if (training && seeds.size() != n) {
    throw DomainError("batch_losses: one dropout seed per member required");
  }
  std::vector<double> losses(n, 0.0);
  std::vector<GradBuffer> member_grads;
  if (grads) member_grads.assign(n, GradBuffer(model.params));
  std::vector<std::exception_ptr> errors(n);

  auto run = [&](size_t i) {
    try {
      Rng rng(training ? seeds[i] : 0);
      Tape tape(model.params, grads ? &member_grads[i] : nullptr);
      Var loss = utterance_loss(tape, model, real_words(batch, i),
                                real_tags(batch, i), training, &rng);
      losses[i] = tape.value(loss)[0];
      if (grads && std::isfinite(losses[i])) tape.backward(loss);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };

  threads = std::max<size_t>(1, std::min(threads, n));
  if (threads == 1) {
    for (size_t i = 0; i < n; ++i) run(i);
  } else {
    std::vector<std::thread> pool;
    for (size_t t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        for (size_t i = t; i < n; i += threads) run(i);
      });
    }
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  if (grads) {
    grads->zero();
    const double scale = 1.0 / static_cast<double>(n);
    for (size_t i = 0; i < n; ++i) grads->add_scaled(member_grads[i], scale);
  }
  return losses;
}

std::string format_epoch_log(const EpochLog& log) {
  return std::to_string(log.epoch) + '\t' + format_double(log.train_loss) +
         '\t' + format_double(log.dev.precision) + '\t' +
         format_double(log.dev.recall) + '\t' + format_double(log.dev.f1);
}

PRF evaluate(const Model& model, const Corpus& corpus) {
  return per_token_prf(tag_corpus(model, corpus), corpus);
}

TrainResult train(const TrainConfig& config, const Corpus& train_corpus,
                  const Corpus& dev_corpus, const TrainOptions& options) {
  config.validate();
  if (train_corpus.utterances.empty()) {
    throw DataError("training corpus is empty");
  }
  if (dev_corpus.utterances.empty()) {
    throw DataError("development corpus is empty");
  }

  Rng rng(config.seed);
  Featurizer featurizer = build_featurizer(
      train_corpus, compile_lexicon(options.lexicon), config.word_embeddings);
  Model model = Model::Create(config, std::move(featurizer),
                              TagSet::FromCorpus(train_corpus), rng);
  TrainResult result;
  if (options.word_vectors && config.word_embeddings) {
    result.word_vectors_applied =
        apply_word_vectors(model, *options.word_vectors);
  }

  const auto data = featurize_corpus(model, train_corpus);
  AdamState adam = AdamState::For(model.params, config.learning_rate);
  GradBuffer grads(model.params);

  for (size_t epoch = 1; epoch <= config.max_epochs; ++epoch) {
    auto batches =
        make_batches(data, config.batch_size, rng, config.word_embeddings);
    double loss_sum = 0.0;
    for (size_t b = 0; b < batches.size(); ++b) {
      std::vector<uint64_t> seeds(batches[b].size());
      for (auto& s : seeds) s = rng();
      std::vector<double> losses;
      try {
        losses = batch_losses(model, batches[b], true, seeds, &grads,
                              options.threads);
      } catch (const NumericalError& e) {
        throw NumericalError(std::string(e.what()) + " at " + where(epoch, b));
      }
      for (double l : losses) {
        if (!std::isfinite(l)) {
          throw NumericalError("non-finite loss at " + where(epoch, b));
        }
        loss_sum += l;
      }
      try {
        adam_step(model.params, grads, adam);
      } catch (const NumericalError& e) {
        throw NumericalError(std::string(e.what()) + " at " + where(epoch, b));
      }
    }

    EpochLog entry;
    entry.epoch = epoch;
    entry.train_loss = loss_sum / static_cast<double>(data.size());
    entry.dev = evaluate(model, dev_corpus);
    result.log.push_back(entry);
    if (epoch == 1 || entry.dev.f1 > result.best_dev_f1) {
      result.best = model;
      result.best_epoch = epoch;
      result.best_dev_f1 = entry.dev.f1;
    }
    if (options.on_epoch) options.on_epoch(entry, model);
  }
  return result;
}

}  // namespace subner
