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

#include "subner/crf.h"

#include <cmath>
#include <string>

#include "subner/encoders.h"
#include "subner/error.h"

namespace subner {

namespace {

size_t check_shapes(const Tensor& emissions, const Tensor& transitions) {
  if (emissions.rank() != 2) {
    throw DomainError("CRF emissions must be a T x K matrix");
  }
  const size_t k = emissions.cols();
  if (transitions.shape() != std::vector<size_t>{k + 2, k + 2}) {
    throw DomainError("CRF transitions must be " + std::to_string(k + 2) +
                      "x" + std::to_string(k + 2) + ", got " +
                      shape_string(transitions.shape()));
  }
  return k;
}

void check_tags(std::span<const size_t> tags, size_t t, size_t k) {
  if (tags.size() != t) {
    throw DomainError("CRF tag sequence has length " +
                      std::to_string(tags.size()) + ", emissions have " +
                      std::to_string(t) + " positions");
  }
  for (size_t y : tags) {
    if (y >= k) throw DomainError("CRF tag id out of range");
  }
}

// alpha[t][j]: log-sum of scores of prefixes ending in tag j at position t.
std::vector<std::vector<double>> forward_table(const Tensor& e,
                                               const Tensor& tr) {
  const size_t t_len = e.rows(), k = e.cols(), start = crf_start(k);
  std::vector<std::vector<double>> alpha(t_len, std::vector<double>(k));
  for (size_t j = 0; j < k; ++j) alpha[0][j] = tr.at(start, j) + e.at(0, j);
  std::vector<double> terms(k);
  for (size_t t = 1; t < t_len; ++t) {
    for (size_t j = 0; j < k; ++j) {
      for (size_t i = 0; i < k; ++i) terms[i] = alpha[t - 1][i] + tr.at(i, j);
      alpha[t][j] = logsumexp(terms) + e.at(t, j);
    }
  }
  return alpha;
}

// beta[t][i]: log-sum of scores of suffixes after position t given tag i.
std::vector<std::vector<double>> backward_table(const Tensor& e,
                                                const Tensor& tr) {
  const size_t t_len = e.rows(), k = e.cols(), stop = crf_stop(k);
  std::vector<std::vector<double>> beta(t_len, std::vector<double>(k));
  for (size_t i = 0; i < k; ++i) beta[t_len - 1][i] = tr.at(i, stop);
  std::vector<double> terms(k);
  for (size_t t = t_len - 1; t-- > 0;) {
    for (size_t i = 0; i < k; ++i) {
      for (size_t j = 0; j < k; ++j) {
        terms[j] = tr.at(i, j) + e.at(t + 1, j) + beta[t + 1][j];
      }
      beta[t][i] = logsumexp(terms);
    }
  }
  return beta;
}

double finish_partition(const std::vector<double>& last, const Tensor& tr) {
  const size_t k = last.size(), stop = crf_stop(k);
  std::vector<double> terms(k);
  for (size_t j = 0; j < k; ++j) terms[j] = last[j] + tr.at(j, stop);
  return logsumexp(terms);
}

}  // namespace

Tensor init_transitions(size_t num_tags, Rng& rng) {
  const size_t n = num_tags + 2;
  Tensor tr = glorot_uniform(n, n, rng);
  for (size_t i = 0; i < n; ++i) {
    tr.at(i, crf_start(num_tags)) = kImpossible;
    tr.at(crf_stop(num_tags), i) = kImpossible;
  }
  return tr;
}

double score_sequence(const Tensor& emissions, std::span<const size_t> tags,
                      const Tensor& transitions) {
  const size_t k = check_shapes(emissions, transitions);
  const size_t t_len = emissions.rows();
  check_tags(tags, t_len, k);
  // Left to right along the path; Viterbi scores are recomputed with this
  // function, so the order is part of the contract.
  double score = transitions.at(crf_start(k), tags[0]) + emissions.at(0, tags[0]);
  for (size_t t = 1; t < t_len; ++t) {
    score += transitions.at(tags[t - 1], tags[t]) + emissions.at(t, tags[t]);
  }
  score += transitions.at(tags[t_len - 1], crf_stop(k));
  return score;
}

double log_partition(const Tensor& emissions, const Tensor& transitions) {
  check_shapes(emissions, transitions);
  auto alpha = forward_table(emissions, transitions);
  return finish_partition(alpha.back(), transitions);
}

ViterbiResult viterbi_decode(const Tensor& emissions,
                             const Tensor& transitions) {
  const size_t k = check_shapes(emissions, transitions);
  const size_t t_len = emissions.rows();
  std::vector<double> delta(k), next(k);
  std::vector<std::vector<size_t>> backptr(t_len, std::vector<size_t>(k, 0));
  for (size_t j = 0; j < k; ++j) {
    delta[j] = transitions.at(crf_start(k), j) + emissions.at(0, j);
  }
  for (size_t t = 1; t < t_len; ++t) {
    for (size_t j = 0; j < k; ++j) {
      size_t best_i = 0;
      double best = delta[0] + transitions.at(0, j);
      for (size_t i = 1; i < k; ++i) {
        const double s = delta[i] + transitions.at(i, j);
        if (s > best) {
          best = s;
          best_i = i;
        }
      }
      next[j] = best + emissions.at(t, j);
      backptr[t][j] = best_i;
    }
    delta.swap(next);
  }
  size_t last = 0;
  double best = delta[0] + transitions.at(0, crf_stop(k));
  for (size_t j = 1; j < k; ++j) {
    const double s = delta[j] + transitions.at(j, crf_stop(k));
    if (s > best) {
      best = s;
      last = j;
    }
  }
  ViterbiResult result;
  result.tags.assign(t_len, 0);
  result.tags[t_len - 1] = last;
  for (size_t t = t_len - 1; t > 0; --t) {
    result.tags[t - 1] = backptr[t][result.tags[t]];
  }
  result.score = score_sequence(emissions, result.tags, transitions);
  return result;
}

double nll_loss(const Tensor& emissions, std::span<const size_t> gold,
                const Tensor& transitions) {
  return log_partition(emissions, transitions) -
         score_sequence(emissions, gold, transitions);
}

Tensor tag_marginals(const Tensor& emissions, const Tensor& transitions) {
  check_shapes(emissions, transitions);
  auto alpha = forward_table(emissions, transitions);
  auto beta = backward_table(emissions, transitions);
  const double log_z = finish_partition(alpha.back(), transitions);
  Tensor m(emissions.shape(), 0.0);
  for (size_t t = 0; t < emissions.rows(); ++t) {
    for (size_t j = 0; j < emissions.cols(); ++j) {
      m.at(t, j) = std::exp(alpha[t][j] + beta[t][j] - log_z);
    }
  }
  return m;
}

CrfGradients nll_with_gradients(const Tensor& emissions,
                                std::span<const size_t> gold,
                                const Tensor& transitions) {
  const size_t k = check_shapes(emissions, transitions);
  const size_t t_len = emissions.rows();
  check_tags(gold, t_len, k);
  const size_t start = crf_start(k), stop = crf_stop(k);

  auto alpha = forward_table(emissions, transitions);
  auto beta = backward_table(emissions, transitions);
  const double log_z = finish_partition(alpha.back(), transitions);

  CrfGradients g;
  g.loss = log_z - score_sequence(emissions, gold, transitions);
  g.d_emissions = Tensor(emissions.shape(), 0.0);
  g.d_transitions = Tensor(transitions.shape(), 0.0);

  for (size_t t = 0; t < t_len; ++t) {
    for (size_t j = 0; j < k; ++j) {
      g.d_emissions.at(t, j) = std::exp(alpha[t][j] + beta[t][j] - log_z);
    }
  }
  for (size_t j = 0; j < k; ++j) {
    g.d_transitions.at(start, j) += g.d_emissions.at(0, j);
    g.d_transitions.at(j, stop) += g.d_emissions.at(t_len - 1, j);
  }
  for (size_t t = 1; t < t_len; ++t) {
    for (size_t i = 0; i < k; ++i) {
      for (size_t j = 0; j < k; ++j) {
        g.d_transitions.at(i, j) +=
            std::exp(alpha[t - 1][i] + transitions.at(i, j) +
                     emissions.at(t, j) + beta[t][j] - log_z);
      }
    }
  }

  for (size_t t = 0; t < t_len; ++t) g.d_emissions.at(t, gold[t]) -= 1.0;
  g.d_transitions.at(start, gold[0]) -= 1.0;
  for (size_t t = 1; t < t_len; ++t) g.d_transitions.at(gold[t - 1], gold[t]) -= 1.0;
  g.d_transitions.at(gold[t_len - 1], stop) -= 1.0;
  return g;
}

Tensor stack_rows(const Tape& tape, std::span<const Var> rows) {
  if (rows.empty()) throw DomainError("stack_rows: no rows");
  const size_t k = tape.value(rows[0]).size();
  Tensor out({rows.size(), k});
  for (size_t t = 0; t < rows.size(); ++t) {
    const Tensor& r = tape.value(rows[t]);
    if (r.size() != k) throw DomainError("stack_rows: ragged rows");
    for (size_t j = 0; j < k; ++j) out.at(t, j) = r[j];
  }
  return out;
}

Var crf_nll(Tape& tape, std::span<const Var> emission_rows,
            std::span<const size_t> gold, Var transitions) {
  Tensor emissions = stack_rows(tape, emission_rows);
  if (!emissions.all_finite() || !tape.value(transitions).all_finite()) {
    throw NumericalError("non-finite CRF scores");
  }
  if (!tape.recording()) {
    return tape.input(Tensor::Vector(
        {nll_loss(emissions, gold, tape.value(transitions))}));
  }
  CrfGradients g =
      nll_with_gradients(emissions, gold, tape.value(transitions));
  std::vector<Var> rows(emission_rows.begin(), emission_rows.end());
  return tape.custom(
      Tensor::Vector({g.loss}),
      [rows = std::move(rows), transitions, d_e = std::move(g.d_emissions),
       d_tr = std::move(g.d_transitions)](Tape& tape, const Tensor& upstream) {
        const double s = upstream[0];
        for (size_t t = 0; t < rows.size(); ++t) {
          Tensor& dr = tape.grad(rows[t]);
          for (size_t j = 0; j < dr.size(); ++j) dr[j] += s * d_e.at(t, j);
        }
        Tensor& dtr = tape.grad(transitions);
        for (size_t i = 0; i < dtr.size(); ++i) dtr[i] += s * d_tr[i];
      });
}

}  // namespace subner
