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

// Linear-chain CRF over K tags.
//
// Emissions are a T x K matrix. Transitions are (K + 2) x (K + 2), where
// index K is a virtual START state and K + 1 a virtual STOP state;
// transitions[i][j] scores moving from tag i to tag j. Column START and row
// STOP are unreachable and hold kImpossible.

#ifndef SUBNER_CRF_H_
#define SUBNER_CRF_H_

#include <span>
#include <vector>

#include "subner/tape.h"
#include "subner/tensor.h"

namespace subner {

inline constexpr double kImpossible = -1e4;

inline size_t crf_start(size_t num_tags) { return num_tags; }
inline size_t crf_stop(size_t num_tags) { return num_tags + 1; }

// Glorot-uniform transitions with the unreachable entries set.
Tensor init_transitions(size_t num_tags, Rng& rng);

// tr[START, y_1] + e[1, y_1] + sum_{t>1} (tr[y_{t-1}, y_t] + e[t, y_t])
//   + tr[y_T, STOP], accumulated left to right.
double score_sequence(const Tensor& emissions, std::span<const size_t> tags,
                      const Tensor& transitions);

// log of the sum over all K^T tag sequences of exp(score), via the forward
// algorithm.
double log_partition(const Tensor& emissions, const Tensor& transitions);

struct ViterbiResult {
  std::vector<size_t> tags;
  double score = 0.0;  // score_sequence of `tags`
};

// Ties go to the lowest tag id at every decision.
ViterbiResult viterbi_decode(const Tensor& emissions,
                             const Tensor& transitions);

// log_partition - score_sequence(gold).
double nll_loss(const Tensor& emissions, std::span<const size_t> gold,
                const Tensor& transitions);

struct CrfGradients {
  double loss = 0.0;
  Tensor d_emissions;    // marginal - gold indicator
  Tensor d_transitions;  // expected - observed transition counts
};

// nll_loss and its gradients from forward-backward marginals.
CrfGradients nll_with_gradients(const Tensor& emissions,
                                std::span<const size_t> gold,
                                const Tensor& transitions);

// Per-position tag marginals p(y_t = k), T x K.
Tensor tag_marginals(const Tensor& emissions, const Tensor& transitions);

// Stacks T vectors of length K into a T x K matrix.
Tensor stack_rows(const Tape& tape, std::span<const Var> rows);

// Differentiable NLL node over per-token emission vectors and a transitions
// parameter node.
Var crf_nll(Tape& tape, std::span<const Var> emission_rows,
            std::span<const size_t> gold, Var transitions);

}  // namespace subner

#endif  // SUBNER_CRF_H_
