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

#ifndef SUBNER_ADAM_H_
#define SUBNER_ADAM_H_

#include <cstdint>
#include <vector>

#include "subner/tape.h"
#include "subner/tensor.h"

namespace subner {

struct AdamState {
  uint64_t step = 0;
  std::vector<Tensor> m;  // first moments, one per parameter
  std::vector<Tensor> v;  // second moments
  double lr = 0.0007;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  // Zeroed moments shaped like `params`.
  static AdamState For(const ParamStore& params, double lr);
};

// One bias-corrected Adam update.
//
// Coordinates whose gradient is exactly zero are skipped: their parameter
// and moments are left untouched. This keeps unused embedding rows and the
// fixed START/STOP transitions frozen. Throws DomainError on shape mismatch
// and NumericalError (naming the parameter) on a non-finite gradient; in
// both cases nothing is modified.
void adam_step(ParamStore& params, const GradBuffer& grads, AdamState& state);

}  // namespace subner

#endif  // SUBNER_ADAM_H_
