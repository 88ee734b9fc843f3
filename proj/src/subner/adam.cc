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

#include "subner/adam.h"

#include <cmath>

#include "subner/error.h"

namespace subner {

AdamState AdamState::For(const ParamStore& params, double lr) {
  AdamState s;
  s.lr = lr;
  for (ParamId i = 0; i < params.size(); ++i) {
    s.m.emplace_back(params.value(i).shape(), 0.0);
    s.v.emplace_back(params.value(i).shape(), 0.0);
  }
  return s;
}

void adam_step(ParamStore& params, const GradBuffer& grads, AdamState& state) {
  if (grads.size() != params.size() || state.m.size() != params.size() ||
      state.v.size() != params.size()) {
    throw DomainError("adam_step: parameter, gradient and moment counts differ");
  }
  for (ParamId p = 0; p < params.size(); ++p) {
    const Tensor& value = params.value(p);
    if (!grads[p].same_shape(value) || !state.m[p].same_shape(value) ||
        !state.v[p].same_shape(value)) {
      throw DomainError("adam_step: shape mismatch for parameter " +
                        params.name(p));
    }
    if (!grads[p].all_finite()) {
      throw NumericalError("non-finite gradient for parameter " +
                           params.name(p));
    }
  }

  state.step += 1;
  const double t = static_cast<double>(state.step);
  const double correction1 = 1.0 - std::pow(state.beta1, t);
  const double correction2 = 1.0 - std::pow(state.beta2, t);

  for (ParamId p = 0; p < params.size(); ++p) {
    double* w = params.value(p).raw();
    const double* g = grads[p].raw();
    double* m = state.m[p].raw();
    double* v = state.v[p].raw();
    const size_t n = params.value(p).size();
    for (size_t i = 0; i < n; ++i) {
      if (g[i] == 0.0) continue;
      m[i] = state.beta1 * m[i] + (1.0 - state.beta1) * g[i];
      v[i] = state.beta2 * v[i] + (1.0 - state.beta2) * g[i] * g[i];
      const double m_hat = m[i] / correction1;
      const double v_hat = v[i] / correction2;
      w[i] -= state.lr * m_hat / (std::sqrt(v_hat) + state.epsilon);
    }
  }
}

}  // namespace subner
