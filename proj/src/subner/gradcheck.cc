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

#include "subner/gradcheck.h"

#include <algorithm>
#include <cmath>

#include "subner/error.h"

namespace subner {

double gradient_relative_error(double analytic, double numeric) {
  const double denom =
      std::max({std::abs(analytic), std::abs(numeric), kGradCheckFloor});
  return std::abs(analytic - numeric) / denom;
}

GradCheckResult check_gradients(const LossFn& loss_fn, ParamStore& params,
                                double eps) {
  if (!(eps > 0.0)) throw DomainError("check_gradients: eps must be positive");

  GradBuffer analytic(params);
  const double first = loss_fn(params, &analytic);
  const double second = loss_fn(params, nullptr);
  if (first != second) {
    throw DataError("check_gradients: loss is not deterministic (" +
                    std::to_string(first) + " vs " + std::to_string(second) +
                    ")");
  }

  GradCheckResult result;
  for (ParamId p = 0; p < params.size(); ++p) {
    Tensor& value = params.value(p);
    for (size_t i = 0; i < value.size(); ++i) {
      const double saved = value[i];
      value[i] = saved + eps;
      const double plus = loss_fn(params, nullptr);
      value[i] = saved - eps;
      const double minus = loss_fn(params, nullptr);
      value[i] = saved;

      const double numeric = (plus - minus) / (2.0 * eps);
      const double a = analytic[p][i];
      const double err = gradient_relative_error(a, numeric);
      ++result.coordinates;
      if (err > result.max_relative_error || result.worst_param.empty()) {
        result.max_relative_error = std::max(err, result.max_relative_error);
        result.worst_param = params.name(p);
        result.worst_index = i;
        result.analytic = a;
        result.numeric = numeric;
      }
    }
  }
  return result;
}

}  // namespace subner
