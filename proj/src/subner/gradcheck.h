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

#ifndef SUBNER_GRADCHECK_H_
#define SUBNER_GRADCHECK_H_

#include <functional>
#include <string>

#include "subner/tape.h"

namespace subner {

// Evaluates a scalar loss at the given parameters. When `grads` is non-null
// the function must also accumulate d(loss)/d(param) into it.
using LossFn = std::function<double(const ParamStore&, GradBuffer*)>;

struct GradCheckResult {
  double max_relative_error = 0.0;
  std::string worst_param;
  size_t worst_index = 0;
  double analytic = 0.0;
  double numeric = 0.0;
  size_t coordinates = 0;
};

// Relative error used by check_gradients:
//   |a - n| / max(|a|, |n|, kGradCheckFloor)
// The floor turns the comparison into an absolute one for gradients that
// are themselves at the level of central-difference noise.
inline constexpr double kGradCheckFloor = 1e-6;

double gradient_relative_error(double analytic, double numeric);

// Compares tape gradients with central differences
// (f(theta + eps) - f(theta - eps)) / (2 eps) for every coordinate of every
// parameter. `params` is perturbed in place and restored exactly.
// Throws DataError if two evaluations at the same point disagree.
GradCheckResult check_gradients(const LossFn& loss_fn, ParamStore& params,
                                double eps);

}  // namespace subner

#endif  // SUBNER_GRADCHECK_H_
