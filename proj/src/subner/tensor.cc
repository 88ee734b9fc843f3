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

#include "subner/tensor.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "subner/error.h"

namespace subner {

namespace {

size_t element_count(const std::vector<size_t>& shape) {
  for (size_t d : shape) {
    if (d == 0) throw DomainError("tensor dimensions must be positive, got " +
                                  shape_string(shape));
  }
  return std::accumulate(shape.begin(), shape.end(), size_t{1},
                         std::multiplies<>());
}

}  // namespace

Tensor::Tensor(std::vector<size_t> shape, double fill)
    : shape_(std::move(shape)), data_(element_count(shape_), fill) {}

Tensor::Tensor(std::vector<size_t> shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  if (element_count(shape_) != data_.size()) {
    throw DomainError("tensor data length " + std::to_string(data_.size()) +
                      " does not match shape " + shape_string(shape_));
  }
}

Tensor Tensor::Vector(std::vector<double> values) {
  size_t n = values.size();
  return Tensor({n}, std::move(values));
}

void Tensor::fill(double value) { std::fill(data_.begin(), data_.end(), value); }

bool Tensor::all_finite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](double x) { return std::isfinite(x); });
}

std::string shape_string(const std::vector<size_t>& shape) {
  std::string out;
  for (size_t i = 0; i < shape.size(); ++i) {
    if (i) out += 'x';
    out += std::to_string(shape[i]);
  }
  return out.empty() ? "scalar" : out;
}

double logsumexp(std::span<const double> v) {
  if (v.empty()) throw DomainError("logsumexp of an empty vector");
  double top = v[0];
  for (double x : v) {
    if (!std::isfinite(x)) throw DomainError("logsumexp of a non-finite value");
    top = std::max(top, x);
  }
  double sum = 0.0;
  for (double x : v) sum += std::exp(x - top);
  return top + std::log(sum);
}

double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

Tensor dropout_mask(const std::vector<size_t>& shape, double rate, Rng& rng) {
  if (!(rate >= 0.0 && rate < 1.0)) {
    throw DomainError("dropout rate must be in [0, 1), got " +
                      std::to_string(rate));
  }
  Tensor mask(shape, 1.0);
  if (rate == 0.0) return mask;
  const double keep_scale = 1.0 / (1.0 - rate);
  for (double& m : mask.data()) m = uniform01(rng) < rate ? 0.0 : keep_scale;
  return mask;
}

Tensor dropout(const Tensor& x, double rate, bool training, Rng& rng) {
  if (!(rate >= 0.0 && rate < 1.0)) {
    throw DomainError("dropout rate must be in [0, 1), got " +
                      std::to_string(rate));
  }
  if (!training || rate == 0.0) return x;
  Tensor mask = dropout_mask(x.shape(), rate, rng);
  Tensor out = x;
  for (size_t i = 0; i < out.size(); ++i) out[i] *= mask[i];
  return out;
}

}  // namespace subner
