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

#ifndef SUBNER_TENSOR_H_
#define SUBNER_TENSOR_H_

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace subner {

using Rng = std::mt19937_64;

// Dense row-major array of doubles. Rank 1 (vectors) and rank 2 (matrices)
// are all the model needs, but any rank with positive dimensions is valid.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(std::vector<size_t> shape, double fill = 0.0);
  Tensor(std::vector<size_t> shape, std::vector<double> data);

  static Tensor Vector(std::vector<double> values);

  const std::vector<size_t>& shape() const { return shape_; }
  size_t size() const { return data_.size(); }
  size_t rank() const { return shape_.size(); }
  size_t rows() const { return shape_.empty() ? 0 : shape_[0]; }
  size_t cols() const { return shape_.size() < 2 ? 1 : shape_[1]; }
  bool empty() const { return data_.empty(); }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }
  double* raw() { return data_.data(); }
  const double* raw() const { return data_.data(); }

  double& operator[](size_t i) { return data_[i]; }
  double operator[](size_t i) const { return data_[i]; }
  double& at(size_t r, size_t c) { return data_[r * cols() + c]; }
  double at(size_t r, size_t c) const { return data_[r * cols() + c]; }

  std::span<double> row(size_t r) {
    return std::span<double>(data_).subspan(r * cols(), cols());
  }
  std::span<const double> row(size_t r) const {
    return std::span<const double>(data_).subspan(r * cols(), cols());
  }

  void fill(double value);
  bool all_finite() const;
  bool same_shape(const Tensor& other) const { return shape_ == other.shape_; }

  friend bool operator==(const Tensor&, const Tensor&) = default;

 private:
  std::vector<size_t> shape_;
  std::vector<double> data_;
};

std::string shape_string(const std::vector<size_t>& shape);

// log(sum(exp(v))) with the max-shift trick. Throws DomainError on empty or
// non-finite input.
double logsumexp(std::span<const double> v);

// Uniform double in [0, 1) built from the top 53 bits of one draw.
double uniform01(Rng& rng);

// Inverted-dropout mask: each entry is 0 with probability `rate`, otherwise
// 1 / (1 - rate).
Tensor dropout_mask(const std::vector<size_t>& shape, double rate, Rng& rng);

// Inverted dropout. Identity when !training or rate == 0 (no RNG draws in
// that case).
Tensor dropout(const Tensor& x, double rate, bool training, Rng& rng);

}  // namespace subner

#endif  // SUBNER_TENSOR_H_
