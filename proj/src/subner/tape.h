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

// Reverse-mode differentiation over vector-valued nodes.
//
// A Tape is built per utterance. Parameters live in a ParamStore shared by
// all tapes; each tape writes its parameter gradients into a caller-owned
// GradBuffer, so independent utterances can be differentiated concurrently
// and reduced in a fixed order afterwards.

#ifndef SUBNER_TAPE_H_
#define SUBNER_TAPE_H_

#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "subner/tensor.h"

namespace subner {

using ParamId = size_t;

class ParamStore {
 public:
  ParamId add(std::string name, Tensor value);

  size_t size() const { return values_.size(); }
  const std::string& name(ParamId id) const { return names_[id]; }
  const Tensor& value(ParamId id) const { return values_[id]; }
  Tensor& value(ParamId id) { return values_[id]; }
  // Throws DataError when absent.
  ParamId find(const std::string& name) const;
  bool contains(const std::string& name) const;

  // Sum of element counts over all parameters.
  size_t total_elements() const;

  friend bool operator==(const ParamStore&, const ParamStore&) = default;

 private:
  std::vector<std::string> names_;
  std::vector<Tensor> values_;
};

// One gradient tensor per parameter, shaped like the parameter.
class GradBuffer {
 public:
  GradBuffer() = default;
  explicit GradBuffer(const ParamStore& params);

  size_t size() const { return grads_.size(); }
  Tensor& operator[](ParamId id) { return grads_[id]; }
  const Tensor& operator[](ParamId id) const { return grads_[id]; }

  void zero();
  // this += scale * other, parameter by parameter in id order.
  void add_scaled(const GradBuffer& other, double scale = 1.0);

 private:
  std::vector<Tensor> grads_;
};

struct Var {
  uint32_t index = UINT32_MAX;
  bool valid() const { return index != UINT32_MAX; }
};

class Tape {
 public:
  // `grads` may be null, in which case nothing is recorded for backward and
  // the tape only evaluates values.
  Tape(const ParamStore& params, GradBuffer* grads);

  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  bool recording() const { return grads_ != nullptr; }
  const Tensor& value(Var v) const;
  size_t node_count() const { return nodes_.size(); }

  // Leaves.
  Var param(ParamId id);
  Var input(Tensor value);
  // Row `row` of matrix parameter `table` as a vector.
  Var embedding_row(ParamId table, size_t row);

  // Operations. All operands are vectors unless stated otherwise.
  Var matvec(Var matrix, Var x);
  // sum_k matrix_k * x_k + bias.
  Var affine(std::initializer_list<std::pair<Var, Var>> terms, Var bias);
  Var add(Var a, Var b);
  Var mul(Var a, Var b);
  Var one_minus(Var a);
  Var sigmoid(Var a);
  Var tanh(Var a);
  Var concat(std::span<const Var> parts);
  // Elementwise product with a constant (e.g. a dropout mask).
  Var mul_const(Var a, const Tensor& mask);

  // Escape hatch for ops with a closed-form backward pass. `backward`
  // receives the upstream gradient of the new node and must accumulate into
  // the inputs via grad().
  using BackwardFn = std::function<void(Tape&, const Tensor& upstream)>;
  Var custom(Tensor value, BackwardFn backward);

  // Gradient accumulator of `v`; for parameter leaves this is the
  // GradBuffer slot. Only valid while recording.
  Tensor& grad(Var v);

  // Backpropagates from scalar node `loss` with d(output)/d(loss) = seed.
  void backward(Var loss, double seed = 1.0);

 private:
  struct Node {
    Tensor value;
    const Tensor* external = nullptr;  // parameter leaves alias the store
    ParamId param = SIZE_MAX;
    Tensor grad;
    bool has_grad = false;
    std::function<void(Tape&, const Tensor&)> backward;
  };

  Var push(Tensor value, std::function<void(Tape&, const Tensor&)> backward);
  void check_same_size(Var a, Var b, const char* op) const;

  const ParamStore& params_;
  GradBuffer* grads_;
  std::vector<Node> nodes_;
  std::vector<uint32_t> param_nodes_;
};

}  // namespace subner

#endif  // SUBNER_TAPE_H_
