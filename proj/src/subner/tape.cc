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

#include "subner/tape.h"

#include <cmath>

#include "subner/error.h"

namespace subner {

namespace {

// y += W x for row-major W of shape [rows, cols].
void gemv_acc(const Tensor& w, const double* x, double* y) {
  const size_t rows = w.rows(), cols = w.cols();
  const double* wp = w.raw();
  for (size_t r = 0; r < rows; ++r) {
    const double* wr = wp + r * cols;
    double s = 0.0;
    for (size_t c = 0; c < cols; ++c) s += wr[c] * x[c];
    y[r] += s;
  }
}

// dW += g x^T and dx += W^T g.
void gemv_backward(const Tensor& w, const double* x, const double* g,
                   Tensor* dw, double* dx) {
  const size_t rows = w.rows(), cols = w.cols();
  const double* wp = w.raw();
  for (size_t r = 0; r < rows; ++r) {
    const double gr = g[r];
    if (gr == 0.0) continue;
    if (dw) {
      double* dwr = dw->raw() + r * cols;
      for (size_t c = 0; c < cols; ++c) dwr[c] += gr * x[c];
    }
    if (dx) {
      const double* wr = wp + r * cols;
      for (size_t c = 0; c < cols; ++c) dx[c] += gr * wr[c];
    }
  }
}

double sigmoid_scalar(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace

ParamId ParamStore::add(std::string name, Tensor value) {
  if (contains(name)) throw DomainError("duplicate parameter name " + name);
  names_.push_back(std::move(name));
  values_.push_back(std::move(value));
  return values_.size() - 1;
}

ParamId ParamStore::find(const std::string& name) const {
  for (ParamId i = 0; i < names_.size(); ++i) {
    if (names_[i] == name) return i;
  }
  throw DataError("unknown parameter " + name);
}

bool ParamStore::contains(const std::string& name) const {
  for (const auto& n : names_) {
    if (n == name) return true;
  }
  return false;
}

size_t ParamStore::total_elements() const {
  size_t n = 0;
  for (const auto& v : values_) n += v.size();
  return n;
}

GradBuffer::GradBuffer(const ParamStore& params) {
  grads_.reserve(params.size());
  for (ParamId i = 0; i < params.size(); ++i) {
    grads_.emplace_back(params.value(i).shape(), 0.0);
  }
}

void GradBuffer::zero() {
  for (auto& g : grads_) g.fill(0.0);
}

void GradBuffer::add_scaled(const GradBuffer& other, double scale) {
  if (other.grads_.size() != grads_.size()) {
    throw DomainError("gradient buffers cover different parameter sets");
  }
  for (size_t p = 0; p < grads_.size(); ++p) {
    double* dst = grads_[p].raw();
    const double* src = other.grads_[p].raw();
    const size_t n = grads_[p].size();
    for (size_t i = 0; i < n; ++i) dst[i] += scale * src[i];
  }
}

Tape::Tape(const ParamStore& params, GradBuffer* grads)
    : params_(params), grads_(grads), param_nodes_(params.size(), UINT32_MAX) {
  if (grads_ && grads_->size() != params_.size()) {
    throw DomainError("gradient buffer does not match parameter store");
  }
  nodes_.reserve(1024);
}

const Tensor& Tape::value(Var v) const {
  const Node& n = nodes_.at(v.index);
  return n.external ? *n.external : n.value;
}

Var Tape::push(Tensor value,
               std::function<void(Tape&, const Tensor&)> backward) {
  Node n;
  n.value = std::move(value);
  if (recording()) n.backward = std::move(backward);
  nodes_.push_back(std::move(n));
  return Var{static_cast<uint32_t>(nodes_.size() - 1)};
}

Tensor& Tape::grad(Var v) {
  Node& n = nodes_.at(v.index);
  if (n.param != SIZE_MAX) return (*grads_)[n.param];
  if (!n.has_grad) {
    const Tensor& val = n.external ? *n.external : n.value;
    n.grad = Tensor(val.shape(), 0.0);
    n.has_grad = true;
  }
  return n.grad;
}

void Tape::check_same_size(Var a, Var b, const char* op) const {
  if (value(a).size() != value(b).size()) {
    throw DomainError(std::string(op) + ": operand sizes differ (" +
                      shape_string(value(a).shape()) + " vs " +
                      shape_string(value(b).shape()) + ")");
  }
}

Var Tape::param(ParamId id) {
  if (id >= params_.size()) throw DomainError("parameter id out of range");
  if (param_nodes_[id] != UINT32_MAX) return Var{param_nodes_[id]};
  Node n;
  n.external = &params_.value(id);
  n.param = id;
  nodes_.push_back(std::move(n));
  param_nodes_[id] = static_cast<uint32_t>(nodes_.size() - 1);
  return Var{param_nodes_[id]};
}

Var Tape::input(Tensor value) { return push(std::move(value), nullptr); }

Var Tape::embedding_row(ParamId table, size_t row) {
  const Tensor& t = params_.value(table);
  if (t.rank() != 2 || row >= t.rows()) {
    throw DomainError("embedding row " + std::to_string(row) +
                      " out of range for " + params_.name(table));
  }
  auto r = t.row(row);
  Tensor out({t.cols()}, std::vector<double>(r.begin(), r.end()));
  return push(std::move(out), [table, row](Tape& tape, const Tensor& g) {
    auto dst = (*tape.grads_)[table].row(row);
    for (size_t i = 0; i < dst.size(); ++i) dst[i] += g[i];
  });
}

Var Tape::matvec(Var matrix, Var x) {
  const Tensor& w = value(matrix);
  const Tensor& xv = value(x);
  if (w.rank() != 2 || w.cols() != xv.size()) {
    throw DomainError("matvec: shape " + shape_string(w.shape()) +
                      " cannot multiply vector of size " +
                      std::to_string(xv.size()));
  }
  Tensor out({w.rows()}, 0.0);
  gemv_acc(w, xv.raw(), out.raw());
  return push(std::move(out), [matrix, x](Tape& tape, const Tensor& g) {
    gemv_backward(tape.value(matrix), tape.value(x).raw(), g.raw(),
                  &tape.grad(matrix), tape.grad(x).raw());
  });
}

Var Tape::affine(std::initializer_list<std::pair<Var, Var>> terms, Var bias) {
  const Tensor& b = value(bias);
  Tensor out = b;
  for (const auto& [m, x] : terms) {
    const Tensor& w = value(m);
    const Tensor& xv = value(x);
    if (w.rank() != 2 || w.cols() != xv.size() || w.rows() != b.size()) {
      throw DomainError("affine: shape " + shape_string(w.shape()) +
                        " incompatible with input " +
                        std::to_string(xv.size()) + " / bias " +
                        std::to_string(b.size()));
    }
    gemv_acc(w, xv.raw(), out.raw());
  }
  std::vector<std::pair<Var, Var>> saved(terms);
  return push(std::move(out), [saved = std::move(saved), bias](
                                  Tape& tape, const Tensor& g) {
    Tensor& db = tape.grad(bias);
    for (size_t i = 0; i < g.size(); ++i) db[i] += g[i];
    for (const auto& [m, x] : saved) {
      gemv_backward(tape.value(m), tape.value(x).raw(), g.raw(),
                    &tape.grad(m), tape.grad(x).raw());
    }
  });
}

Var Tape::add(Var a, Var b) {
  check_same_size(a, b, "add");
  Tensor out = value(a);
  const Tensor& bv = value(b);
  for (size_t i = 0; i < out.size(); ++i) out[i] += bv[i];
  return push(std::move(out), [a, b](Tape& tape, const Tensor& g) {
    Tensor& da = tape.grad(a);
    for (size_t i = 0; i < g.size(); ++i) da[i] += g[i];
    Tensor& db = tape.grad(b);
    for (size_t i = 0; i < g.size(); ++i) db[i] += g[i];
  });
}

Var Tape::mul(Var a, Var b) {
  check_same_size(a, b, "mul");
  Tensor out = value(a);
  const Tensor& bv = value(b);
  for (size_t i = 0; i < out.size(); ++i) out[i] *= bv[i];
  return push(std::move(out), [a, b](Tape& tape, const Tensor& g) {
    const Tensor& av = tape.value(a);
    const Tensor& bv = tape.value(b);
    Tensor& da = tape.grad(a);
    for (size_t i = 0; i < g.size(); ++i) da[i] += g[i] * bv[i];
    Tensor& db = tape.grad(b);
    for (size_t i = 0; i < g.size(); ++i) db[i] += g[i] * av[i];
  });
}

Var Tape::one_minus(Var a) {
  Tensor out = value(a);
  for (double& x : out.data()) x = 1.0 - x;
  return push(std::move(out), [a](Tape& tape, const Tensor& g) {
    Tensor& da = tape.grad(a);
    for (size_t i = 0; i < g.size(); ++i) da[i] -= g[i];
  });
}

Var Tape::sigmoid(Var a) {
  Tensor out = value(a);
  for (double& x : out.data()) x = sigmoid_scalar(x);
  Var result = push(std::move(out), nullptr);
  if (recording()) {
    nodes_[result.index].backward = [a, result](Tape& tape, const Tensor& g) {
      const Tensor& y = tape.value(result);
      Tensor& da = tape.grad(a);
      for (size_t i = 0; i < g.size(); ++i) da[i] += g[i] * y[i] * (1.0 - y[i]);
    };
  }
  return result;
}

Var Tape::tanh(Var a) {
  Tensor out = value(a);
  for (double& x : out.data()) x = std::tanh(x);
  Var result = push(std::move(out), nullptr);
  if (recording()) {
    nodes_[result.index].backward = [a, result](Tape& tape, const Tensor& g) {
      const Tensor& y = tape.value(result);
      Tensor& da = tape.grad(a);
      for (size_t i = 0; i < g.size(); ++i) da[i] += g[i] * (1.0 - y[i] * y[i]);
    };
  }
  return result;
}

Var Tape::concat(std::span<const Var> parts) {
  if (parts.empty()) throw DomainError("concat of zero parts");
  size_t total = 0;
  for (Var p : parts) total += value(p).size();
  std::vector<double> out;
  out.reserve(total);
  for (Var p : parts) {
    auto d = value(p).data();
    out.insert(out.end(), d.begin(), d.end());
  }
  std::vector<Var> saved(parts.begin(), parts.end());
  return push(Tensor::Vector(std::move(out)),
              [saved = std::move(saved)](Tape& tape, const Tensor& g) {
                size_t offset = 0;
                for (Var p : saved) {
                  Tensor& dp = tape.grad(p);
                  for (size_t i = 0; i < dp.size(); ++i) dp[i] += g[offset + i];
                  offset += dp.size();
                }
              });
}

Var Tape::mul_const(Var a, const Tensor& mask) {
  if (value(a).size() != mask.size()) {
    throw DomainError("mul_const: mask size differs from operand");
  }
  Tensor out = value(a);
  for (size_t i = 0; i < out.size(); ++i) out[i] *= mask[i];
  return push(std::move(out), [a, mask](Tape& tape, const Tensor& g) {
    Tensor& da = tape.grad(a);
    for (size_t i = 0; i < g.size(); ++i) da[i] += g[i] * mask[i];
  });
}

Var Tape::custom(Tensor value, BackwardFn backward) {
  return push(std::move(value), std::move(backward));
}

void Tape::backward(Var loss, double seed) {
  if (!recording()) throw DomainError("backward on a non-recording tape");
  if (value(loss).size() != 1) throw DomainError("backward needs a scalar loss");
  grad(loss)[0] += seed;
  for (size_t i = loss.index + 1; i-- > 0;) {
    Node& n = nodes_[i];
    if (!n.backward || !n.has_grad) continue;
    n.backward(*this, n.grad);
  }
}

}  // namespace subner
