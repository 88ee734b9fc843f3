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

#include "subner/encoders.h"

#include <cmath>

#include "subner/error.h"

namespace subner {

namespace {

void expect_shape(const ParamStore& store, ParamId id,
                  const std::vector<size_t>& shape) {
  if (store.value(id).shape() != shape) {
    throw ModelFormatError(ModelFormatError::Kind::kShapeMismatch,
                           "parameter " + store.name(id) + " has shape " +
                               shape_string(store.value(id).shape()) +
                               ", expected " + shape_string(shape));
  }
}

Tensor embedding_init(size_t rows, size_t cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Tensor t({rows, cols});
  for (double& x : t.data()) x = 0.1 * normal(rng);
  return t;
}

}  // namespace

Tensor glorot_uniform(size_t rows, size_t cols, Rng& rng) {
  const double bound = std::sqrt(6.0 / static_cast<double>(rows + cols));
  Tensor t({rows, cols});
  for (double& x : t.data()) x = (2.0 * uniform01(rng) - 1.0) * bound;
  return t;
}

LstmParams LstmParams::Create(ParamStore& store, const std::string& prefix,
                              size_t input_dim, size_t hidden_dim, Rng& rng) {
  LstmParams p;
  p.input_dim = input_dim;
  p.hidden_dim = hidden_dim;
  auto weight = [&](const char* name, size_t cols) {
    return store.add(prefix + "." + name, glorot_uniform(hidden_dim, cols, rng));
  };
  auto bias = [&](const char* name) {
    return store.add(prefix + "." + name, Tensor({hidden_dim}, 0.0));
  };
  p.input_x = weight("input_x", input_dim);
  p.input_h = weight("input_h", hidden_dim);
  p.input_b = bias("input_b");
  p.cand_x = weight("cand_x", input_dim);
  p.cand_h = weight("cand_h", hidden_dim);
  p.cand_b = bias("cand_b");
  p.output_x = weight("output_x", input_dim);
  p.output_h = weight("output_h", hidden_dim);
  // Diagonal peephole, drawn with the bound of a hidden x hidden matrix.
  Tensor peep = glorot_uniform(hidden_dim, hidden_dim, rng);
  p.output_peep = store.add(
      prefix + ".output_peep",
      Tensor({hidden_dim}, std::vector<double>(peep.raw(),
                                               peep.raw() + hidden_dim)));
  p.output_b = bias("output_b");
  return p;
}

LstmParams LstmParams::Bind(const ParamStore& store,
                            const std::string& prefix) {
  LstmParams p;
  auto get = [&](const char* name) { return store.find(prefix + "." + name); };
  p.input_x = get("input_x");
  p.input_h = get("input_h");
  p.input_b = get("input_b");
  p.cand_x = get("cand_x");
  p.cand_h = get("cand_h");
  p.cand_b = get("cand_b");
  p.output_x = get("output_x");
  p.output_h = get("output_h");
  p.output_peep = get("output_peep");
  p.output_b = get("output_b");
  const Tensor& wx = store.value(p.input_x);
  if (wx.rank() != 2) {
    throw ModelFormatError(ModelFormatError::Kind::kShapeMismatch,
                           "parameter " + store.name(p.input_x) +
                               " must be a matrix");
  }
  p.hidden_dim = wx.rows();
  p.input_dim = wx.cols();
  const size_t h = p.hidden_dim, in = p.input_dim;
  for (ParamId id : {p.input_x, p.cand_x, p.output_x}) expect_shape(store, id, {h, in});
  for (ParamId id : {p.input_h, p.cand_h, p.output_h}) expect_shape(store, id, {h, h});
  for (ParamId id : {p.input_b, p.cand_b, p.output_b, p.output_peep}) {
    expect_shape(store, id, {h});
  }
  return p;
}

LstmState lstm_zero_state(Tape& tape, size_t hidden_dim) {
  Var zero = tape.input(Tensor({hidden_dim}, 0.0));
  return {zero, zero};
}

LstmState lstm_cell_step(Tape& tape, const LstmParams& p, Var x,
                         const LstmState& prev) {
  if (tape.value(x).size() != p.input_dim ||
      tape.value(prev.h).size() != p.hidden_dim ||
      tape.value(prev.c).size() != p.hidden_dim) {
    throw DomainError("lstm_cell_step: expected input " +
                      std::to_string(p.input_dim) + " and state " +
                      std::to_string(p.hidden_dim) + ", got " +
                      std::to_string(tape.value(x).size()) + " and " +
                      std::to_string(tape.value(prev.h).size()));
  }
  Var input_gate = tape.sigmoid(
      tape.affine({{tape.param(p.input_x), x}, {tape.param(p.input_h), prev.h}},
                  tape.param(p.input_b)));
  Var candidate = tape.tanh(
      tape.affine({{tape.param(p.cand_x), x}, {tape.param(p.cand_h), prev.h}},
                  tape.param(p.cand_b)));
  Var c = tape.add(tape.mul(tape.one_minus(input_gate), prev.c),
                   tape.mul(input_gate, candidate));
  Var output_pre = tape.affine(
      {{tape.param(p.output_x), x}, {tape.param(p.output_h), prev.h}},
      tape.param(p.output_b));
  Var output_gate = tape.sigmoid(
      tape.add(output_pre, tape.mul(tape.param(p.output_peep), c)));
  Var h = tape.mul(output_gate, tape.tanh(c));
  return {h, c};
}

LstmValues lstm_cell_step(const ParamStore& store, const LstmParams& p,
                          const Tensor& x, const LstmValues& prev) {
  Tape tape(store, nullptr);
  LstmState s = lstm_cell_step(tape, p, tape.input(x),
                               {tape.input(prev.h), tape.input(prev.c)});
  return {tape.value(s.h), tape.value(s.c)};
}

Var bilstm_final_states(Tape& tape, std::span<const Var> xs,
                        const LstmParams& fwd, const LstmParams& bwd) {
  if (xs.empty()) throw DomainError("bilstm_final_states: empty sequence");
  LstmState f = lstm_zero_state(tape, fwd.hidden_dim);
  for (Var x : xs) f = lstm_cell_step(tape, fwd, x, f);
  LstmState b = lstm_zero_state(tape, bwd.hidden_dim);
  for (size_t t = xs.size(); t-- > 0;) b = lstm_cell_step(tape, bwd, xs[t], b);
  const Var parts[] = {f.h, b.h};
  return tape.concat(parts);
}

std::vector<Var> bilstm_sequence(Tape& tape, std::span<const Var> xs,
                                 const LstmParams& fwd,
                                 const LstmParams& bwd) {
  if (xs.empty()) throw DomainError("bilstm_sequence: empty sequence");
  std::vector<Var> forward(xs.size()), backward(xs.size());
  LstmState f = lstm_zero_state(tape, fwd.hidden_dim);
  for (size_t t = 0; t < xs.size(); ++t) {
    f = lstm_cell_step(tape, fwd, xs[t], f);
    forward[t] = f.h;
  }
  LstmState b = lstm_zero_state(tape, bwd.hidden_dim);
  for (size_t t = xs.size(); t-- > 0;) {
    b = lstm_cell_step(tape, bwd, xs[t], b);
    backward[t] = b.h;
  }
  std::vector<Var> out(xs.size());
  for (size_t t = 0; t < xs.size(); ++t) {
    const Var parts[] = {forward[t], backward[t]};
    out[t] = tape.concat(parts);
  }
  return out;
}

const char* unit_name(Unit u) {
  switch (u) {
    case Unit::kChar:
      return "char";
    case Unit::kPhoneme:
      return "phoneme";
    case Unit::kByte:
      return "byte";
  }
  return "?";
}

Unit parse_unit(const std::string& name) {
  for (Unit u : kAllUnits) {
    if (name == unit_name(u)) return u;
  }
  throw DomainError("unknown subword unit '" + name +
                    "' (expected char, phoneme or byte)");
}

SubwordEncoders SubwordEncoders::Create(
    ParamStore& store, const EncoderDims& dims, std::span<const Unit> enabled,
    const std::array<size_t, 3>& unit_vocab_sizes,
    std::optional<size_t> word_vocab_size, Rng& rng) {
  SubwordEncoders enc;
  enc.dims = dims;
  for (Unit u : kAllUnits) {
    bool on = false;
    for (Unit e : enabled) on |= (e == u);
    if (!on) continue;
    const std::string prefix = unit_name(u);
    const size_t vocab = unit_vocab_sizes[static_cast<int>(u)];
    UnitEncoder ue;
    ue.table = store.add(prefix + ".embed",
                         embedding_init(vocab, dims.subword_embed, rng));
    ue.fwd = LstmParams::Create(store, prefix + ".fwd", dims.subword_embed,
                                dims.subword_hidden, rng);
    ue.bwd = LstmParams::Create(store, prefix + ".bwd", dims.subword_embed,
                                dims.subword_hidden, rng);
    enc.units[static_cast<int>(u)] = ue;
  }
  if (word_vocab_size) {
    enc.word_table = store.add(
        "word.embed", embedding_init(*word_vocab_size, dims.word_embed, rng));
  }
  return enc;
}

SubwordEncoders SubwordEncoders::Bind(const ParamStore& store,
                                      const EncoderDims& dims,
                                      std::span<const Unit> enabled,
                                      bool with_word_embeddings) {
  SubwordEncoders enc;
  enc.dims = dims;
  for (Unit u : enabled) {
    const std::string prefix = unit_name(u);
    UnitEncoder ue;
    ue.table = store.find(prefix + ".embed");
    ue.fwd = LstmParams::Bind(store, prefix + ".fwd");
    ue.bwd = LstmParams::Bind(store, prefix + ".bwd");
    const Tensor& table = store.value(ue.table);
    if (table.rank() != 2 || table.cols() != dims.subword_embed ||
        ue.fwd.input_dim != dims.subword_embed ||
        ue.fwd.hidden_dim != dims.subword_hidden ||
        ue.bwd.input_dim != dims.subword_embed ||
        ue.bwd.hidden_dim != dims.subword_hidden) {
      throw ModelFormatError(ModelFormatError::Kind::kShapeMismatch,
                             std::string("encoder shapes for unit ") +
                                 unit_name(u) + " disagree with the config");
    }
    enc.units[static_cast<int>(u)] = ue;
  }
  if (with_word_embeddings) {
    enc.word_table = store.find("word.embed");
    const Tensor& table = store.value(*enc.word_table);
    if (table.rank() != 2 || table.cols() != dims.word_embed) {
      throw ModelFormatError(ModelFormatError::Kind::kShapeMismatch,
                             "word.embed disagrees with word_embed_dim");
    }
  }
  return enc;
}

size_t SubwordEncoders::output_dim() const {
  size_t n = 0;
  for (const auto& u : units) {
    if (u) n += 2 * dims.subword_hidden;
  }
  if (word_table) n += dims.word_embed;
  return n;
}

Var embed_word(Tape& tape, const WordFeatures& f, const SubwordEncoders& enc) {
  std::vector<Var> parts;
  for (Unit u : kAllUnits) {
    const auto& ue = enc.units[static_cast<int>(u)];
    if (!ue) continue;
    const std::vector<Id>& ids = u == Unit::kChar      ? f.chars
                                 : u == Unit::kPhoneme ? f.phonemes
                                                       : f.bytes;
    if (ids.empty()) {
      throw DomainError(std::string("embed_word: missing ") + unit_name(u) +
                        " features");
    }
    std::vector<Var> xs;
    xs.reserve(ids.size());
    for (Id id : ids) {
      xs.push_back(tape.embedding_row(ue->table, static_cast<size_t>(id)));
    }
    parts.push_back(bilstm_final_states(tape, xs, ue->fwd, ue->bwd));
  }
  if (enc.word_table) {
    if (!f.word) throw DomainError("embed_word: missing word id");
    parts.push_back(tape.embedding_row(*enc.word_table,
                                       static_cast<size_t>(*f.word)));
  }
  if (parts.empty()) throw DomainError("embed_word: no unit enabled");
  return tape.concat(parts);
}

}  // namespace subner
