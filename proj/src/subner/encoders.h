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

#ifndef SUBNER_ENCODERS_H_
#define SUBNER_ENCODERS_H_

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "subner/featurize.h"
#include "subner/tape.h"

namespace subner {

// LSTM with a coupled input/forget gate and a peephole from the current
// cell into the output gate:
//
//   i = sigmoid(Wxi x + Whi h' + bi)
//   c = (1 - i) * c' + i * tanh(Wxc x + Whc h' + bc)
//   o = sigmoid(Wxo x + Who h' + wco * c + bo)
//   h = o * tanh(c)
//
// wco is a vector (diagonal peephole).
struct LstmParams {
  ParamId input_x, input_h, input_b;
  ParamId cand_x, cand_h, cand_b;
  ParamId output_x, output_h, output_peep, output_b;
  size_t input_dim = 0;
  size_t hidden_dim = 0;

  // Registers "<prefix>.input_x" etc. Weights are Glorot-uniform, biases 0.
  static LstmParams Create(ParamStore& store, const std::string& prefix,
                           size_t input_dim, size_t hidden_dim, Rng& rng);
  // Binds to parameters already present in `store` and validates shapes.
  static LstmParams Bind(const ParamStore& store, const std::string& prefix);
};

struct LstmState {
  Var h;
  Var c;
};

// Zero hidden and cell vectors.
LstmState lstm_zero_state(Tape& tape, size_t hidden_dim);

LstmState lstm_cell_step(Tape& tape, const LstmParams& p, Var x,
                         const LstmState& prev);

// Value-level convenience wrapper around lstm_cell_step.
struct LstmValues {
  Tensor h;
  Tensor c;
};
LstmValues lstm_cell_step(const ParamStore& store, const LstmParams& p,
                          const Tensor& x, const LstmValues& prev);

// [forward h_T ; backward h_1], both directions starting from zeros.
Var bilstm_final_states(Tape& tape, std::span<const Var> xs,
                        const LstmParams& fwd, const LstmParams& bwd);

// Per-position [forward h_t ; backward h_t].
std::vector<Var> bilstm_sequence(Tape& tape, std::span<const Var> xs,
                                 const LstmParams& fwd, const LstmParams& bwd);

enum class Unit { kChar = 0, kPhoneme = 1, kByte = 2 };
inline constexpr std::array<Unit, 3> kAllUnits = {Unit::kChar, Unit::kPhoneme,
                                                  Unit::kByte};
const char* unit_name(Unit u);
// Accepts "char", "phoneme", "byte".
Unit parse_unit(const std::string& name);

struct EncoderDims {
  size_t subword_embed = 35;
  size_t subword_hidden = 35;
  size_t word_embed = 64;
};

struct UnitEncoder {
  ParamId table;
  LstmParams fwd;
  LstmParams bwd;
};

// Embedding tables and BiLSTMs for each enabled subword unit, plus the
// optional dedicated word-embedding table.
struct SubwordEncoders {
  std::array<std::optional<UnitEncoder>, 3> units;
  std::optional<ParamId> word_table;
  EncoderDims dims;

  // Embedding tables ~ N(0, 1) * 0.1.
  static SubwordEncoders Create(ParamStore& store, const EncoderDims& dims,
                                std::span<const Unit> enabled,
                                const std::array<size_t, 3>& unit_vocab_sizes,
                                std::optional<size_t> word_vocab_size,
                                Rng& rng);
  static SubwordEncoders Bind(const ParamStore& store, const EncoderDims& dims,
                              std::span<const Unit> enabled,
                              bool with_word_embeddings);

  bool enabled(Unit u) const { return units[static_cast<int>(u)].has_value(); }
  // 2 * subword_hidden per enabled unit, + word_embed if word embeddings.
  size_t output_dim() const;
};

// Concatenation, in order char, phoneme, byte, word, of the final BiLSTM
// states of each enabled unit and the word vector. Deterministic.
Var embed_word(Tape& tape, const WordFeatures& f, const SubwordEncoders& enc);

// Glorot-uniform matrix [rows, cols].
Tensor glorot_uniform(size_t rows, size_t cols, Rng& rng);

}  // namespace subner

#endif  // SUBNER_ENCODERS_H_
