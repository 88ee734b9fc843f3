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

#ifndef SUBNER_CONFIG_H_
#define SUBNER_CONFIG_H_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "subner/encoders.h"

namespace subner {

struct TrainConfig {
  double learning_rate = 0.0007;
  size_t batch_size = 4;
  size_t max_epochs = 40;
  double dropout_rate = 0.5;
  std::vector<Unit> units = {Unit::kChar, Unit::kPhoneme, Unit::kByte};
  bool word_embeddings = false;
  uint64_t seed = 1;
  size_t subword_embed_dim = 35;
  size_t word_embed_dim = 64;
  size_t subword_hidden_dim = 35;
  size_t word_hidden_dim = 128;

  EncoderDims encoder_dims() const {
    return {subword_embed_dim, subword_hidden_dim, word_embed_dim};
  }

  // Throws DomainError when an invariant is violated.
  void validate() const;

  friend bool operator==(const TrainConfig&, const TrainConfig&) = default;
};

// Utterances per batch used for the four languages in the original
// large-scale setup; desk-scale runs default to the small-data value.
size_t reference_batch_size(const std::string& language);

// Sets one field from its textual form. Unknown keys and unparsable values
// throw DomainError.
void set_config_value(TrainConfig& config, const std::string& key,
                      const std::string& value);

// All keys in file order with their canonical textual values. Doubles use
// the shortest round-trip representation.
std::vector<std::pair<std::string, std::string>> config_entries(
    const TrainConfig& config);

// "char,phoneme,byte"; empty string for no units.
std::string format_units(const std::vector<Unit>& units);
std::vector<Unit> parse_units(const std::string& text);

// Flat `key = value` text; '#' comments and blank lines allowed.
TrainConfig parse_config(std::istream& in, const std::string& source,
                         TrainConfig base = {});
TrainConfig read_config(const std::string& path, TrainConfig base = {});
void write_config(std::ostream& out, const TrainConfig& config);

std::string format_double(double x);

}  // namespace subner

#endif  // SUBNER_CONFIG_H_
