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

#include "subner/config.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include "subner/error.h"

namespace subner {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& text) {
  double x = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), x);
  if (ec != std::errc() || ptr != text.data() + text.size() ||
      !std::isfinite(x)) {
    throw DomainError("config key '" + key + "': '" + text +
                      "' is not a number");
  }
  return x;
}

uint64_t parse_uint(const std::string& key, const std::string& text) {
  uint64_t x = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), x);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw DomainError("config key '" + key + "': '" + text +
                      "' is not a non-negative integer");
  }
  return x;
}

bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw DomainError("config key '" + key + "': '" + text +
                    "' is not a boolean");
}

}  // namespace

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0)) throw DomainError("learning_rate must be > 0");
  if (batch_size < 1) throw DomainError("batch_size must be >= 1");
  if (max_epochs < 1) throw DomainError("max_epochs must be >= 1");
  if (!(dropout_rate >= 0.0 && dropout_rate < 1.0)) {
    throw DomainError("dropout_rate must be in [0, 1)");
  }
  if (units.empty() && !word_embeddings) {
    throw DomainError("enable at least one subword unit or word embeddings");
  }
  for (size_t i = 0; i < units.size(); ++i) {
    for (size_t j = i + 1; j < units.size(); ++j) {
      if (units[i] == units[j]) throw DomainError("duplicate subword unit");
    }
  }
  if (subword_embed_dim < 1 || word_embed_dim < 1 || subword_hidden_dim < 1 ||
      word_hidden_dim < 1) {
    throw DomainError("dimensions must be >= 1");
  }
}

size_t reference_batch_size(const std::string& language) {
  if (language == "en") return 1024;
  if (language == "de") return 256;
  if (language == "fr" || language == "es") return 4;
  throw DomainError("no reference batch size for language '" + language + "'");
}

std::string format_units(const std::vector<Unit>& units) {
  std::string out;
  for (Unit u : kAllUnits) {
    if (std::find(units.begin(), units.end(), u) == units.end()) continue;
    if (!out.empty()) out += ',';
    out += unit_name(u);
  }
  return out;
}

std::vector<Unit> parse_units(const std::string& text) {
  std::vector<Unit> out;
  const std::string t = trim(text);
  if (t.empty() || t == "none") return out;
  size_t start = 0;
  while (start <= t.size()) {
    size_t comma = t.find(',', start);
    if (comma == std::string::npos) comma = t.size();
    Unit u = parse_unit(trim(t.substr(start, comma - start)));
    if (std::find(out.begin(), out.end(), u) != out.end()) {
      throw DomainError("duplicate subword unit in '" + text + "'");
    }
    out.push_back(u);
    start = comma + 1;
  }
  // Canonical order.
  std::vector<Unit> ordered;
  for (Unit u : kAllUnits) {
    if (std::find(out.begin(), out.end(), u) != out.end()) ordered.push_back(u);
  }
  return ordered;
}

void set_config_value(TrainConfig& c, const std::string& key,
                      const std::string& raw) {
  const std::string value = trim(raw);
  if (key == "learning_rate") {
    c.learning_rate = parse_double(key, value);
  } else if (key == "batch_size") {
    c.batch_size = parse_uint(key, value);
  } else if (key == "max_epochs") {
    c.max_epochs = parse_uint(key, value);
  } else if (key == "dropout_rate") {
    c.dropout_rate = parse_double(key, value);
  } else if (key == "units") {
    c.units = parse_units(value);
  } else if (key == "word_embeddings") {
    c.word_embeddings = parse_bool(key, value);
  } else if (key == "seed") {
    c.seed = parse_uint(key, value);
  } else if (key == "subword_embed_dim") {
    c.subword_embed_dim = parse_uint(key, value);
  } else if (key == "word_embed_dim") {
    c.word_embed_dim = parse_uint(key, value);
  } else if (key == "subword_hidden_dim") {
    c.subword_hidden_dim = parse_uint(key, value);
  } else if (key == "word_hidden_dim") {
    c.word_hidden_dim = parse_uint(key, value);
  } else {
    throw DomainError("unknown config key '" + key + "'");
  }
}

std::string format_double(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, ptr);
}

std::vector<std::pair<std::string, std::string>> config_entries(
    const TrainConfig& c) {
  return {
      {"learning_rate", format_double(c.learning_rate)},
      {"batch_size", std::to_string(c.batch_size)},
      {"max_epochs", std::to_string(c.max_epochs)},
      {"dropout_rate", format_double(c.dropout_rate)},
      {"units", format_units(c.units)},
      {"word_embeddings", c.word_embeddings ? "true" : "false"},
      {"seed", std::to_string(c.seed)},
      {"subword_embed_dim", std::to_string(c.subword_embed_dim)},
      {"word_embed_dim", std::to_string(c.word_embed_dim)},
      {"subword_hidden_dim", std::to_string(c.subword_hidden_dim)},
      {"word_hidden_dim", std::to_string(c.word_hidden_dim)},
  };
}

TrainConfig parse_config(std::istream& in, const std::string& source,
                         TrainConfig base) {
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const size_t eq = t.find('=');
    if (eq == std::string::npos) {
      throw DomainError(source + ":" + std::to_string(line_no) +
                        ": expected key = value");
    }
    try {
      set_config_value(base, trim(t.substr(0, eq)), t.substr(eq + 1));
    } catch (const DomainError& e) {
      throw DomainError(source + ":" + std::to_string(line_no) + ": " +
                        e.what());
    }
  }
  return base;
}

TrainConfig read_config(const std::string& path, TrainConfig base) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open config " + path);
  return parse_config(in, path, std::move(base));
}

void write_config(std::ostream& out, const TrainConfig& config) {
  for (const auto& [k, v] : config_entries(config)) {
    out << k << " = " << v << '\n';
  }
}

}  // namespace subner
