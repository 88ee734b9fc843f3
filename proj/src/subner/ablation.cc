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

#include "subner/ablation.h"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "subner/error.h"

namespace subner {

namespace {

std::string fixed2(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", x);
  return buf;
}

double mean(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  return std::accumulate(v.begin(), v.end(), 0.0) /
         static_cast<double>(v.size());
}

}  // namespace

std::string AblationSetting::group() const {
  if (units.empty()) return "word";
  return word_embeddings ? "combined" : "subwords";
}

std::string AblationSetting::name() const {
  if (units.empty()) return "word";
  std::string s;
  for (Unit u : units) {
    if (!s.empty()) s += '+';
    s += unit_name(u);
  }
  return s;
}

std::vector<AblationSetting> ablation_grid(const std::vector<Unit>& units) {
  std::vector<Unit> canon;
  for (Unit u : kAllUnits) {
    if (std::find(units.begin(), units.end(), u) != units.end()) {
      canon.push_back(u);
    }
  }
  if (canon.empty()) throw DomainError("ablation needs at least one unit");

  std::vector<std::vector<Unit>> subsets;
  const size_t n = canon.size();
  for (size_t size = 1; size <= n; ++size) {
    // Masks of a given popcount, in lexicographic order of member positions.
    std::vector<std::vector<Unit>> of_size;
    for (uint32_t mask = 1; mask < (1u << n); ++mask) {
      if (static_cast<size_t>(__builtin_popcount(mask)) != size) continue;
      std::vector<Unit> s;
      for (size_t i = 0; i < n; ++i) {
        if (mask & (1u << i)) s.push_back(canon[i]);
      }
      of_size.push_back(std::move(s));
    }
    std::sort(of_size.begin(), of_size.end());
    subsets.insert(subsets.end(), of_size.begin(), of_size.end());
  }

  std::vector<AblationSetting> grid;
  for (bool word : {false, true}) {
    for (const auto& s : subsets) grid.push_back({s, word});
  }
  grid.push_back({{}, true});
  return grid;
}

uint64_t derive_seed(uint64_t master, size_t index, size_t repeat) {
  auto mix = [](uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return mix(mix(mix(master) ^ index) ^ repeat);
}

std::vector<AblationRow> run_ablation(const TrainConfig& base,
                                      const std::vector<Unit>& units,
                                      const Corpus& train_corpus,
                                      const Corpus& dev_corpus,
                                      const AblationOptions& options) {
  return run_settings(base, ablation_grid(units), train_corpus, dev_corpus,
                      options);
}

std::vector<AblationRow> run_settings(const TrainConfig& base,
                                      const std::vector<AblationSetting>& grid,
                                      const Corpus& train_corpus,
                                      const Corpus& dev_corpus,
                                      const AblationOptions& options) {
  if (options.repeats == 0) throw DomainError("repeats must be at least 1");
  std::vector<AblationRow> rows;
  for (size_t index = 0; index < grid.size(); ++index) {
    AblationRow row;
    row.setting = grid[index];
    for (size_t r = 0; r < options.repeats; ++r) {
      TrainConfig c = base;
      c.units = row.setting.units;
      c.word_embeddings = row.setting.word_embeddings;
      c.seed = derive_seed(base.seed, index, r);
      TrainResult result = train(c, train_corpus, dev_corpus, options.train);
      row.dev_f1.push_back(result.best_dev_f1);
      if (options.test) {
        row.test_f1.push_back(evaluate(result.best, *options.test).f1);
      }
    }
    row.mean_dev_f1 = mean(row.dev_f1);
    row.mean_test_f1 = mean(row.test_f1);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string format_ablation(const std::vector<AblationRow>& rows) {
  const bool has_test = !rows.empty() && !rows[0].test_f1.empty();
  std::ostringstream out;
  out << "group\tunits\tword_embeddings\tdev_f1";
  if (has_test) out << "\ttest_f1";
  out << "\tdev_f1_per_seed\n";
  for (const auto& r : rows) {
    out << r.setting.group() << '\t' << r.setting.name() << '\t'
        << (r.setting.word_embeddings ? "yes" : "no") << '\t'
        << fixed2(r.mean_dev_f1);
    if (has_test) out << '\t' << fixed2(r.mean_test_f1);
    out << '\t';
    for (size_t i = 0; i < r.dev_f1.size(); ++i) {
      out << (i ? "," : "") << fixed2(r.dev_f1[i]);
    }
    out << '\n';
  }

  // Best setting per group, scored on test when available.
  auto score = [&](const AblationRow& r) {
    return has_test ? r.mean_test_f1 : r.mean_dev_f1;
  };
  const AblationRow* best[3] = {nullptr, nullptr, nullptr};
  const char* groups[3] = {"subwords", "word", "combined"};
  for (const auto& r : rows) {
    for (int g = 0; g < 3; ++g) {
      if (r.setting.group() == groups[g] && (!best[g] || score(r) > score(*best[g]))) {
        best[g] = &r;
      }
    }
  }
  out << '\n' << "comparison\tunits\t" << (has_test ? "test_f1" : "dev_f1")
      << "\tdelta\n";
  const AblationRow* prev = nullptr;
  for (int g = 0; g < 3; ++g) {
    if (!best[g]) continue;
    out << groups[g] << '\t' << best[g]->setting.name() << '\t'
        << fixed2(score(*best[g])) << '\t';
    if (prev) {
      const double d = score(*best[g]) - score(*prev);
      out << (d >= 0 ? "+" : "") << fixed2(d);
    } else {
      out << '-';
    }
    out << '\n';
    prev = best[g];
  }
  return out.str();
}

}  // namespace subner
