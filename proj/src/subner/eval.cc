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

#include "subner/eval.h"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "subner/error.h"

namespace subner {

namespace {

std::string fixed2(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", x);
  return buf;
}

double ratio_pct(size_t num, size_t den) {
  return den == 0 ? 0.0 : 100.0 * static_cast<double>(num) /
                              static_cast<double>(den);
}

std::vector<std::vector<std::string>> labels_of(const Corpus& c) {
  std::vector<std::vector<std::string>> out;
  out.reserve(c.size());
  for (const auto& u : c.utterances) out.push_back(u.labels);
  return out;
}

}  // namespace

PRF PRF::FromCounts(size_t tp, size_t fp, size_t fn) {
  PRF r;
  r.tp = tp;
  r.fp = fp;
  r.fn = fn;
  r.precision = ratio_pct(tp, tp + fp);
  r.recall = ratio_pct(tp, tp + fn);
  r.f1 = r.precision + r.recall > 0.0
             ? 2.0 * r.precision * r.recall / (r.precision + r.recall)
             : 0.0;
  return r;
}

PRF per_token_prf(const std::vector<std::vector<std::string>>& predictions,
                  const std::vector<std::vector<std::string>>& gold,
                  const std::vector<std::vector<bool>>* mask) {
  if (predictions.size() != gold.size()) {
    throw DataError("prediction and gold utterance counts differ (" +
                    std::to_string(predictions.size()) + " vs " +
                    std::to_string(gold.size()) + ")");
  }
  size_t tp = 0, fp = 0, fn = 0;
  std::map<std::string, Counts> per_label;
  for (size_t u = 0; u < gold.size(); ++u) {
    if (predictions[u].size() != gold[u].size()) {
      throw DataError("utterance " + std::to_string(u + 1) +
                      ": prediction and gold lengths differ");
    }
    for (size_t t = 0; t < gold[u].size(); ++t) {
      if (mask && !(*mask)[u][t]) continue;
      const std::string& p = predictions[u][t];
      const std::string& g = gold[u][t];
      if (p == g) {
        if (g != "O") {
          ++tp;
          ++per_label[g].tp;
        }
        continue;
      }
      if (p != "O") {
        ++fp;
        ++per_label[p].fp;
      }
      if (g != "O") {
        ++fn;
        ++per_label[g].fn;
      }
    }
  }
  PRF r = PRF::FromCounts(tp, fp, fn);
  r.per_label = std::move(per_label);
  return r;
}

PRF per_token_prf(const Corpus& predictions, const Corpus& gold) {
  for (size_t u = 0; u < std::min(predictions.size(), gold.size()); ++u) {
    if (predictions.utterances[u].tokens != gold.utterances[u].tokens) {
      throw DataError("utterance " + std::to_string(u + 1) +
                      ": prediction and gold tokens differ");
    }
  }
  return per_token_prf(labels_of(predictions), labels_of(gold));
}

double macro_f1(const PRF& prf) {
  if (prf.per_label.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& [label, c] : prf.per_label) {
    sum += PRF::FromCounts(c.tp, c.fp, c.fn).f1;
  }
  return sum / static_cast<double>(prf.per_label.size());
}

OOVReport oov_slice(const Corpus& predictions, const Corpus& gold,
                    const Vocabulary& train_words) {
  if (predictions.size() != gold.size()) {
    throw DataError("prediction and gold utterance counts differ");
  }
  std::vector<std::vector<std::string>> utt_pred, utt_gold, tok_pred, tok_gold;
  OOVReport report;
  for (size_t u = 0; u < gold.size(); ++u) {
    const auto& g = gold.utterances[u];
    const auto& p = predictions.utterances[u];
    if (p.size() != g.size()) {
      throw DataError("utterance " + std::to_string(u + 1) +
                      ": prediction and gold lengths differ");
    }
    std::vector<std::string> oov_pred, oov_gold;
    for (size_t t = 0; t < g.size(); ++t) {
      if (train_words.contains(g.tokens[t])) continue;
      oov_pred.push_back(p.labels[t]);
      oov_gold.push_back(g.labels[t]);
    }
    if (oov_gold.empty()) continue;
    ++report.utterances_with_oov;
    report.oov_token_count += oov_gold.size();
    utt_pred.push_back(p.labels);
    utt_gold.push_back(g.labels);
    tok_pred.push_back(std::move(oov_pred));
    tok_gold.push_back(std::move(oov_gold));
  }
  report.prf_on_oov_utterances = per_token_prf(utt_pred, utt_gold);
  report.prf_on_oov_tokens = per_token_prf(tok_pred, tok_gold);
  return report;
}

std::string format_prf_report(const PRF& prf) {
  std::ostringstream out;
  out << "label\ttp\tfp\tfn\tprecision\trecall\tf1\n";
  for (const auto& [label, c] : prf.per_label) {
    PRF l = PRF::FromCounts(c.tp, c.fp, c.fn);
    out << label << '\t' << c.tp << '\t' << c.fp << '\t' << c.fn << '\t'
        << fixed2(l.precision) << '\t' << fixed2(l.recall) << '\t'
        << fixed2(l.f1) << '\n';
  }
  out << "total\t" << prf.tp << '\t' << prf.fp << '\t' << prf.fn << '\t'
      << fixed2(prf.precision) << '\t' << fixed2(prf.recall) << '\t'
      << fixed2(prf.f1) << '\n';
  out << "macro_f1\t" << fixed2(macro_f1(prf)) << '\n';
  out << "P\tR\tF1\n";
  out << fixed2(prf.precision) << '\t' << fixed2(prf.recall) << '\t'
      << fixed2(prf.f1) << '\n';
  return out.str();
}

std::string format_oov_report(const OOVReport& r) {
  std::ostringstream out;
  auto line = [&](const char* name, const PRF& p) {
    out << name << '\t' << p.tp << '\t' << p.fp << '\t' << p.fn << '\t'
        << fixed2(p.precision) << '\t' << fixed2(p.recall) << '\t'
        << fixed2(p.f1) << '\n';
  };
  out << "oov_utterances\t" << r.utterances_with_oov << '\n';
  out << "oov_tokens\t" << r.oov_token_count << '\n';
  out << "slice\ttp\tfp\tfn\tprecision\trecall\tf1\n";
  line("oov_utterances", r.prf_on_oov_utterances);
  line("oov_tokens", r.prf_on_oov_tokens);
  return out.str();
}

}  // namespace subner
