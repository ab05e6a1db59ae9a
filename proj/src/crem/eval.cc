// Copyright 2026 The crem Authors
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


#include "crem/eval.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <set>
#include <thread>

#include "crem/cremgen.h"
#include "crem/error.h"
#include "crem/textio.h"
#include "crem/utf8.h"

namespace crem {

namespace {

constexpr std::pair<DatasetKind, std::string_view> kKindNames[] = {
    {DatasetKind::kWikiCrem, "wikicrem"},     {DatasetKind::kGap, "gap"},
    {DatasetKind::kDpr, "dpr"},               {DatasetKind::kWsc273, "wsc273"},
    {DatasetKind::kPdp, "pdp"},               {DatasetKind::kWnli, "wnli"},
    {DatasetKind::kWinoGender, "winogender"}, {DatasetKind::kWinoBias, "winobias"},
};

}  // namespace

std::string_view to_string(DatasetKind kind) {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

DatasetKind parse_dataset_kind(std::string_view name) {
  for (const auto& [k, n] : kKindNames) {
    if (n == name) return k;
  }
  std::string known;
  for (const auto& [k, n] : kKindNames) known += (known.empty() ? "" : ", ") + std::string(n);
  throw UsageError("unknown dataset kind '" + std::string(name) + "' (expected one of " + known + ")");
}

std::string normalize_for_dedup(std::string_view text) {
  return utf8::to_lower(utf8::collapse_whitespace(text));
}

DedupResult dedupe_dpr(const std::vector<EvalItem>& dpr_train, const std::vector<EvalItem>& wsc_items) {
  std::set<std::string> wsc;
  for (const auto& item : wsc_items) wsc.insert(normalize_for_dedup(item.source_text));
  DedupResult out;
  for (const auto& item : dpr_train) {
    if (wsc.count(normalize_for_dedup(item.source_text))) {
      ++out.removed;
    } else {
      out.items.push_back(item);
    }
  }
  return out;
}

std::vector<EvalItem> gap_discard_unanswerable(const std::vector<EvalItem>& items) {
  std::vector<EvalItem> out;
  for (const auto& item : items) {
    const auto* gap = std::get_if<GoldGap>(&item.gold);
    const auto split = item.tags.find("split");
    const bool train = split != item.tags.end() && split->second == "train";
    if (gap && train && !gap->a_coref && !gap->b_coref) continue;
    out.push_back(item);
  }
  return out;
}

bool gap_strict_match(std::string_view selected, std::string_view gold) {
  return utf8::trim(selected) == utf8::trim(gold);
}

GapExtraction extract_gap_candidates(std::string_view passage_text, std::string_view a,
                                     std::string_view b, const NameDetector& detector) {
  GapExtraction out;
  const std::u32string text = utf8::decode(passage_text);
  const std::vector<Sentence> sentences = SentenceSegmenter::default_instance().segment(text);
  const std::vector<Passage> passages = windows("gap", text, sentences);
  std::set<std::string> seen;
  try {
    for (size_t k = 0; k < sentences.size(); ++k) {
      for (const auto& m : detector.detect(passages[k])) {
        std::string key = name_key(m);
        if (seen.insert(key).second) out.candidates.push_back(std::move(key));
      }
    }
  } catch (const Error&) {
    out.candidates.clear();
    out.detector_failed = true;
    out.a_failed = out.b_failed = true;
    return out;
  }
  auto found = [&out](std::string_view gold) {
    return std::any_of(out.candidates.begin(), out.candidates.end(),
                       [gold](const std::string& c) { return gap_strict_match(c, gold); });
  };
  out.a_failed = !found(a);
  out.b_failed = !found(b);
  return out;
}

Confusion& Confusion::operator+=(const Confusion& o) {
  tp += o.tp;
  fp += o.fp;
  fn += o.fn;
  tn += o.tn;
  return *this;
}

std::optional<double> Confusion::f1() const {
  const size_t denom = 2 * tp + fp + fn;
  if (denom == 0) return std::nullopt;
  return 2.0 * static_cast<double>(tp) / static_cast<double>(denom);
}

ItemOutcome score_item(const EvalItem& item, Scorer& scorer) {
  ItemOutcome out;
  if (item.candidates.empty()) return out;
  if (const auto* e = std::get_if<GoldEntailment>(&item.gold); e && e->conversion_failed) return out;
  try {
    const CandidateScores s = scorer.score(ScoreQuery{item.item_id, item.masked_text, item.candidates});
    validate_scores(ScoreQuery{item.item_id, item.masked_text, item.candidates}, s);
    out.scores = s.logprobs;
    out.selected = select_candidate(s.logprobs);
  } catch (const Error&) {
    out.scorer_failed = true;
  }
  return out;
}

namespace {

void count_slot(Confusion& c, bool gold, bool predicted) {
  if (gold && predicted) ++c.tp;
  if (!gold && predicted) ++c.fp;
  if (gold && !predicted) ++c.fn;
  if (!gold && !predicted) ++c.tn;
}

void count_subsets(Metrics& m, const EvalItem& item, bool correct) {
  for (const auto& [tag, value] : item.tags) {
    auto& s = m.subsets[tag + "=" + value];
    ++s.total;
    if (correct) ++s.correct;
  }
}

}  // namespace

Metrics aggregate(DatasetKind kind, const std::vector<EvalItem>& items,
                  const std::vector<ItemOutcome>& outcomes) {
  if (items.size() != outcomes.size()) throw Error(ErrorCode::kInternal, "outcome count mismatch");
  Metrics m;
  m.kind = kind;
  m.items = items.size();
  size_t labelled = 0;
  for (size_t k = 0; k < items.size(); ++k) {
    const EvalItem& item = items[k];
    const ItemOutcome& o = outcomes[k];
    if (o.selected) ++m.scored;
    if (o.scorer_failed) {
      ++m.scorer_failures;
      m.failed_items.push_back(item.item_id);
    }

    if (const auto* g = std::get_if<GoldChoice>(&item.gold)) {
      const bool correct = o.selected && *o.selected == g->index;
      ++labelled;
      if (correct) ++m.correct;
      count_subsets(m, item, correct);
    } else if (const auto* e = std::get_if<GoldEntailment>(&item.gold)) {
      if (e->conversion_failed) ++m.conversion_failures;
      const bool predicted = !e->conversion_failed && o.selected && *o.selected == e->queried;
      if (!e->label) {
        ++m.unlabelled;
        continue;
      }
      const bool correct = !o.scorer_failed && predicted == *e->label;
      ++labelled;
      if (correct) ++m.correct;
      count_subsets(m, item, correct);
    } else if (const auto* gap = std::get_if<GoldGap>(&item.gold)) {
      m.extraction_failures += (gap->a_failed ? 1 : 0) + (gap->b_failed ? 1 : 0);
      bool pred_a = false;
      bool pred_b = false;
      if (o.selected && *o.selected < item.candidates.size()) {
        const std::string& chosen = item.candidates[*o.selected];
        pred_a = !gap->a_failed && gap_strict_match(chosen, gap->a);
        pred_b = !gap->b_failed && gap_strict_match(chosen, gap->b);
      }
      Confusion c;
      count_slot(c, gap->a_coref, pred_a);
      count_slot(c, gap->b_coref, pred_b);
      m.overall += c;
      const auto gender = item.tags.find("gender");
      if (gender != item.tags.end() && gender->second == "fem") m.feminine += c;
      if (gender != item.tags.end() && gender->second == "masc") m.masculine += c;
      const bool correct = pred_a == gap->a_coref && pred_b == gap->b_coref;
      ++labelled;
      if (correct) ++m.correct;
      count_subsets(m, item, correct);
    }
  }
  if (labelled > 0) m.accuracy = static_cast<double>(m.correct) / static_cast<double>(labelled);
  if (kind == DatasetKind::kGap) {
    m.f1 = m.overall.f1();
    m.f1_feminine = m.feminine.f1();
    m.f1_masculine = m.masculine.f1();
    if (m.f1_feminine && m.f1_masculine && *m.f1_masculine > 0.0) {
      m.bias = *m.f1_feminine / *m.f1_masculine;
    }
  }
  return m;
}

std::vector<ItemOutcome> score_items(const std::vector<EvalItem>& items, Scorer& scorer, size_t workers) {
  std::vector<ItemOutcome> outcomes(items.size());
  workers = std::max<size_t>(1, std::min(workers, items.size()));
  if (workers <= 1) {
    for (size_t k = 0; k < items.size(); ++k) outcomes[k] = score_item(items[k], scorer);
    return outcomes;
  }
  std::atomic<size_t> next{0};
  std::vector<std::thread> pool;
  for (size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (size_t k = next++; k < items.size(); k = next++) outcomes[k] = score_item(items[k], scorer);
    });
  }
  for (auto& t : pool) t.join();
  return outcomes;
}

Metrics evaluate(DatasetKind kind, const std::vector<EvalItem>& items, Scorer& scorer, size_t workers) {
  return aggregate(kind, items, score_items(items, scorer, workers));
}

double f1_cap(const std::vector<EvalItem>& gap_items) {
  size_t positives = 0;
  size_t forced_fn = 0;
  for (const auto& item : gap_items) {
    const auto* g = std::get_if<GoldGap>(&item.gold);
    if (!g) continue;
    if (g->a_coref) {
      ++positives;
      if (g->a_failed) ++forced_fn;
    }
    if (g->b_coref) {
      ++positives;
      if (g->b_failed) ++forced_fn;
    }
  }
  if (positives == 0) throw UsageError("F1 cap is undefined without positive labels");
  const double tp = static_cast<double>(positives - forced_fn);
  return 2.0 * tp / (2.0 * tp + static_cast<double>(forced_fn));
}

std::vector<EvalItem> simulate_extraction_failures(const std::vector<EvalItem>& gap_items,
                                                   double fn_rate, double tn_rate, uint64_t seed) {
  if (!(fn_rate >= 0.0) || !(tn_rate >= 0.0)) throw UsageError("failure rates must be nonnegative");
  std::vector<EvalItem> out = gap_items;
  // (item index, 0 for A or 1 for B)
  std::vector<std::pair<size_t, int>> positive;
  std::vector<std::pair<size_t, int>> negative;
  size_t slots = 0;
  for (size_t k = 0; k < out.size(); ++k) {
    auto* g = std::get_if<GoldGap>(&out[k].gold);
    if (!g) continue;
    g->a_failed = g->b_failed = false;
    slots += 2;
    (g->a_coref ? positive : negative).emplace_back(k, 0);
    (g->b_coref ? positive : negative).emplace_back(k, 1);
  }
  const auto n_fn = static_cast<size_t>(std::llround(fn_rate * static_cast<double>(slots)));
  const auto n_tn = static_cast<size_t>(std::llround(tn_rate * static_cast<double>(slots)));
  if (n_fn > positive.size() || n_tn > negative.size()) {
    throw UsageError("not enough labelled names to simulate the requested failure rates");
  }
  auto mark = [&out](const std::vector<std::pair<size_t, int>>& pool, const std::vector<size_t>& picked) {
    for (size_t p : picked) {
      auto& g = std::get<GoldGap>(out[pool[p].first].gold);
      (pool[p].second == 0 ? g.a_failed : g.b_failed) = true;
    }
  };
  mark(positive, holdout_indices(positive.size(), n_fn, seed));
  mark(negative, holdout_indices(negative.size(), n_tn, seed ^ 0x9e3779b97f4a7c15ULL));
  return out;
}

}  // namespace crem
