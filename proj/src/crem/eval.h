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


// Evaluation items, metrics and the GAP-specific accounting rules.

#ifndef CREM_EVAL_H_
#define CREM_EVAL_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "crem/names.h"
#include "crem/scorer.h"

namespace crem {

enum class DatasetKind { kWikiCrem, kGap, kDpr, kWsc273, kPdp, kWnli, kWinoGender, kWinoBias };

std::string_view to_string(DatasetKind kind);
// Accepts the names printed by to_string; throws UsageError otherwise.
DatasetKind parse_dataset_kind(std::string_view name);

// Gold label for multiple-choice items.
struct GoldChoice {
  size_t index = 0;
};

// GAP: the two annotated names with their coreference labels. Both labels
// may be false. A name the detector did not find is marked failed and is
// always predicted false.
struct GoldGap {
  std::string a;
  std::string b;
  bool a_coref = false;
  bool b_coref = false;
  bool a_failed = false;
  bool b_failed = false;
};

// WNLI recast as a choice problem: the hypothesis is predicted entailed iff
// the queried candidate wins. When the pair could not be converted the
// majority class (not entailed) is predicted.
struct GoldEntailment {
  size_t queried = 0;
  std::optional<bool> label;  // absent in unlabelled test files
  bool conversion_failed = false;
};

using Gold = std::variant<GoldChoice, GoldGap, GoldEntailment>;

struct EvalItem {
  std::string item_id;
  std::string masked_text;  // one "[MASK]" unless conversion failed
  std::string source_text;  // unmasked original
  std::vector<std::string> candidates;
  Gold gold;
  // "split": train|validation|test; "gender": masc|fem|neutral;
  // "type": type1|type2; "stereotype": pro|anti.
  std::map<std::string, std::string> tags;
};

// Removes items whose whitespace-collapsed, case-folded source text equals
// that of any WSC item.
struct DedupResult {
  std::vector<EvalItem> items;
  size_t removed = 0;
};
DedupResult dedupe_dpr(const std::vector<EvalItem>& dpr_train, const std::vector<EvalItem>& wsc_items);
std::string normalize_for_dedup(std::string_view text);

// Drops training items whose two GAP labels are both false; other splits and
// non-GAP items pass through.
std::vector<EvalItem> gap_discard_unanswerable(const std::vector<EvalItem>& items);

// Exact equality after trimming surrounding whitespace.
bool gap_strict_match(std::string_view selected, std::string_view gold);

struct GapExtraction {
  std::vector<std::string> candidates;  // distinct, in order of appearance
  bool a_failed = false;
  bool b_failed = false;
  bool detector_failed = false;
};

// Runs the detector sentence by sentence over the unmasked passage and keeps
// distinct possessive-stripped surfaces. A detector error fails both names.
GapExtraction extract_gap_candidates(std::string_view passage_text, std::string_view a,
                                     std::string_view b, const NameDetector& detector);

struct Confusion {
  size_t tp = 0;
  size_t fp = 0;
  size_t fn = 0;
  size_t tn = 0;

  Confusion& operator+=(const Confusion& o);
  size_t total() const { return tp + fp + fn + tn; }
  // Absent when there are no positives and no positive predictions.
  std::optional<double> f1() const;
};

struct SubsetAccuracy {
  size_t correct = 0;
  size_t total = 0;
};

struct Metrics {
  DatasetKind kind = DatasetKind::kWsc273;
  size_t items = 0;
  size_t scored = 0;               // answered by the scorer
  size_t scorer_failures = 0;      // counted as wrong, never dropped
  size_t conversion_failures = 0;  // WNLI majority-class fallbacks
  size_t extraction_failures = 0;  // GAP names the detector missed
  size_t unlabelled = 0;           // WNLI test items without labels
  std::vector<std::string> failed_items;

  size_t correct = 0;
  std::optional<double> accuracy;

  Confusion overall;
  Confusion feminine;
  Confusion masculine;
  std::optional<double> f1;
  std::optional<double> f1_feminine;
  std::optional<double> f1_masculine;
  std::optional<double> bias;  // f1_feminine / f1_masculine

  // "tag=value" -> accuracy on that subset (choice and entailment items).
  std::map<std::string, SubsetAccuracy> subsets;
};

// Per-item result before aggregation.
struct ItemOutcome {
  bool scorer_failed = false;
  std::optional<size_t> selected;
  std::vector<double> scores;
};

// Scores one item. Scorer errors are caught and recorded in the outcome.
ItemOutcome score_item(const EvalItem& item, Scorer& scorer);

// Scores every item with `workers` threads sharing `scorer`; outcome k
// belongs to item k.
std::vector<ItemOutcome> score_items(const std::vector<EvalItem>& items, Scorer& scorer,
                                     size_t workers = 1);

// Metrics from outcomes, independent of item order.
Metrics aggregate(DatasetKind kind, const std::vector<EvalItem>& items,
                  const std::vector<ItemOutcome>& outcomes);

// Scores all items with `workers` threads sharing `scorer`; the result is the
// same as a single-threaded run.
Metrics evaluate(DatasetKind kind, const std::vector<EvalItem>& items, Scorer& scorer,
                 size_t workers = 1);

// Best F1 reachable when every extracted name is answered correctly and
// every failed name is answered false: 2·TP / (2·TP + FN) with TP the
// positives that were extracted and FN the positives that were not.
// Throws UsageError when no GAP label is positive.
double f1_cap(const std::vector<EvalItem>& gap_items);

// Marks extraction failures on a copy of `gap_items`: round(fn_rate · slots)
// positive names and round(tn_rate · slots) negative names, chosen uniformly
// with the seed. Slots are the two names of every item. Throws UsageError
// when there are not enough positive or negative names.
std::vector<EvalItem> simulate_extraction_failures(const std::vector<EvalItem>& gap_items,
                                                   double fn_rate, double tn_rate, uint64_t seed);

}  // namespace crem

#endif  // CREM_EVAL_H_
