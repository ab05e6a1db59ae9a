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


// Acceptance checks. Prints one "PASS|FAIL|SKIP <criterion>: detail" line per
// criterion. Exit status: 0 all passed, 1 any failed, 77 when the only
// non-passing criteria need dataset files that are not present.
//
//   crem_acceptance [--only <criterion>]
//
// Real dataset files are looked up in $CREM_DATA_DIR: gap-test.tsv,
// train.c.txt, test.c.txt and WSCollection.xml.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "crem/cremgen.h"
#include "crem/data.h"
#include "crem/eval.h"
#include "crem/loaders.h"
#include "crem/names.h"
#include "crem/scorer.h"
#include "crem/stats.h"
#include "crem/textio.h"
#include "oracle/brute_force.h"
#include "oracle/random_text.h"
#include "support/test_support.h"

namespace crem {
namespace {

enum class Outcome { kPass, kFail, kSkip };

struct Result {
  Outcome outcome;
  std::string detail;
};

Result pass(std::string d) { return {Outcome::kPass, std::move(d)}; }
Result fail(std::string d) { return {Outcome::kFail, std::move(d)}; }
Result skip(std::string d) { return {Outcome::kSkip, std::move(d)}; }

std::string num(double v, int digits = 4) {
  std::ostringstream os;
  os.precision(digits);
  os << std::fixed << v;
  return os.str();
}

// Path of a real dataset file, or "" when absent.
std::string real_data(const std::string& name) {
  const char* dir = std::getenv("CREM_DATA_DIR");
  if (!dir || !*dir) return "";
  const std::filesystem::path p = std::filesystem::path(dir) / name;
  return std::filesystem::exists(p) ? p.string() : "";
}

const GazetteerDetector& detector() { return *GazetteerDetector::default_instance(); }

std::vector<MaskedExample> mine(const std::string& doc_id, const std::string& text) {
  return generate_document(Document{doc_id, text, SourceKind::kPlainText}, detector(),
                           SentenceSegmenter::default_instance());
}

Result rule_oracle_equivalence() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(20260101);
  size_t passages = 0;
  size_t mismatches = 0;
  while (passages < 10000) {
    const Document doc{"r" + std::to_string(passages), oracle::random_document(rng), SourceKind::kPlainText};
    for (const Passage& p : windows(doc)) {
      const auto mentions = detector().detect(p);
      if (generate(p, mentions) != oracle::brute_force_generate(p, mentions)) ++mismatches;
      ++passages;
    }
  }
  size_t docs = 0;
  DocumentStream stream(CorpusSource::detect(testing::fixture("corpus10")));
  while (auto doc = stream.next()) {
    ++docs;
    if (generate_document(*doc, detector(), SentenceSegmenter::default_instance()) !=
        oracle::brute_force_document(*doc, detector())) {
      ++mismatches;
    }
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const std::string d = std::to_string(passages) + " random passages, " + std::to_string(docs) +
                        " fixture documents, " + std::to_string(mismatches) + " mismatches, " + num(seconds, 1) + " s";
  return mismatches == 0 && docs == 10 && seconds < 60.0 ? pass(d) : fail(d);
}

Result adams_powell_example() {
  const std::string text =
      "When asked about Adams' report, Powell found many of the statements to be inaccurate, including a "
      "claim that Adams first surveyed an area that was surveyed in 1857 by Joseph C.";
  const std::string want =
      "When asked about Adams' report, Powell found many of the statements to be inaccurate, including a "
      "claim that [MASK] first surveyed an area that was surveyed in 1857 by Joseph C.";
  const auto out = mine("adams.txt", text);
  const bool ok = out.size() == 1 && out[0].correct == "Adams" && out[0].incorrect == "Powell" &&
                  out[0].masked_text == want;
  return ok ? pass("one example, Adams over Powell, second occurrence masked")
            : fail(std::to_string(out.size()) + " examples");
}

Result gina_denise_example() {
  const auto out = mine("gina.txt",
                        "Gina arrives and she is furious with Denise for not protecting Jody from Kingsley, "
                        "as Denise was meant to be the parent.");
  for (const auto& ex : out) {
    if (ex.correct == "Denise" && ex.incorrect == "Gina" &&
        ex.masked_text.find("as [MASK] was meant to be the parent.") != std::string::npos) {
      return pass("correct Denise, incorrect Gina among " + std::to_string(out.size()) + " examples");
    }
  }
  return fail("no Denise/Gina example among " + std::to_string(out.size()));
}

Result loss_table() {
  struct Row {
    double a, b, alpha, beta, expected;
  };
  const Row rows[] = {{-1.0, -2.0, 10.0, 0.2, 1.0},
                      {-2.0, -1.0, 10.0, 0.2, 14.0},
                      {-3.0, -1.0, 0.0, 0.2, 3.0},
                      {-1.5, -1.5, 10.0, 0.0, 1.5},
                      {-0.5, -0.6, 5.0, 0.4, 2.0}};
  for (const auto& r : rows) {
    const double got = loss(r.a, r.b, {r.alpha, r.beta});
    if (std::fabs(got - r.expected) > 1e-9) return fail("row (" + num(r.a) + ", " + num(r.b) + ") gave " + num(got, 9));
  }
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> lp(-50.0, 0.0);
  std::uniform_real_distribution<double> w(0.0, 20.0);
  for (int k = 0; k < 10000; ++k) {
    const double a = lp(rng);
    const double b = lp(rng);
    if (loss(a, b, {w(rng), w(rng) / 10.0}) < -a) return fail("loss below -logp_a at point " + std::to_string(k));
  }
  return pass("5 table rows within 1e-9, lower bound holds on 10000 points");
}

Result argmax_invariance() {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> size(1, 8);
  std::uniform_int_distribution<int> coarse(-5, 0);
  std::uniform_real_distribution<double> shift(-100.0, 100.0);
  size_t ties = 0;
  for (int k = 0; k < 10000; ++k) {
    std::vector<double> s(size(rng));
    for (auto& v : s) v = coarse(rng);
    const size_t base = select_candidate(s);
    size_t lowest = 0;
    for (size_t i = 1; i < s.size(); ++i) {
      if (s[i] > s[lowest]) lowest = i;
    }
    if (base != lowest) return fail("tie-break not lowest index at vector " + std::to_string(k));
    ties += std::count(s.begin(), s.end(), s[base]) > 1;
    const double c = shift(rng);
    std::vector<double> shifted = s;
    for (auto& v : shifted) v += c;
    if (select_candidate(shifted) != base) return fail("shift changed the choice at vector " + std::to_string(k));
  }
  return pass("10000 vectors, " + std::to_string(ties) + " with ties");
}

Result f1_cap_check() {
  std::vector<EvalItem> one = {EvalItem{}};
  one[0].gold = GoldGap{"A", "B", true, false, false, false};
  if (f1_cap(one) != 1.0) return fail("cap without failures is not 1.0");
  const std::string path = real_data("gap-test.tsv");
  if (path.empty()) return skip("gap-test.tsv not found in $CREM_DATA_DIR");
  const auto items = load_dataset(DatasetKind::kGap, path);
  if (f1_cap(simulate_extraction_failures(items, 0.0, 0.0, 1)) != 1.0) return fail("zero-failure cap is not 1.0");
  const double cap = f1_cap(simulate_extraction_failures(items, 0.0725, 0.1125, 1));
  const std::string d = std::to_string(items.size()) + " items, cap " + num(cap);
  return std::fabs(cap - 0.911) <= 0.001 ? pass(d) : fail(d);
}

Result dpr_dedup() {
  const std::string train_path = real_data("train.c.txt");
  const std::string test_path = real_data("test.c.txt");
  const std::string wsc_path = real_data("WSCollection.xml");
  if (train_path.empty() || test_path.empty() || wsc_path.empty()) {
    return skip("train.c.txt, test.c.txt or WSCollection.xml not found in $CREM_DATA_DIR");
  }
  const auto d = dedupe_dpr(load_dataset(DatasetKind::kDpr, train_path), load_dataset(DatasetKind::kWsc273, wsc_path));
  const auto test = load_dataset(DatasetKind::kDpr, test_path);
  const std::string detail = "removed " + std::to_string(d.removed) + ", train " + std::to_string(d.items.size()) +
                             ", test " + std::to_string(test.size());
  return d.removed == 6 && d.items.size() == 1316 && test.size() == 564 ? pass(detail) : fail(detail);
}

Result annotation_fixtures() {
  const auto r = annotation_report(parse_annotations(data::embedded("annotations_appendix.jsonl")));
  const std::string d = "total " + std::to_string(r.total) + ", unsolvable " + std::to_string(r.unsolvable) +
                        ", accuracy " + num(r.annotator_accuracy.value_or(-1)) + ", natural " +
                        num(r.natural_fraction.value_or(-1));
  const bool ok = r.total == 100 && r.unsolvable == 18 && r.annotator_accuracy &&
                  std::fabs(*r.annotator_accuracy - 0.951) <= 0.001 && r.natural_fraction &&
                  std::fabs(*r.natural_fraction - 0.63) <= 0.005;
  return ok ? pass(d) : fail(d);
}

Result metrics_arithmetic() {
  const auto items = load_dataset(DatasetKind::kGap, testing::fixture("gap_micro_test.tsv"));
  UnigramScorer scorer = UnigramScorer::parse(data::read_file(testing::fixture("gap_micro_counts.tsv")));
  const Metrics m = evaluate(DatasetKind::kGap, items, scorer);
  if (!m.f1 || std::fabs(*m.f1 - 0.667) > 0.001) return fail("micro-set F1 " + num(m.f1.value_or(-1)));
  // TP/FP/FN: feminine 2/0/1 -> 0.8, masculine 1/1/1 -> 0.5.
  if (!m.bias || std::fabs(*m.bias - 1.6) > 1e-12) return fail("micro-set bias " + num(m.bias.value_or(-1)));

  std::vector<ItemOutcome> perfect(items.size());
  for (size_t k = 0; k < items.size(); ++k) {
    const auto& g = std::get<GoldGap>(items[k].gold);
    const std::string want = g.a_coref ? g.a : g.b_coref ? g.b : "";
    for (size_t c = 0; c < items[k].candidates.size(); ++c) {
      const std::string& cand = items[k].candidates[c];
      if (want.empty() ? (cand != g.a && cand != g.b) : cand == want) {
        perfect[k].selected = c;
        break;
      }
    }
  }
  const Metrics p = aggregate(DatasetKind::kGap, items, perfect);
  if (p.f1 != 1.0 || p.bias != 1.0) return fail("all-correct F1 " + num(p.f1.value_or(-1)) + ", bias " + num(p.bias.value_or(-1)));
  return pass("micro-set F1 " + num(*m.f1) + ", bias " + num(*m.bias) + "; all-correct F1 1, bias 1");
}

Result determinism() {
  testing::TempDir dir;
  for (const char* w : {"1", "8"}) {
    const auto r = testing::run_command(testing::cli_path() + " mine --deterministic --workers " + w + " --input '" +
                                        testing::fixture("corpus10") + "' --output '" +
                                        dir.file(std::string(w) + ".jsonl") + "'");
    if (r.exit_code != 0) return fail(std::string("mine with ") + w + " workers exited " + std::to_string(r.exit_code));
  }
  const std::string one = testing::slurp(dir.file("1.jsonl"));
  const std::string eight = testing::slurp(dir.file("8.jsonl"));
  if (one != eight) return fail("outputs differ between 1 and 8 workers");
  if (one != testing::slurp(testing::fixture("corpus10_expected.jsonl"))) return fail("output differs from frozen records");
  return pass(std::to_string(one.size()) + " identical bytes from 1 and 8 workers");
}

Result reference_scorer_end_to_end() {
  constexpr double kGolden = 0.5;
  std::vector<double> accuracies;
  for (const char* w : {"1", "4"}) {
    const auto r = testing::run_command(testing::cli_path() + " eval --dataset-kind wsc273 --scorer reference --workers " +
                                        w + " --input '" + testing::fixture("wsc20.xml") + "'");
    if (r.exit_code != 0) return fail("eval exited " + std::to_string(r.exit_code));
    const auto report = nlohmann::json::parse(r.out);
    if (report["loaded"] != 20) return fail("loaded " + report["loaded"].dump());
    accuracies.push_back(report["accuracy"].get<double>());
  }
  for (double a : accuracies) {
    if (a != kGolden) return fail("accuracy " + num(a) + ", golden " + num(kGolden));
  }
  return pass("accuracy " + num(kGolden) + " on 20 items, identical across runs");
}

struct Criterion {
  const char* name;
  std::function<Result()> run;
};

}  // namespace
}  // namespace crem

int main(int argc, char** argv) {
  using namespace crem;
  const std::vector<Criterion> criteria = {
      {"rule_oracle_equivalence", rule_oracle_equivalence},
      {"adams_powell_example", adams_powell_example},
      {"gina_denise_example", gina_denise_example},
      {"loss_table", loss_table},
      {"argmax_invariance", argmax_invariance},
      {"f1_cap", f1_cap_check},
      {"dpr_dedup", dpr_dedup},
      {"annotation_fixtures", annotation_fixtures},
      {"metrics_arithmetic", metrics_arithmetic},
      {"determinism", determinism},
      {"reference_scorer_end_to_end", reference_scorer_end_to_end},
  };
  std::string only;
  for (int k = 1; k < argc; ++k) {
    const std::string arg = argv[k];
    if (arg == "--only" && k + 1 < argc) {
      only = argv[++k];
    } else {
      std::cerr << "usage: crem_acceptance [--only <criterion>]\n";
      return 1;
    }
  }
  bool any_failed = false;
  bool any_skipped = false;
  bool matched = false;
  for (const auto& c : criteria) {
    if (!only.empty() && only != c.name) continue;
    matched = true;
    Result r;
    try {
      r = c.run();
    } catch (const std::exception& e) {
      r = fail(std::string("exception: ") + e.what());
    }
    const char* tag = r.outcome == Outcome::kPass ? "PASS" : r.outcome == Outcome::kFail ? "FAIL" : "SKIP";
    std::cout << tag << ' ' << c.name << ": " << r.detail << std::endl;
    any_failed |= r.outcome == Outcome::kFail;
    any_skipped |= r.outcome == Outcome::kSkip;
  }
  if (!matched) {
    std::cerr << "unknown criterion '" << only << "'\n";
    return 1;
  }
  if (any_failed) return 1;
  return any_skipped ? 77 : 0;
}
