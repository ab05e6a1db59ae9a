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


#include <gtest/gtest.h>

#include "crem/cremgen.h"
#include "crem/data.h"
#include "crem/error.h"
#include "crem/pipeline.h"
#include "support/test_support.h"

namespace crem {
namespace {

RunConfig mine_config(const std::string& output) {
  RunConfig c;
  c.inputs = {testing::fixture("corpus10")};
  c.output = output;
  c.deterministic = true;
  return c;
}

TEST(RunConfig, SetParsesEveryKey) {
  RunConfig c;
  c.set("input", "a");
  c.set("input", "b");
  c.set("workers", "4");
  c.set("seed", "17");
  c.set("alpha", "0.5");
  c.set("beta", "2");
  c.set("deterministic", "true");
  c.set("holdout-n", "10");
  c.set("dataset-kind", "gap");
  c.set("stats-kind", "gender");
  c.set("timeout-ms", "250");
  EXPECT_EQ(c.inputs, (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(c.workers, 4u);
  EXPECT_EQ(c.seed, 17u);
  EXPECT_DOUBLE_EQ(c.loss.alpha, 0.5);
  EXPECT_DOUBLE_EQ(c.loss.beta, 2.0);
  EXPECT_TRUE(c.deterministic);
  EXPECT_EQ(c.holdout_n, 10u);
  EXPECT_EQ(c.timeout_ms, 250);
}

TEST(RunConfig, SetRejectsBadValues) {
  RunConfig c;
  EXPECT_THROW(c.set("colour", "red"), UsageError);
  EXPECT_THROW(c.set("workers", "0"), UsageError);
  EXPECT_THROW(c.set("workers", "-2"), UsageError);
  EXPECT_THROW(c.set("workers", "3x"), UsageError);
  EXPECT_THROW(c.set("alpha", "-1"), UsageError);
  EXPECT_THROW(c.set("beta", "nan"), UsageError);
  EXPECT_THROW(c.set("deterministic", "maybe"), UsageError);
  EXPECT_THROW(c.set("dataset-kind", "squad"), UsageError);
  EXPECT_THROW(c.set("stats-kind", "other"), UsageError);
  EXPECT_THROW(c.set("timeout-ms", "0"), UsageError);
}

TEST(RunMine, MatchesTheFrozenCorpusOutput) {
  testing::TempDir dir;
  const Report r = run_mine(mine_config(dir.file("out.jsonl")));
  EXPECT_EQ(r["documents"], 10);
  EXPECT_EQ(r["examples"], 26);
  EXPECT_EQ(testing::slurp(dir.file("out.jsonl")), testing::slurp(testing::fixture("corpus10_expected.jsonl")));
}

TEST(RunMine, WorkerCountDoesNotChangeDeterministicOutput) {
  testing::TempDir dir;
  auto one = mine_config(dir.file("one.jsonl"));
  auto many = mine_config(dir.file("many.jsonl"));
  many.workers = 8;
  run_mine(one);
  run_mine(many);
  EXPECT_EQ(testing::slurp(dir.file("one.jsonl")), testing::slurp(dir.file("many.jsonl")));
}

TEST(RunMine, WikiDumpCountsMalformedPages) {
  testing::TempDir dir;
  RunConfig c;
  c.inputs = {testing::fixture("wiki_mini.xml")};
  c.output = dir.file("wiki.jsonl");
  const Report r = run_mine(c);
  EXPECT_EQ(r["documents"], 2);
  EXPECT_EQ(r["cancelled"], false);
}

TEST(RunMine, Errors) {
  testing::TempDir dir;
  RunConfig c = mine_config("");
  EXPECT_THROW(run_mine(c), UsageError);
  c.output = dir.file("x.jsonl");
  c.inputs = {};
  EXPECT_THROW(run_mine(c), UsageError);
  c.inputs = {dir.file("missing")};
  EXPECT_THROW(run_mine(c), InputError);
  c.inputs = {testing::fixture("corpus10")};
  c.detector = "cmd";
  EXPECT_THROW(run_mine(c), UsageError);
}

TEST(RunSplit, SizesAndSeed) {
  testing::TempDir dir;
  RunConfig c;
  c.inputs = {testing::fixture("corpus10_expected.jsonl")};
  c.output = dir.file("s");
  c.holdout_n = 5;
  c.seed = 42;
  const Report r = run_split(c);
  EXPECT_EQ(r["total"], 26);
  EXPECT_EQ(r["train"], 21);
  EXPECT_EQ(r["validation"], 5);
  const auto validation = read_records(dir.file("s.validation.jsonl"));
  const auto train = read_records(dir.file("s.train.jsonl"));
  ASSERT_EQ(validation.size(), 5u);
  ASSERT_EQ(train.size(), 21u);

  const auto all = read_records(testing::fixture("corpus10_expected.jsonl"));
  const auto [want_train, want_validation] = holdout_split(all, 5, 42);
  EXPECT_EQ(validation, want_validation);
  EXPECT_EQ(train, want_train);

  const std::string first = testing::slurp(dir.file("s.validation.jsonl"));
  run_split(c);
  EXPECT_EQ(testing::slurp(dir.file("s.validation.jsonl")), first);
  c.seed = 43;
  run_split(c);
  EXPECT_NE(testing::slurp(dir.file("s.validation.jsonl")), first);
}

TEST(RunSplit, Extremes) {
  testing::TempDir dir;
  RunConfig c;
  c.inputs = {testing::fixture("corpus10_expected.jsonl")};
  c.output = dir.file("s");
  c.seed = 1;
  c.holdout_n = 0;
  EXPECT_EQ(run_split(c)["validation"], 0);
  c.holdout_n = 26;
  EXPECT_EQ(run_split(c)["train"], 0);
  c.holdout_n = 27;
  EXPECT_THROW(run_split(c), UsageError);
  c.holdout_n = 3;
  c.seed.reset();
  EXPECT_THROW(run_split(c), UsageError);
}

TEST(RunSplit, BadRecordReportsItsLine) {
  testing::TempDir dir;
  testing::spit(dir.file("bad.jsonl"), testing::slurp(testing::fixture("corpus10_expected.jsonl")) + "{oops\n");
  RunConfig c;
  c.inputs = {dir.file("bad.jsonl")};
  c.output = dir.file("s");
  c.seed = 1;
  c.holdout_n = 1;
  try {
    run_split(c);
    FAIL();
  } catch (const InputError& e) {
    EXPECT_EQ(e.line(), 27);
  }
}

TEST(RunStats, AnnotationsAndGender) {
  testing::TempDir dir;
  testing::spit(dir.file("appendix.jsonl"), std::string(data::embedded("annotations_appendix.jsonl")));
  RunConfig c;
  c.inputs = {dir.file("appendix.jsonl")};
  Report r = run_stats(c);
  EXPECT_EQ(r["kind"], "annotations");
  EXPECT_EQ(r["total"], 100);
  EXPECT_EQ(r["unsolvable"], 18);
  EXPECT_EQ(r["solvable"], 82);
  EXPECT_EQ(r["annotator_correct"], 78);
  EXPECT_EQ(r["natural"], 63);

  c.inputs = {testing::fixture("corpus10_expected.jsonl")};
  r = run_stats(c);
  EXPECT_EQ(r["kind"], "gender");
  EXPECT_EQ(r["examples"], 26);
  const int classified = r["counts"].size();
  EXPECT_GT(classified, 0);
}

TEST(RunEval, GapMicroSet) {
  RunConfig c;
  c.inputs = {testing::fixture("gap_micro_test.tsv")};
  c.dataset_kind = "gap";
  c.scorer = "reference:" + testing::fixture("gap_micro_counts.tsv");
  const Report r = run_eval(c);
  EXPECT_EQ(r["confusion"]["tp"], 3);
  EXPECT_EQ(r["confusion"]["fp"], 1);
  EXPECT_EQ(r["confusion"]["fn"], 2);
  EXPECT_EQ(r["confusion"]["tn"], 10);
  EXPECT_NEAR(r["f1"].get<double>(), 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(r["f1_feminine"].get<double>(), 0.8, 1e-12);
  EXPECT_NEAR(r["f1_masculine"].get<double>(), 0.5, 1e-12);
  EXPECT_NEAR(r["bias"].get<double>(), 1.6, 1e-12);
}

TEST(RunEval, WscIsRepeatableAndWorkerInvariant) {
  RunConfig c;
  c.inputs = {testing::fixture("wsc20.xml")};
  c.dataset_kind = "wsc273";
  const Report a = run_eval(c);
  c.workers = 4;
  const Report b = run_eval(c);
  EXPECT_EQ(a["loaded"], 20);
  EXPECT_DOUBLE_EQ(a["accuracy"].get<double>(), 0.5);
  EXPECT_EQ(a["accuracy"], b["accuracy"]);
  EXPECT_EQ(a["mean_loss"], b["mean_loss"]);
}

TEST(RunEval, DprDedupAndErrors) {
  RunConfig c;
  c.inputs = {testing::fixture("dpr_train.c.txt")};
  c.dataset_kind = "dpr";
  c.dedup_against = testing::fixture("wsc20.xml");
  EXPECT_EQ(run_eval(c)["dedup_removed"], 2);
  c.dataset_kind = "gap";
  EXPECT_THROW(run_eval(c), UsageError);
  c.dataset_kind = "";
  EXPECT_THROW(run_eval(c), UsageError);
}

TEST(RunConformance, ReportsChecks) {
  RunConfig c;
  c.scorer = "cmd:" + testing::fake_scorer_path() + " --mode ok";
  const Report r = run_conformance(c);
  EXPECT_EQ(r["passed"], true);
  EXPECT_EQ(r["checks"].size(), 8u);
  c.scorer = "cmd:" + testing::fake_scorer_path() + " --mode shuffle";
  EXPECT_EQ(run_conformance(c)["passed"], false);
}

}  // namespace
}  // namespace crem
