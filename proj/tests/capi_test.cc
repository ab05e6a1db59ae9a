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


// Uses nothing but the public C header.

#include <gtest/gtest.h>

#include <cmath>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "crem/crem.h"
#include "support/test_support.h"

namespace {

nlohmann::json take_json(char* s) {
  auto j = nlohmann::json::parse(s);
  crem_string_free(s);
  return j;
}

TEST(CApi, VersionAndErrorState) {
  EXPECT_STRNE(crem_version(), "");
  double out = 0;
  EXPECT_EQ(crem_loss(-1, -2, -1, 0.2, &out), CREM_ERR_USAGE);
  EXPECT_STRNE(crem_last_error(), "");
  EXPECT_EQ(crem_loss(-1, -2, 10, 0.2, &out), CREM_OK);
  EXPECT_STREQ(crem_last_error(), "");
  EXPECT_EQ(crem_loss(-1, -2, 10, 0.2, nullptr), CREM_ERR_USAGE);
  crem_string_free(nullptr);
}

TEST(CApi, ErrorMessagesArePerThread) {
  double out = 0;
  ASSERT_EQ(crem_loss(0, 0, -1, 0, &out), CREM_ERR_USAGE);
  std::string other;
  std::thread([&] { other = crem_last_error(); }).join();
  EXPECT_EQ(other, "");
  EXPECT_STRNE(crem_last_error(), "");
}

TEST(CApi, Loss) {
  double out = 0;
  ASSERT_EQ(crem_loss(-2.0, -1.0, 10.0, 0.2, &out), CREM_OK);
  EXPECT_NEAR(out, 2.0 + 10.0 * 1.2, 1e-12);
  ASSERT_EQ(crem_loss(-1.0, -3.0, 10.0, 0.2, &out), CREM_OK);
  EXPECT_NEAR(out, 1.0, 1e-12);
}

TEST(CApi, SelectCandidate) {
  const double scores[] = {-3.0, -1.0, -1.0, -2.0};
  size_t index = 99;
  ASSERT_EQ(crem_select_candidate(scores, 4, &index), CREM_OK);
  EXPECT_EQ(index, 1u);
  EXPECT_EQ(crem_select_candidate(scores, 0, &index), CREM_ERR_USAGE);
  const double with_nan[] = {-1.0, NAN};
  EXPECT_NE(crem_select_candidate(with_nan, 2, &index), CREM_OK);
}

TEST(CApi, Segment) {
  char* spans = nullptr;
  ASSERT_EQ(crem_segment("Dr. Smith left. Zoë stayed.", &spans), CREM_OK);
  EXPECT_EQ(take_json(spans), nlohmann::json::parse("[[0,15],[16,27]]"));
  EXPECT_EQ(crem_segment(nullptr, &spans), CREM_ERR_USAGE);
}

TEST(CApi, Generate) {
  char* records = nullptr;
  ASSERT_EQ(crem_generate(nullptr, "gina.txt",
                          "Gina arrives and she is furious with Denise for not protecting Jody from "
                          "Kingsley, as Denise was meant to be the parent.",
                          &records),
            CREM_OK);
  std::vector<nlohmann::json> lines;
  std::string text(records);
  crem_string_free(records);
  size_t pos = 0;
  while (pos < text.size()) {
    const size_t nl = text.find('\n', pos);
    lines.push_back(nlohmann::json::parse(text.substr(pos, nl - pos)));
    pos = nl + 1;
  }
  ASSERT_EQ(lines.size(), 3u);
  EXPECT_EQ(lines[0]["incorrect"], "Gina");
  EXPECT_EQ(lines[1]["incorrect"], "Jody");
  EXPECT_EQ(lines[2]["incorrect"], "Kingsley");
  for (const auto& l : lines) EXPECT_EQ(l["correct"], "Denise");
}

TEST(CApi, ConfigAndRuns) {
  crem_config* config = crem_config_create();
  ASSERT_NE(config, nullptr);
  EXPECT_EQ(crem_config_set(config, "colour", "red"), CREM_ERR_USAGE);
  EXPECT_EQ(crem_config_set(config, "workers", "zero"), CREM_ERR_USAGE);
  EXPECT_EQ(crem_config_set(config, nullptr, "1"), CREM_ERR_USAGE);
  ASSERT_EQ(crem_config_set(config, "input", crem::testing::fixture("wsc20.xml").c_str()), CREM_OK);
  ASSERT_EQ(crem_config_set(config, "dataset-kind", "wsc273"), CREM_OK);
  char* report = nullptr;
  ASSERT_EQ(crem_run_eval(config, &report), CREM_OK) << crem_last_error();
  const auto r = take_json(report);
  EXPECT_EQ(r["loaded"], 20);
  EXPECT_DOUBLE_EQ(r["accuracy"].get<double>(), 0.5);
  crem_config_destroy(config);

  config = crem_config_create();
  ASSERT_EQ(crem_config_set(config, "input", "/nonexistent/corpus"), CREM_OK);
  ASSERT_EQ(crem_config_set(config, "output", "/nonexistent/out.jsonl"), CREM_OK);
  EXPECT_EQ(crem_run_mine(config, &report), CREM_ERR_INPUT);
  crem_config_destroy(config);
  crem_config_destroy(nullptr);
}

TEST(CApi, ReferenceScorer) {
  crem_scorer* scorer = nullptr;
  ASSERT_EQ(crem_scorer_create("reference", 1, &scorer), CREM_OK);
  const char* candidates[] = {"Gina", "Denise"};
  double lp[2] = {0, 0};
  ASSERT_EQ(crem_scorer_score(scorer, "Gina met Denise and [MASK] left.", candidates, 2, lp), CREM_OK);
  EXPECT_TRUE(std::isfinite(lp[0]));
  EXPECT_TRUE(std::isfinite(lp[1]));
  EXPECT_LT(lp[0], 0.0);
  EXPECT_EQ(crem_scorer_score(scorer, "no mask here", candidates, 2, lp), CREM_ERR_USAGE);
  crem_scorer_destroy(scorer);
  EXPECT_EQ(crem_scorer_create("oracle", 1, &scorer), CREM_ERR_USAGE);
}

TEST(CApi, ExternalScorerMatchesReference) {
  crem_scorer* reference = nullptr;
  crem_scorer* external = nullptr;
  ASSERT_EQ(crem_scorer_create("reference", 1, &reference), CREM_OK);
  const std::string spec = "cmd:" + crem::testing::fake_scorer_path() + " --mode ok";
  ASSERT_EQ(crem_scorer_create(spec.c_str(), 2, &external), CREM_OK) << crem_last_error();
  const char* candidates[] = {"The trophy", "the suitcase", "Mary Ann"};
  double a[3];
  double b[3];
  const char* text = "The trophy does not fit into the suitcase because [MASK] is too large.";
  ASSERT_EQ(crem_scorer_score(reference, text, candidates, 3, a), CREM_OK);
  ASSERT_EQ(crem_scorer_score(external, text, candidates, 3, b), CREM_OK);
  for (int k = 0; k < 3; ++k) EXPECT_NEAR(a[k], b[k], 1e-12);
  crem_scorer_destroy(reference);
  crem_scorer_destroy(external);

  const std::string bad = "cmd:" + crem::testing::fake_scorer_path() + " --mode bad-hello";
  crem_scorer* broken = nullptr;
  EXPECT_EQ(crem_scorer_create(bad.c_str(), 1, &broken), CREM_ERR_PROTOCOL);
}

}  // namespace
