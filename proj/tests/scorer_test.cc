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

#include <atomic>
#include <cmath>
#include <random>
#include <thread>

#include "crem/error.h"
#include "crem/scorer.h"

namespace crem {
namespace {

struct LossRow {
  double a, b, alpha, beta, expected;
};

// Hand-evaluated rows of -a + alpha * max(0, b - a + beta).
const LossRow kLossTable[] = {
    {-1.0, -2.0, 10.0, 0.2, 1.0},   // margin -0.8 clips to 0
    {-2.0, -1.0, 10.0, 0.2, 14.0},  // 2 + 10 * 1.2
    {-3.0, -1.0, 0.0, 0.2, 3.0},    // alpha 0 leaves the NLL
    {-1.5, -1.5, 10.0, 0.0, 1.5},   // equal scores, no margin
    {-0.5, -0.6, 5.0, 0.4, 2.0},    // 0.5 + 5 * 0.3
};

TEST(Loss, HandComputedTable) {
  for (const auto& r : kLossTable) {
    EXPECT_NEAR(loss(r.a, r.b, {r.alpha, r.beta}), r.expected, 1e-9) << r.a << " " << r.b;
  }
}

TEST(Loss, DefaultsAreTenAndPointTwo) {
  const LossParams p;
  EXPECT_EQ(p.alpha, 10.0);
  EXPECT_EQ(p.beta, 0.2);
}

TEST(Loss, Properties) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> lp(-20.0, 0.0);
  std::uniform_real_distribution<double> alpha(0.0, 30.0);
  std::uniform_real_distribution<double> beta(0.0, 1.0);
  for (int k = 0; k < 10000; ++k) {
    const double a = lp(rng);
    const double b = lp(rng);
    const LossParams p{alpha(rng), beta(rng)};
    const double l = loss(a, b, p);
    EXPECT_GE(l, -a);
    EXPECT_GE(loss(a, b + 0.5, p), l);
    EXPECT_LE(loss(a + 0.5, b, p), l);
    EXPECT_DOUBLE_EQ(loss(a, a, {p.alpha, 0.0}), -a);
  }
}

TEST(Loss, NegativeParametersAreRejected) {
  EXPECT_THROW(loss(-1, -2, {-1.0, 0.2}), UsageError);
  EXPECT_THROW(loss(-1, -2, {1.0, -0.2}), UsageError);
}

TEST(SelectCandidate, ArgmaxWithLowestIndexTies) {
  EXPECT_EQ(select_candidate({-2.0, -1.0}), 1u);
  EXPECT_EQ(select_candidate({-1.5, -1.5}), 0u);
  EXPECT_EQ(select_candidate({-3.0, 0.5, 0.5, -1.0}), 1u);
  EXPECT_EQ(select_candidate({7.0}), 0u);
  EXPECT_THROW(select_candidate({}), UsageError);
  EXPECT_THROW(select_candidate({-1.0, std::nan("")}), UsageError);
}

TEST(SelectCandidate, InvariantUnderShiftsAndPositiveScaling) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> size(1, 8);
  std::uniform_int_distribution<int> coarse(-5, 0);  // coarse values produce ties
  std::uniform_real_distribution<double> shift(-100.0, 100.0);
  std::uniform_real_distribution<double> scale(0.1, 10.0);
  for (int k = 0; k < 10000; ++k) {
    std::vector<double> s(size(rng));
    for (double& v : s) v = coarse(rng);
    const size_t base = select_candidate(s);
    const double c = std::round(shift(rng));  // integral shifts keep ties exact
    std::vector<double> shifted = s;
    for (double& v : shifted) v += c;
    EXPECT_EQ(select_candidate(shifted), base);
    std::vector<double> scaled = s;
    const double m = scale(rng);
    for (double& v : scaled) v *= m;
    const double best = *std::max_element(s.begin(), s.end());
    // Lowest index among the maxima, computed independently.
    size_t expected = 0;
    while (s[expected] != best) ++expected;
    EXPECT_EQ(base, expected);
    EXPECT_EQ(select_candidate(scaled), base);
  }
}

TEST(UnigramScorer, TokenAndCandidateLogprobs) {
  const UnigramScorer s({{"a", 1.0}, {"b", 1.0}});
  EXPECT_DOUBLE_EQ(s.token_logprob("a"), std::log(0.5));
  // Unseen tokens score as the floor count of 1.
  EXPECT_DOUBLE_EQ(s.token_logprob("zzz"), std::log(1.0 / 2.0));
  const UnigramScorer t({{"a", 3.0}, {"b", 1.0}});
  EXPECT_DOUBLE_EQ(t.candidate_logprob("a zzz"), (std::log(0.75) + std::log(0.25)) / 2.0);
}

TEST(UnigramScorer, MultiTokenCandidatesAverage) {
  const auto s = UnigramScorer::from_logprobs({{"Mary", -1.0}, {"Ann", -3.0}, {"Ada", -1.0}}, -20.0);
  EXPECT_DOUBLE_EQ(s.candidate_logprob("Ada"), -1.0);
  EXPECT_DOUBLE_EQ(s.candidate_logprob("Mary Ann"), -2.0);
  EXPECT_DOUBLE_EQ(s.candidate_logprob("Mary  Ann "), -2.0);
  EXPECT_DOUBLE_EQ(s.candidate_logprob("ann"), -20.0);
}

TEST(UnigramScorer, ScoresKeepOrderAndTiesPickFirst) {
  UnigramScorer s({{"x", 5.0}, {"y", 5.0}, {"z", 1.0}});
  const auto r = s.score({"q", "a [MASK] b", {"z", "y", "x"}});
  EXPECT_EQ(r.query_id, "q");
  ASSERT_EQ(r.logprobs.size(), 3u);
  EXPECT_LT(r.logprobs[0], r.logprobs[1]);
  EXPECT_EQ(r.logprobs[1], r.logprobs[2]);
  EXPECT_EQ(select_candidate(r.logprobs), 1u);
}

TEST(UnigramScorer, IsPureAcrossThreads) {
  auto s = UnigramScorer::default_instance();
  const ScoreQuery q{"q", "[MASK] left.", {"Mary Ann", "the dog", "Bob"}};
  const auto want = s->score(q).logprobs;
  std::vector<std::thread> threads;
  std::atomic<int> mismatches{0};
  for (int t = 0; t < 4; ++t) {
    threads.emplace_back([&] {
      for (int k = 0; k < 200; ++k) {
        if (s->score(q).logprobs != want) ++mismatches;
      }
    });
  }
  for (auto& t : threads) t.join();
  EXPECT_EQ(mismatches.load(), 0);
}

TEST(UnigramScorer, ParseAndErrors) {
  const auto s = UnigramScorer::parse("# counts\na\t3\nb\t1\n");
  EXPECT_DOUBLE_EQ(s.token_logprob("a"), std::log(0.75));
  EXPECT_THROW(UnigramScorer::parse(""), UsageError);
  EXPECT_THROW(UnigramScorer::parse("a\t0\n"), UsageError);
  EXPECT_THROW(UnigramScorer::parse("a\tmany\n"), Error);
  EXPECT_THROW(UnigramScorer({{"a", 1.0}}, 0.0), UsageError);
}

TEST(Queries, Validation) {
  EXPECT_NO_THROW(validate_query({"q", "x [MASK] y", {"a"}}));
  EXPECT_THROW(validate_query({"q", "x [MASK] y", {}}), UsageError);
  EXPECT_THROW(validate_query({"q", "no mask", {"a"}}), UsageError);
  EXPECT_THROW(validate_query({"q", "[MASK] [MASK]", {"a"}}), UsageError);

  const ScoreQuery q{"q", "[MASK]", {"a", "b"}};
  EXPECT_NO_THROW(validate_scores(q, {"q", {-1.0, 3.0}}));
  EXPECT_THROW(validate_scores(q, {"q", {-1.0}}), ProtocolError);
  EXPECT_THROW(validate_scores(q, {"other", {-1.0, -2.0}}), ProtocolError);
  EXPECT_THROW(validate_scores(q, {"q", {-1.0, std::nan("")}}), ProtocolError);
  EXPECT_THROW(validate_scores(q, {"q", {-1.0, -INFINITY}}), ProtocolError);
}

}  // namespace
}  // namespace crem
