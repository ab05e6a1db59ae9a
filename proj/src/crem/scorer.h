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


// Candidate scoring: the scorer contract, argmax selection, the max-margin
// training loss and a context-free unigram reference scorer.

#ifndef CREM_SCORER_H_
#define CREM_SCORER_H_

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace crem {

struct ScoreQuery {
  std::string query_id;
  std::string masked_text;  // exactly one "[MASK]"
  std::vector<std::string> candidates;
};

struct CandidateScores {
  std::string query_id;
  std::vector<double> logprobs;  // same order as the query's candidates
};

// Throws UsageError unless there is at least one candidate and exactly one
// mask token.
void validate_query(const ScoreQuery& query);

// Checks arity, query id and finiteness of a reply; throws ProtocolError.
void validate_scores(const ScoreQuery& query, const CandidateScores& scores);

// A scorer maps a masked text and candidates to one log-score per candidate.
// A multi-token candidate scores as the mean of its per-token log-probabilities.
class Scorer {
 public:
  virtual ~Scorer() = default;
  virtual CandidateScores score(const ScoreQuery& query) = 0;
  // Human-readable description for reports.
  virtual std::string describe() const = 0;
};

// Index of the largest score; ties go to the lowest index. Throws UsageError
// on an empty vector or a NaN.
size_t select_candidate(const std::vector<double>& scores);

struct LossParams {
  double alpha = 10.0;
  double beta = 0.2;
};

// -logp_a + alpha * max(0, logp_b - logp_a + beta). Throws UsageError for
// negative alpha or beta.
double loss(double logp_a, double logp_b, const LossParams& params);

// Context-free reference scorer. Tokens are whitespace-separated and
// case-sensitive; a token's log-probability is log(count / total), with
// unseen tokens scored at `floor_count`. Immutable and thread-safe.
class UnigramScorer : public Scorer {
 public:
  // Throws UsageError for an empty table, a non-positive count or floor.
  UnigramScorer(std::map<std::string, double> counts, double floor_count = 1.0);
  // Direct per-token log-probabilities; unseen tokens get `unseen_logprob`.
  static UnigramScorer from_logprobs(std::map<std::string, double> logprobs,
                                     double unseen_logprob);
  // "token<TAB>count" lines.
  static UnigramScorer parse(std::string_view table_text, double floor_count = 1.0);
  // The shipped frequency table.
  static std::shared_ptr<UnigramScorer> default_instance();

  double token_logprob(std::string_view token) const;
  double candidate_logprob(std::string_view candidate) const;

  CandidateScores score(const ScoreQuery& query) override;
  std::string describe() const override;

 private:
  UnigramScorer() = default;

  std::map<std::string, double, std::less<>> logprobs_;
  double unseen_ = 0.0;
  std::string description_;
};

}  // namespace crem

#endif  // CREM_SCORER_H_
