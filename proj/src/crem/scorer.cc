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


#include "crem/scorer.h"

#include <cmath>
#include <sstream>

#include "crem/data.h"
#include "crem/error.h"

namespace crem {

void validate_query(const ScoreQuery& query) {
  if (query.candidates.empty()) throw UsageError("query " + query.query_id + " has no candidates");
  const size_t first = query.masked_text.find("[MASK]");
  if (first == std::string::npos || query.masked_text.find("[MASK]", first + 1) != std::string::npos) {
    throw UsageError("query " + query.query_id + " must contain exactly one [MASK]");
  }
}

void validate_scores(const ScoreQuery& query, const CandidateScores& scores) {
  if (scores.query_id != query.query_id) {
    throw ProtocolError("reply for query '" + scores.query_id + "' while waiting for '" +
                            query.query_id + "'",
                        false);
  }
  if (scores.logprobs.size() != query.candidates.size()) {
    throw ProtocolError("query " + query.query_id + ": expected " +
                            std::to_string(query.candidates.size()) + " scores, got " +
                            std::to_string(scores.logprobs.size()),
                        false);
  }
  for (double v : scores.logprobs) {
    if (!std::isfinite(v)) throw ProtocolError("query " + query.query_id + ": non-finite score", false);
  }
}

size_t select_candidate(const std::vector<double>& scores) {
  if (scores.empty()) throw UsageError("cannot select from an empty score list");
  for (double v : scores) {
    if (std::isnan(v)) throw UsageError("cannot select among NaN scores");
  }
  size_t best = 0;
  for (size_t k = 1; k < scores.size(); ++k) {
    if (scores[k] > scores[best]) best = k;
  }
  return best;
}

double loss(double logp_a, double logp_b, const LossParams& params) {
  if (!(params.alpha >= 0.0) || !(params.beta >= 0.0)) {
    throw UsageError("loss parameters alpha and beta must be nonnegative");
  }
  return -logp_a + params.alpha * std::max(0.0, logp_b - logp_a + params.beta);
}

UnigramScorer::UnigramScorer(std::map<std::string, double> counts, double floor_count) {
  if (counts.empty()) throw UsageError("unigram table is empty");
  if (!(floor_count > 0.0)) throw UsageError("unigram floor count must be positive");
  double total = 0.0;
  for (const auto& [token, c] : counts) {
    if (!(c > 0.0) || !std::isfinite(c)) {
      throw UsageError("unigram count for '" + token + "' must be positive");
    }
    total += c;
  }
  for (const auto& [token, c] : counts) logprobs_.emplace(token, std::log(c / total));
  unseen_ = std::log(floor_count / total);
  description_ = "reference unigram (" + std::to_string(counts.size()) + " tokens)";
}

UnigramScorer UnigramScorer::from_logprobs(std::map<std::string, double> logprobs,
                                           double unseen_logprob) {
  UnigramScorer s;
  for (auto& [token, lp] : logprobs) s.logprobs_.emplace(token, lp);
  s.unseen_ = unseen_logprob;
  s.description_ = "reference unigram (log-probability table)";
  return s;
}

UnigramScorer UnigramScorer::parse(std::string_view table_text, double floor_count) {
  std::map<std::string, double> counts;
  for (const auto& [token, value] : data::parse_tab_pairs(table_text)) {
    try {
      size_t used = 0;
      const double c = std::stod(value, &used);
      if (used != value.size()) throw std::invalid_argument(value);
      counts[token] += c;
    } catch (const std::exception&) {
      throw InputError("unigram count for '" + token + "' is not a number");
    }
  }
  return UnigramScorer(std::move(counts), floor_count);
}

std::shared_ptr<UnigramScorer> UnigramScorer::default_instance() {
  static const auto instance =
      std::make_shared<UnigramScorer>(parse(data::embedded("unigram_counts.tsv")));
  return instance;
}

double UnigramScorer::token_logprob(std::string_view token) const {
  const auto it = logprobs_.find(token);
  return it == logprobs_.end() ? unseen_ : it->second;
}

double UnigramScorer::candidate_logprob(std::string_view candidate) const {
  double sum = 0.0;
  size_t n = 0;
  std::istringstream in{std::string(candidate)};
  std::string token;
  while (in >> token) {
    sum += token_logprob(token);
    ++n;
  }
  return n == 0 ? unseen_ : sum / static_cast<double>(n);
}

CandidateScores UnigramScorer::score(const ScoreQuery& query) {
  validate_query(query);
  CandidateScores out;
  out.query_id = query.query_id;
  out.logprobs.reserve(query.candidates.size());
  for (const auto& c : query.candidates) out.logprobs.push_back(candidate_logprob(c));
  return out;
}

std::string UnigramScorer::describe() const { return description_; }

}  // namespace crem
