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


// Line-delimited JSON protocol spoken with external scorer and detector
// processes, plus the conformance suite for scorer servers.
//
//   client -> {"kind":"hello","protocol":1,"role":"scorer"|"detector"}
//   server -> {"kind":"hello","protocol":1}
//   client -> {"kind":"score","query_id":..,"masked_text":..,"mask_token":"[MASK]","candidates":[..]}
//   server -> {"kind":"scores","query_id":..,"logprobs":[..]}
//   client -> {"kind":"detect","query_id":..,"text":..,"entity":"person"|"noun"}
//   server -> {"kind":"spans","query_id":..,"spans":[[start,end],..]}
//   client -> {"kind":"token_scores","query_id":..,"masked_text":..,"mask_token":"[MASK]","candidate":..}
//   server -> {"kind":"token_scores","query_id":..,"tokens":[..],"logprobs":[..]}
//   server -> {"kind":"error","query_id":..,"message":..}   (any request)
//
// Span offsets count code points. "token_scores" is a debugging request
// used only by the conformance suite.

#ifndef CREM_PROTOCOL_H_
#define CREM_PROTOCOL_H_

#include <chrono>
#include <condition_variable>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "crem/names.h"
#include "crem/process.h"
#include "crem/scorer.h"

namespace crem {

inline constexpr int kProtocolVersion = 1;

using Span = std::pair<size_t, size_t>;

namespace protocol {

std::string hello_request(std::string_view role);
std::string hello_reply();
std::string score_request(const ScoreQuery& query);
std::string scores_reply(const CandidateScores& scores);
std::string detect_request(std::string_view query_id, std::string_view text,
                           std::string_view entity);
std::string spans_reply(std::string_view query_id, const std::vector<Span>& spans);
std::string error_reply(std::string_view query_id, std::string_view message);

// Each parser throws ProtocolError (not retryable) for malformed JSON, a
// wrong kind, a mismatched query id, or an error reply.
void parse_hello_reply(const std::string& line);
CandidateScores parse_scores_reply(const std::string& line, const ScoreQuery& query);
std::vector<Span> parse_spans_reply(const std::string& line, std::string_view query_id);

}  // namespace protocol

// One external process behind a mutex. Requests are serialized. After a
// transport failure the process is restarted once and the request retried.
class ProtocolClient {
 public:
  ProtocolClient(std::string command, std::string role,
                 std::chrono::milliseconds timeout = std::chrono::seconds(60));

  // Sends one request line and returns the reply line.
  std::string round_trip(const std::string& request);
  const std::string& command() const { return command_; }

 private:
  void start();

  std::string command_;
  std::string role_;
  std::chrono::milliseconds timeout_;
  std::unique_ptr<ChildProcess> child_;
  std::mutex mu_;
};

class ExternalScorer : public Scorer {
 public:
  explicit ExternalScorer(std::string command,
                          std::chrono::milliseconds timeout = std::chrono::seconds(60));
  CandidateScores score(const ScoreQuery& query) override;
  std::string describe() const override;

 private:
  ProtocolClient client_;
};

// Hands each query to an idle member; members are used by one caller at a
// time, so N members give N queries in flight.
class ScorerPool : public Scorer {
 public:
  explicit ScorerPool(std::vector<std::unique_ptr<Scorer>> members);
  CandidateScores score(const ScoreQuery& query) override;
  std::string describe() const override;
  size_t size() const { return members_.size(); }

 private:
  std::vector<std::unique_ptr<Scorer>> members_;
  std::vector<size_t> idle_;
  std::mutex mu_;
  std::condition_variable cv_;
};

// Person-name detector behind the protocol. Replies are validated.
class ExternalNameDetector : public NameDetector {
 public:
  explicit ExternalNameDetector(std::string command,
                                std::chrono::milliseconds timeout = std::chrono::seconds(60));
  std::vector<NameMention> detect(const Passage& passage) const override;

  // Raw spans for any entity kind.
  std::vector<Span> spans(std::string_view text, std::string_view entity) const;

 private:
  mutable ProtocolClient client_;
  mutable std::mutex id_mu_;
  mutable unsigned long next_id_ = 0;
};

struct ConformanceCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ConformanceReport {
  std::string command;
  std::vector<ConformanceCheck> checks;
  bool passed() const;
};

// Handshake, arity, finiteness, query id echo, order under permutation,
// consistency between single- and multi-candidate queries, the mean-of-token
// identity via "token_scores", and survival after a malformed request.
ConformanceReport run_conformance(const std::string& command,
                                  std::chrono::milliseconds timeout = std::chrono::seconds(60));

}  // namespace crem

#endif  // CREM_PROTOCOL_H_
