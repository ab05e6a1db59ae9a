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


#include "crem/protocol.h"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "crem/error.h"
#include "crem/utf8.h"

namespace crem {

using nlohmann::json;
using ordered = nlohmann::ordered_json;

namespace protocol {

std::string hello_request(std::string_view role) {
  ordered j;
  j["kind"] = "hello";
  j["protocol"] = kProtocolVersion;
  j["role"] = role;
  return j.dump();
}

std::string hello_reply() {
  ordered j;
  j["kind"] = "hello";
  j["protocol"] = kProtocolVersion;
  return j.dump();
}

std::string score_request(const ScoreQuery& query) {
  ordered j;
  j["kind"] = "score";
  j["query_id"] = query.query_id;
  j["masked_text"] = query.masked_text;
  j["mask_token"] = "[MASK]";
  j["candidates"] = query.candidates;
  return j.dump();
}

std::string scores_reply(const CandidateScores& scores) {
  ordered j;
  j["kind"] = "scores";
  j["query_id"] = scores.query_id;
  j["logprobs"] = scores.logprobs;
  return j.dump();
}

std::string detect_request(std::string_view query_id, std::string_view text,
                           std::string_view entity) {
  ordered j;
  j["kind"] = "detect";
  j["query_id"] = query_id;
  j["text"] = text;
  j["entity"] = entity;
  return j.dump();
}

std::string spans_reply(std::string_view query_id, const std::vector<Span>& spans) {
  ordered j;
  j["kind"] = "spans";
  j["query_id"] = query_id;
  j["spans"] = json::array();
  for (const auto& [s, e] : spans) j["spans"].push_back({s, e});
  return j.dump();
}

std::string error_reply(std::string_view query_id, std::string_view message) {
  ordered j;
  j["kind"] = "error";
  j["query_id"] = query_id;
  j["message"] = message;
  return j.dump();
}

namespace {

json parse_message(const std::string& line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::exception&) {
    throw ProtocolError("malformed message: " + line.substr(0, 200), false);
  }
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
    throw ProtocolError("message without a kind: " + line.substr(0, 200), false);
  }
  return j;
}

// Rejects error replies and replies of the wrong kind or query.
void expect(const json& j, std::string_view kind, std::string_view query_id) {
  const std::string got = j["kind"].get<std::string>();
  if (got == "error") {
    throw ProtocolError("server error: " + j.value("message", std::string("(no message)")), false);
  }
  if (got != kind) throw ProtocolError("expected '" + std::string(kind) + "', got '" + got + "'", false);
  if (!j.contains("query_id") || !j["query_id"].is_string() ||
      j["query_id"].get<std::string>() != query_id) {
    throw ProtocolError("reply does not echo query id '" + std::string(query_id) + "'", false);
  }
}

}  // namespace

void parse_hello_reply(const std::string& line) {
  const json j = parse_message(line);
  if (j["kind"] != "hello") throw ProtocolError("expected hello, got: " + line.substr(0, 200), false);
  if (!j.contains("protocol") || !j["protocol"].is_number_integer() ||
      j["protocol"].get<int>() != kProtocolVersion) {
    throw ProtocolError("unsupported protocol version in: " + line.substr(0, 200), false);
  }
}

CandidateScores parse_scores_reply(const std::string& line, const ScoreQuery& query) {
  const json j = parse_message(line);
  expect(j, "scores", query.query_id);
  CandidateScores out;
  out.query_id = query.query_id;
  if (!j.contains("logprobs") || !j["logprobs"].is_array()) {
    throw ProtocolError("scores reply without a logprobs array", false);
  }
  for (const auto& v : j["logprobs"]) {
    // null is how non-finite floats come out of most JSON encoders.
    if (v.is_null()) {
      out.logprobs.push_back(std::nan(""));
    } else if (v.is_number()) {
      out.logprobs.push_back(v.get<double>());
    } else {
      throw ProtocolError("non-numeric score in reply", false);
    }
  }
  validate_scores(query, out);
  return out;
}

std::vector<Span> parse_spans_reply(const std::string& line, std::string_view query_id) {
  const json j = parse_message(line);
  expect(j, "spans", query_id);
  if (!j.contains("spans") || !j["spans"].is_array()) {
    throw ProtocolError("spans reply without a spans array", false);
  }
  std::vector<Span> out;
  for (const auto& s : j["spans"]) {
    if (!s.is_array() || s.size() != 2 || !s[0].is_number_unsigned() || !s[1].is_number_unsigned()) {
      throw ProtocolError("span must be a pair of nonnegative integers", false);
    }
    out.emplace_back(s[0].get<size_t>(), s[1].get<size_t>());
  }
  return out;
}

}  // namespace protocol

ProtocolClient::ProtocolClient(std::string command, std::string role,
                               std::chrono::milliseconds timeout)
    : command_(std::move(command)), role_(std::move(role)), timeout_(timeout) {
  std::lock_guard<std::mutex> lock(mu_);
  start();
}

void ProtocolClient::start() {
  child_.reset();
  child_ = std::make_unique<ChildProcess>(split_command(command_));
  child_->write_line(protocol::hello_request(role_));
  protocol::parse_hello_reply(child_->read_line(timeout_));
}

std::string ProtocolClient::round_trip(const std::string& request) {
  std::lock_guard<std::mutex> lock(mu_);
  for (int attempt = 0;; ++attempt) {
    try {
      if (!child_) start();
      child_->write_line(request);
      return child_->read_line(timeout_);
    } catch (const ProtocolError& e) {
      child_.reset();
      if (!e.retryable() || attempt > 0) throw;
    }
  }
}

ExternalScorer::ExternalScorer(std::string command, std::chrono::milliseconds timeout)
    : client_(std::move(command), "scorer", timeout) {}

CandidateScores ExternalScorer::score(const ScoreQuery& query) {
  validate_query(query);
  return protocol::parse_scores_reply(client_.round_trip(protocol::score_request(query)), query);
}

std::string ExternalScorer::describe() const { return "external scorer: " + client_.command(); }

ScorerPool::ScorerPool(std::vector<std::unique_ptr<Scorer>> members) : members_(std::move(members)) {
  if (members_.empty()) throw UsageError("scorer pool needs at least one member");
  for (size_t k = members_.size(); k > 0; --k) idle_.push_back(k - 1);
}

CandidateScores ScorerPool::score(const ScoreQuery& query) {
  size_t slot;
  {
    std::unique_lock<std::mutex> lock(mu_);
    cv_.wait(lock, [this] { return !idle_.empty(); });
    slot = idle_.back();
    idle_.pop_back();
  }
  struct Release {
    ScorerPool* pool;
    size_t slot;
    ~Release() {
      {
        std::lock_guard<std::mutex> lock(pool->mu_);
        pool->idle_.push_back(slot);
      }
      pool->cv_.notify_one();
    }
  } release{this, slot};
  return members_[slot]->score(query);
}

std::string ScorerPool::describe() const {
  return members_.front()->describe() + " x" + std::to_string(members_.size());
}

ExternalNameDetector::ExternalNameDetector(std::string command, std::chrono::milliseconds timeout)
    : client_(std::move(command), "detector", timeout) {}

std::vector<Span> ExternalNameDetector::spans(std::string_view text, std::string_view entity) const {
  std::string id;
  {
    std::lock_guard<std::mutex> lock(id_mu_);
    id = "d" + std::to_string(next_id_++);
  }
  return protocol::parse_spans_reply(client_.round_trip(protocol::detect_request(id, text, entity)), id);
}

std::vector<NameMention> ExternalNameDetector::detect(const Passage& passage) const {
  std::vector<NameMention> out;
  for (const auto& [s, e] : spans(utf8::encode(passage.text), "person")) {
    if (s >= e || e > passage.text.size()) {
      throw ProtocolError("detector span [" + std::to_string(s) + ", " + std::to_string(e) +
                              ") is outside the passage",
                          false);
    }
    NameMention m;
    m.start = s;
    m.end = e;
    m.surface = utf8::encode(std::u32string_view(passage.text).substr(s, e - s));
    m.sentence_index = passage.sentence_of(s);
    out.push_back(std::move(m));
  }
  validate_mentions(passage, out);
  return out;
}

bool ConformanceReport::passed() const {
  return !checks.empty() &&
         std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

namespace {

bool close_enough(double a, double b) { return std::fabs(a - b) <= 1e-6 * std::max(1.0, std::fabs(a)); }

}  // namespace

ConformanceReport run_conformance(const std::string& command, std::chrono::milliseconds timeout) {
  ConformanceReport report;
  report.command = command;
  auto add = [&report](std::string name, bool ok, std::string detail = "") {
    report.checks.push_back({std::move(name), ok, std::move(detail)});
  };

  std::unique_ptr<ChildProcess> child;
  try {
    child = std::make_unique<ChildProcess>(split_command(command));
    child->write_line(protocol::hello_request("scorer"));
    protocol::parse_hello_reply(child->read_line(timeout));
    add("handshake", true);
  } catch (const Error& e) {
    add("handshake", false, e.what());
    return report;
  }

  auto ask = [&](const ScoreQuery& q) -> std::optional<CandidateScores> {
    child->write_line(protocol::score_request(q));
    const std::string line = child->read_line(timeout);
    const json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw ProtocolError("malformed reply: " + line, false);
    CandidateScores s;
    s.query_id = j.value("query_id", std::string());
    if (j.value("kind", std::string()) != "scores" || !j.contains("logprobs") ||
        !j["logprobs"].is_array()) {
      throw ProtocolError("not a scores reply: " + line.substr(0, 200), false);
    }
    for (const auto& v : j["logprobs"]) s.logprobs.push_back(v.is_number() ? v.get<double>() : std::nan(""));
    return s;
  };

  const std::string text = "Gina arrives and she is furious with Denise for not protecting Jody "
                           "from Kingsley, as [MASK] was meant to be the parent.";
  // Candidates chosen to score apart, otherwise a reordering goes unseen.
  const std::vector<std::string> cands = {"Denise", "the old man", "his friend"};
  std::optional<CandidateScores> base;
  try {
    base = ask(ScoreQuery{"c1", text, cands});
    add("query id echoed", base->query_id == "c1", "got '" + base->query_id + "'");
    add("arity", base->logprobs.size() == cands.size(),
        std::to_string(base->logprobs.size()) + " scores for " + std::to_string(cands.size()) + " candidates");
    add("finite scores", std::all_of(base->logprobs.begin(), base->logprobs.end(),
                                     [](double v) { return std::isfinite(v); }));
  } catch (const Error& e) {
    add("score request", false, e.what());
    return report;
  }
  if (base->logprobs.size() != cands.size()) return report;

  try {
    const std::vector<std::string> permuted = {cands[2], cands[0], cands[1]};
    const auto p = ask(ScoreQuery{"c2", text, permuted});
    const bool ok = p->logprobs.size() == 3 && close_enough(p->logprobs[0], base->logprobs[2]) &&
                    close_enough(p->logprobs[1], base->logprobs[0]) &&
                    close_enough(p->logprobs[2], base->logprobs[1]);
    const bool distinct = !close_enough(base->logprobs[0], base->logprobs[1]) &&
                          !close_enough(base->logprobs[0], base->logprobs[2]) &&
                          !close_enough(base->logprobs[1], base->logprobs[2]);
    add("order preserved under permutation", ok, distinct ? "" : "inconclusive: tied scores");
  } catch (const Error& e) {
    add("order preserved under permutation", false, e.what());
  }

  try {
    bool ok = true;
    std::string detail;
    for (size_t k = 0; k < cands.size(); ++k) {
      const auto s = ask(ScoreQuery{"c3-" + std::to_string(k), text, {cands[k]}});
      if (s->logprobs.size() != 1 || !close_enough(s->logprobs[0], base->logprobs[k])) {
        ok = false;
        detail = "candidate '" + cands[k] + "' scores differently alone";
      }
    }
    add("single-candidate consistency", ok, detail);
  } catch (const Error& e) {
    add("single-candidate consistency", false, e.what());
  }

  try {
    bool ok = true;
    std::string detail;
    for (size_t k = 0; k < cands.size(); ++k) {
      ordered req;
      req["kind"] = "token_scores";
      req["query_id"] = "c4-" + std::to_string(k);
      req["masked_text"] = text;
      req["mask_token"] = "[MASK]";
      req["candidate"] = cands[k];
      child->write_line(req.dump());
      const json j = json::parse(child->read_line(timeout), nullptr, false);
      if (j.is_discarded() || j.value("kind", std::string()) != "token_scores" ||
          !j.contains("logprobs") || !j["logprobs"].is_array() || j["logprobs"].empty()) {
        ok = false;
        detail = "no token_scores reply";
        break;
      }
      double sum = 0.0;
      for (const auto& v : j["logprobs"]) sum += v.is_number() ? v.get<double>() : std::nan("");
      const double mean = sum / static_cast<double>(j["logprobs"].size());
      if (!close_enough(mean, base->logprobs[k])) {
        ok = false;
        detail = "candidate '" + cands[k] + "' is not the mean of its token scores";
      }
    }
    add("token averaging identity", ok, detail);
  } catch (const Error& e) {
    add("token averaging identity", false, e.what());
  }

  try {
    child->write_line(R"({"kind":"score","query_id":"bad","masked_text":"no mask here","candidates":[]})");
    const json j = json::parse(child->read_line(timeout), nullptr, false);
    const bool error_reply = !j.is_discarded() && j.value("kind", std::string()) == "error";
    const auto after = ask(ScoreQuery{"c5", text, {cands[0]}});
    add("survives malformed request", error_reply && after->logprobs.size() == 1,
        error_reply ? "" : "malformed request was not answered with an error");
  } catch (const Error& e) {
    add("survives malformed request", false, e.what());
  }
  return report;
}

}  // namespace crem
