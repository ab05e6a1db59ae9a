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


#include "crem/crem.h"

#include <atomic>
#include <cstdlib>
#include <cstring>

#include <nlohmann/json.hpp>

#include "crem/cremgen.h"
#include "crem/error.h"
#include "crem/pipeline.h"
#include "crem/scorer.h"
#include "crem/textio.h"
#include "crem/utf8.h"

struct crem_config {
  crem::RunConfig run;
};

struct crem_scorer {
  std::unique_ptr<crem::Scorer> impl;
  std::atomic<unsigned long> next_query{0};
};

namespace {

thread_local std::string t_last_error;

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

template <typename Fn>
crem_status guarded(Fn&& fn) {
  t_last_error.clear();
  try {
    fn();
    return CREM_OK;
  } catch (const crem::Error& e) {
    t_last_error = e.what();
    return static_cast<crem_status>(e.code());
  } catch (const std::bad_alloc&) {
    t_last_error = "out of memory";
  } catch (const std::exception& e) {
    t_last_error = e.what();
  } catch (...) {
    t_last_error = "unknown error";
  }
  return CREM_ERR_INTERNAL;
}

crem_status need(const void* p, const char* what) {
  if (p) return CREM_OK;
  t_last_error = std::string(what) + " must not be NULL";
  return CREM_ERR_USAGE;
}

crem_status run(crem::Report (*runner)(const crem::RunConfig&), const crem_config* config, char** report) {
  if (need(config, "config") || need(report, "report")) return CREM_ERR_USAGE;
  *report = nullptr;
  return guarded([&] { *report = dup_string(runner(config->run).dump()); });
}

}  // namespace

extern "C" {

const char* crem_version(void) { return "1.0.0"; }

const char* crem_last_error(void) { return t_last_error.c_str(); }

void crem_string_free(char* s) { std::free(s); }

crem_config* crem_config_create(void) {
  try {
    return new crem_config{};
  } catch (...) {
    t_last_error = "out of memory";
    return nullptr;
  }
}

void crem_config_destroy(crem_config* config) { delete config; }

crem_status crem_config_set(crem_config* config, const char* key, const char* value) {
  if (need(config, "config") || need(key, "key") || need(value, "value")) return CREM_ERR_USAGE;
  return guarded([&] { config->run.set(key, value); });
}

crem_status crem_run_mine(const crem_config* config, char** report) {
  return run(crem::run_mine, config, report);
}
crem_status crem_run_split(const crem_config* config, char** report) {
  return run(crem::run_split, config, report);
}
crem_status crem_run_stats(const crem_config* config, char** report) {
  return run(crem::run_stats, config, report);
}
crem_status crem_run_eval(const crem_config* config, char** report) {
  return run(crem::run_eval, config, report);
}
crem_status crem_run_conformance(const crem_config* config, char** report) {
  return run(crem::run_conformance, config, report);
}

void crem_cancel(void) { crem::request_cancel(); }

crem_status crem_segment(const char* text, char** spans_json) {
  if (need(text, "text") || need(spans_json, "spans_json")) return CREM_ERR_USAGE;
  *spans_json = nullptr;
  return guarded([&] {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& s : crem::segment_sentences(text)) out.push_back({s.start, s.end});
    *spans_json = dup_string(out.dump());
  });
}

crem_status crem_generate(const crem_config* config, const char* doc_id, const char* text, char** records) {
  if (need(doc_id, "doc_id") || need(text, "text") || need(records, "records")) return CREM_ERR_USAGE;
  *records = nullptr;
  return guarded([&] {
    const crem::RunConfig defaults;
    const crem::RunConfig& rc = config ? config->run : defaults;
    const auto detector = crem::detector_factory(rc.detector, rc.timeout_ms)();
    crem::Document doc{doc_id, text, crem::SourceKind::kPlainText};
    std::string out;
    for (const auto& ex :
         crem::generate_document(doc, *detector, crem::SentenceSegmenter::default_instance())) {
      out += crem::to_record(ex);
      out += '\n';
    }
    *records = dup_string(out);
  });
}

crem_status crem_loss(double logp_a, double logp_b, double alpha, double beta, double* out) {
  if (need(out, "out")) return CREM_ERR_USAGE;
  return guarded([&] { *out = crem::loss(logp_a, logp_b, crem::LossParams{alpha, beta}); });
}

crem_status crem_select_candidate(const double* scores, size_t n, size_t* index) {
  if (need(index, "index") || (n > 0 && need(scores, "scores"))) return CREM_ERR_USAGE;
  return guarded([&] { *index = crem::select_candidate(std::vector<double>(scores, scores + n)); });
}

crem_status crem_scorer_create(const char* spec, size_t workers, crem_scorer** scorer) {
  if (need(spec, "spec") || need(scorer, "scorer")) return CREM_ERR_USAGE;
  *scorer = nullptr;
  return guarded([&] {
    auto s = std::make_unique<crem_scorer>();
    s->impl = crem::make_scorer(spec, workers, 60000);
    *scorer = s.release();
  });
}

void crem_scorer_destroy(crem_scorer* scorer) { delete scorer; }

crem_status crem_scorer_score(crem_scorer* scorer, const char* masked_text, const char* const* candidates,
                              size_t n, double* logprobs) {
  if (need(scorer, "scorer") || need(masked_text, "masked_text") || need(candidates, "candidates") ||
      need(logprobs, "logprobs")) {
    return CREM_ERR_USAGE;
  }
  return guarded([&] {
    crem::ScoreQuery q;
    q.query_id = "q" + std::to_string(scorer->next_query++);
    q.masked_text = masked_text;
    for (size_t k = 0; k < n; ++k) {
      if (!candidates[k]) throw crem::UsageError("candidate must not be NULL");
      q.candidates.emplace_back(candidates[k]);
    }
    const crem::CandidateScores s = scorer->impl->score(q);
    crem::validate_scores(q, s);
    std::copy(s.logprobs.begin(), s.logprobs.end(), logprobs);
  });
}

}  // extern "C"
