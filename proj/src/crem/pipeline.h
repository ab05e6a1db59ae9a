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


// End-to-end runs behind the CLI and the C API. Each run returns a JSON
// report; files are written as a side effect.

#ifndef CREM_PIPELINE_H_
#define CREM_PIPELINE_H_

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "crem/eval.h"
#include "crem/names.h"
#include "crem/scorer.h"

namespace crem {

struct RunConfig {
  std::vector<std::string> inputs;
  std::string output;
  std::string detector = "builtin";   // builtin | builtin:<gazetteer> | cmd:<command>
  std::string scorer = "reference";   // reference | reference:<counts> | cmd:<command>
  std::optional<uint64_t> seed;
  size_t workers = 1;
  bool deterministic = false;
  LossParams loss;
  std::optional<size_t> holdout_n;
  std::string dataset_kind;
  std::string dedup_against;  // WSC file removed from DPR training data
  std::string stats_kind = "auto";  // auto | gender | annotations
  std::string gender_names;         // gender gazetteer, shipped one when empty
  long timeout_ms = 60000;

  // Sets a field from its kebab-case flag name; throws UsageError for an
  // unknown key or a bad value.
  void set(const std::string& key, const std::string& value);
};

using Report = nlohmann::ordered_json;

Report run_mine(const RunConfig& config);
Report run_split(const RunConfig& config);
Report run_stats(const RunConfig& config);
Report run_eval(const RunConfig& config);
Report run_conformance(const RunConfig& config);

// Builds a detector or scorer from its spec string.
std::function<std::shared_ptr<const NameDetector>()> detector_factory(const std::string& spec,
                                                                      long timeout_ms);
std::unique_ptr<Scorer> make_scorer(const std::string& spec, size_t workers, long timeout_ms);

// Asks running mining jobs to stop reading input; documents already handed
// to workers are finished and written. Async-signal-safe.
void request_cancel();
void reset_cancel();

}  // namespace crem

#endif  // CREM_PIPELINE_H_
