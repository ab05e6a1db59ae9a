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


// crem: mine masked-name examples, split them, report statistics, evaluate
// scorers and check external scorers against the protocol.
//
// The JSON report goes to stdout; a readable summary goes to stderr.

#include <csignal>
#include <cstdio>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "crem/crem.h"

namespace {

using Json = nlohmann::ordered_json;

void on_interrupt(int) { crem_cancel(); }

std::string fmt(const Json& v, int precision = 4) {
  if (v.is_null()) return "-";
  if (v.is_number_float()) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", precision, v.get<double>());
    return buf;
  }
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

void print_pairs(const Json& report) {
  for (const auto& [key, value] : report.items()) {
    if (value.is_object() || value.is_array()) continue;
    std::cerr << "  " << key << std::string(key.size() < 26 ? 26 - key.size() : 1, ' ') << fmt(value) << '\n';
  }
}

void print_eval_table(const Json& r) {
  std::cerr << "  dataset      items   accuracy   F1       F1F      F1M      bias\n";
  char line[256];
  std::snprintf(line, sizeof line, "  %-12s %-7s %-10s %-8s %-8s %-8s %s\n",
                r.value("dataset_kind", std::string()).c_str(), fmt(r["items"]).c_str(),
                fmt(r["accuracy"]).c_str(), fmt(r.value("f1", Json())).c_str(),
                fmt(r.value("f1_feminine", Json())).c_str(), fmt(r.value("f1_masculine", Json())).c_str(),
                fmt(r.value("bias", Json())).c_str());
  std::cerr << line;
  if (r.contains("subsets") && !r["subsets"].empty()) {
    std::cerr << "  subset accuracy:\n";
    for (const auto& [name, s] : r["subsets"].items()) {
      std::cerr << "    " << name << "  " << fmt(s["accuracy"]) << " (" << fmt(s["correct"]) << "/"
                << fmt(s["total"]) << ")\n";
    }
  }
}

void print_summary(const std::string& command, const Json& r) {
  std::cerr << command << ":\n";
  if (command == "eval") {
    print_eval_table(r);
    return;
  }
  if (command == "conformance") {
    for (const auto& c : r["checks"]) {
      std::cerr << "  [" << (c["passed"].get<bool>() ? "pass" : "FAIL") << "] " << c["name"].get<std::string>();
      if (!c["detail"].get<std::string>().empty()) std::cerr << ": " << c["detail"].get<std::string>();
      std::cerr << '\n';
    }
    return;
  }
  print_pairs(r);
  if (r.contains("rejected")) {
    for (const auto& [k, v] : r["rejected"].items()) std::cerr << "  rejected." << k << "  " << fmt(v) << '\n';
  }
  if (r.contains("counts")) {
    for (const auto& [k, v] : r["counts"].items()) std::cerr << "  gender." << k << "  " << fmt(v) << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Masked-name example mining and candidate-scoring evaluation"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  app.set_config("--config", "", "Settings file with key = value lines; flags take precedence");

  std::vector<std::string> inputs;
  std::map<std::string, std::string> values;
  bool deterministic = false;

  app.add_option("--input", inputs, "Corpus, dataset or fixture path");
  const std::vector<std::pair<std::string, std::string>> options = {
      {"output", "Output file (mine) or file prefix (split)"},
      {"detector", "builtin, builtin:<gazetteer> or cmd:<command>"},
      {"scorer", "reference, reference:<counts> or cmd:<command>"},
      {"seed", "Sampling seed"},
      {"workers", "Worker threads and scorer processes"},
      {"alpha", "Margin weight of the training loss (default 10)"},
      {"beta", "Margin of the training loss (default 0.2)"},
      {"holdout-n", "Validation examples to hold out"},
      {"dataset-kind", "wikicrem, gap, dpr, wsc273, pdp, wnli, winogender or winobias"},
      {"dedup-against", "WSC collection whose items are removed from DPR training data"},
      {"stats-kind", "auto, gender or annotations"},
      {"gender-names", "Gender gazetteer (name<TAB>class)"},
      {"timeout-ms", "Reply timeout for external processes"},
  };
  for (const auto& [name, help] : options) app.add_option("--" + name, values[name], help);
  app.add_flag("--deterministic", deterministic, "Write output in input order regardless of workers");

  app.add_subcommand("mine", "Mine masked-name examples from a corpus");
  app.add_subcommand("split", "Hold out a seeded validation sample");
  app.add_subcommand("stats", "Gender ratio of a dataset or the annotation report");
  app.add_subcommand("eval", "Score a dataset and compute its metrics");
  app.add_subcommand("conformance", "Check an external scorer against the protocol");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : CREM_ERR_USAGE;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  crem_config* config = crem_config_create();
  if (!config) return CREM_ERR_INTERNAL;
  auto fail = [config](crem_status status) {
    std::cerr << "crem: " << crem_last_error() << '\n';
    crem_config_destroy(config);
    return static_cast<int>(status);
  };
  for (const auto& in : inputs) {
    if (crem_status s = crem_config_set(config, "input", in.c_str()); s != CREM_OK) return fail(s);
  }
  for (const auto& [name, help] : options) {
    if (app.get_option("--" + name)->count() == 0) continue;
    if (crem_status s = crem_config_set(config, name.c_str(), values[name].c_str()); s != CREM_OK) return fail(s);
  }
  if (deterministic) crem_config_set(config, "deterministic", "true");

  std::signal(SIGINT, on_interrupt);
  std::signal(SIGTERM, on_interrupt);

  char* raw = nullptr;
  crem_status status = CREM_ERR_USAGE;
  if (command == "mine") status = crem_run_mine(config, &raw);
  if (command == "split") status = crem_run_split(config, &raw);
  if (command == "stats") status = crem_run_stats(config, &raw);
  if (command == "eval") status = crem_run_eval(config, &raw);
  if (command == "conformance") status = crem_run_conformance(config, &raw);
  if (status != CREM_OK) return fail(status);

  const Json report = Json::parse(raw);
  crem_string_free(raw);
  crem_config_destroy(config);
  std::cout << report.dump() << '\n';
  print_summary(command, report);
  if (command == "conformance" && !report["passed"].get<bool>()) return CREM_ERR_PROTOCOL;
  return 0;
}
