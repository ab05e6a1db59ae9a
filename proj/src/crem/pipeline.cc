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


#include "crem/pipeline.h"

#include <atomic>
#include <cmath>
#include <limits>
#include <condition_variable>
#include <cstdio>
#include <deque>
#include <fstream>
#include <map>
#include <mutex>
#include <thread>

#include "crem/cremgen.h"
#include "crem/data.h"
#include "crem/error.h"
#include "crem/loaders.h"
#include "crem/protocol.h"
#include "crem/stats.h"
#include "crem/textio.h"
#include "crem/utf8.h"

namespace crem {

namespace {

std::atomic<bool> g_cancel{false};

size_t parse_count(const std::string& key, const std::string& value) {
  try {
    size_t used = 0;
    const unsigned long long v = std::stoull(value, &used);
    if (used != value.size() || value.find('-') != std::string::npos) throw std::invalid_argument(value);
    return static_cast<size_t>(v);
  } catch (const std::exception&) {
    throw UsageError(key + " expects a nonnegative integer, got '" + value + "'");
  }
}

double parse_real(const std::string& key, const std::string& value) {
  try {
    size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw UsageError(key + " expects a number, got '" + value + "'");
  }
}

bool parse_flag(const std::string& key, const std::string& value) {
  const std::string v = utf8::to_lower(value);
  if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
  if (v == "0" || v == "false" || v == "no" || v == "off") return false;
  throw UsageError(key + " expects true or false, got '" + value + "'");
}

const std::string& single_input(const RunConfig& config) {
  if (config.inputs.size() != 1) throw UsageError("exactly one --input is required");
  return config.inputs.front();
}

std::string command_of(const std::string& spec) {
  if (spec.rfind("cmd:", 0) != 0 || spec.size() == 4) {
    throw UsageError("external specs look like cmd:<command line>, got '" + spec + "'");
  }
  return spec.substr(4);
}

template <typename T>
nlohmann::ordered_json optional_json(const std::optional<T>& v) {
  return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

nlohmann::ordered_json confusion_json(const Confusion& c) {
  nlohmann::ordered_json j;
  j["tp"] = c.tp;
  j["fp"] = c.fp;
  j["fn"] = c.fn;
  j["tn"] = c.tn;
  return j;
}

}  // namespace

void request_cancel() { g_cancel.store(true); }
void reset_cancel() { g_cancel.store(false); }

void RunConfig::set(const std::string& key, const std::string& value) {
  if (key == "input") {
    inputs.push_back(value);
  } else if (key == "output") {
    output = value;
  } else if (key == "detector") {
    detector = value;
  } else if (key == "scorer") {
    scorer = value;
  } else if (key == "seed") {
    seed = parse_count(key, value);
  } else if (key == "workers") {
    workers = parse_count(key, value);
    if (workers == 0) throw UsageError("workers must be at least 1");
  } else if (key == "deterministic") {
    deterministic = parse_flag(key, value);
  } else if (key == "alpha" || key == "beta") {
    const double v = parse_real(key, value);
    if (!(v >= 0.0)) throw UsageError(key + " must be nonnegative");
    (key == "alpha" ? loss.alpha : loss.beta) = v;
  } else if (key == "holdout-n") {
    holdout_n = parse_count(key, value);
  } else if (key == "dataset-kind") {
    parse_dataset_kind(value);
    dataset_kind = value;
  } else if (key == "dedup-against") {
    dedup_against = value;
  } else if (key == "stats-kind") {
    if (value != "auto" && value != "gender" && value != "annotations") {
      throw UsageError("stats-kind must be auto, gender or annotations");
    }
    stats_kind = value;
  } else if (key == "gender-names") {
    gender_names = value;
  } else if (key == "timeout-ms") {
    timeout_ms = static_cast<long>(parse_count(key, value));
    if (timeout_ms == 0) throw UsageError("timeout-ms must be positive");
  } else {
    throw UsageError("unknown setting '" + key + "'");
  }
}

std::function<std::shared_ptr<const NameDetector>()> detector_factory(const std::string& spec,
                                                                      long timeout_ms) {
  if (spec == "builtin") {
    std::shared_ptr<const NameDetector> d = GazetteerDetector::default_instance();
    return [d] { return d; };
  }
  if (spec.rfind("builtin:", 0) == 0) {
    std::shared_ptr<const NameDetector> d = std::make_shared<const GazetteerDetector>(
        Gazetteer::parse(data::read_file(spec.substr(8))),
        GazetteerDetector::parse_stopwords(data::embedded("stopwords.txt")));
    return [d] { return d; };
  }
  const std::string command = command_of(spec);
  return [command, timeout_ms] {
    return std::make_shared<const ExternalNameDetector>(command, std::chrono::milliseconds(timeout_ms));
  };
}

std::unique_ptr<Scorer> make_scorer(const std::string& spec, size_t workers, long timeout_ms) {
  if (spec == "reference") return std::make_unique<UnigramScorer>(*UnigramScorer::default_instance());
  if (spec.rfind("reference:", 0) == 0) {
    return std::make_unique<UnigramScorer>(UnigramScorer::parse(data::read_file(spec.substr(10))));
  }
  const std::string command = command_of(spec);
  std::vector<std::unique_ptr<Scorer>> members;
  for (size_t k = 0; k < std::max<size_t>(1, workers); ++k) {
    members.push_back(std::make_unique<ExternalScorer>(command, std::chrono::milliseconds(timeout_ms)));
  }
  return std::make_unique<ScorerPool>(std::move(members));
}

Report run_mine(const RunConfig& config) {
  const std::string& input = single_input(config);
  if (config.output.empty()) throw UsageError("mine needs --output");
  const size_t workers = std::max<size_t>(1, config.workers);
  const auto make_detector = detector_factory(config.detector, config.timeout_ms);
  std::vector<std::shared_ptr<const NameDetector>> detectors;
  for (size_t w = 0; w < workers; ++w) detectors.push_back(make_detector());

  DocumentStream stream(CorpusSource::detect(input));
  std::ofstream out(config.output, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write " + config.output);

  struct Job {
    size_t seq;
    Document doc;
  };
  struct Done {
    std::vector<MaskedExample> examples;
    GenerationStats stats;
    bool failed = false;
  };

  std::mutex mu;
  std::condition_variable cv;
  std::deque<Job> jobs;
  std::map<size_t, Done> done;
  bool eof = false;
  size_t in_flight = 0;
  const size_t window = 4 * workers;
  std::exception_ptr reader_error;

  std::thread reader([&] {
    try {
      size_t seq = 0;
      while (!g_cancel.load()) {
        std::optional<Document> doc = stream.next();
        if (!doc) break;
        std::unique_lock<std::mutex> lock(mu);
        cv.wait(lock, [&] { return in_flight < window; });
        jobs.push_back(Job{seq++, std::move(*doc)});
        ++in_flight;
        cv.notify_all();
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(mu);
      reader_error = std::current_exception();
    }
    std::lock_guard<std::mutex> lock(mu);
    eof = true;
    cv.notify_all();
  });

  std::vector<std::thread> pool;
  for (size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      const SentenceSegmenter& segmenter = SentenceSegmenter::default_instance();
      while (true) {
        Job job;
        {
          std::unique_lock<std::mutex> lock(mu);
          cv.wait(lock, [&] { return !jobs.empty() || eof; });
          if (jobs.empty()) return;
          job = std::move(jobs.front());
          jobs.pop_front();
        }
        Done result;
        try {
          result.examples = generate_document(job.doc, *detectors[w], segmenter, &result.stats);
        } catch (const std::exception&) {
          result = Done{};
          result.stats.documents = 1;
          result.failed = true;
        }
        std::lock_guard<std::mutex> lock(mu);
        done.emplace(job.seq, std::move(result));
        cv.notify_all();
      }
    });
  }

  GenerationStats total;
  size_t examples = 0;
  size_t document_errors = 0;
  size_t next_seq = 0;
  {
    std::unique_lock<std::mutex> lock(mu);
    // In deterministic mode only the next document in input order counts.
    auto ready = [&] { return config.deterministic ? done.count(next_seq) > 0 : !done.empty(); };
    while (true) {
      cv.wait(lock, [&] { return ready() || (eof && in_flight == 0); });
      if (!ready() && eof && in_flight == 0) break;
      while (ready()) {
        auto it = config.deterministic ? done.find(next_seq) : done.begin();
        Done result = std::move(it->second);
        done.erase(it);
        ++next_seq;
        lock.unlock();
        for (const auto& ex : result.examples) out << to_record(ex) << '\n';
        examples += result.examples.size();
        total += result.stats;
        if (result.failed) ++document_errors;
        lock.lock();
        --in_flight;
        cv.notify_all();
      }
    }
  }
  reader.join();
  for (auto& t : pool) t.join();
  out.flush();
  if (!out) throw InputError("failed writing " + config.output);
  if (reader_error) std::rethrow_exception(reader_error);
  total.malformed_pages = stream.malformed_pages();

  Report r;
  r["command"] = "mine";
  r["input"] = input;
  r["output"] = config.output;
  r["detector"] = config.detector;
  r["workers"] = workers;
  r["deterministic"] = config.deterministic;
  r["documents"] = total.documents;
  r["passages"] = total.passages;
  r["passages_with_repetition"] = total.passages_with_repetition;
  r["examples"] = examples;
  r["emitted_single_sentence"] = total.emitted_single_sentence;
  r["emitted_two_sentence"] = total.emitted_two_sentence;
  r["rejected"] = {{"no_prior_alternative", total.no_prior_alternative},
                   {"not_in_first_sentence", total.not_in_first_sentence},
                   {"mixed_sentence_discard", total.discarded_mixed_sentence},
                   {"duplicate_window", total.duplicate_windows}};
  r["detector_failures"] = total.detector_failures;
  r["document_errors"] = document_errors;
  r["malformed_pages"] = total.malformed_pages;
  r["cancelled"] = g_cancel.load();
  return r;
}

Report run_split(const RunConfig& config) {
  const std::string& input = single_input(config);
  if (config.output.empty()) throw UsageError("split needs --output (a file prefix)");
  if (!config.holdout_n) throw UsageError("split needs --holdout-n");
  if (!config.seed) throw UsageError("split needs --seed");

  // First pass: count records.
  size_t total = 0;
  {
    std::ifstream in(input, std::ios::binary);
    if (!in) throw InputError("cannot open " + input);
    std::string line;
    while (std::getline(in, line)) {
      if (!utf8::trim(line).empty()) ++total;
    }
  }
  const std::vector<size_t> picked = holdout_indices(total, *config.holdout_n, *config.seed);

  const std::string train_path = config.output + ".train.jsonl";
  const std::string validation_path = config.output + ".validation.jsonl";
  std::ofstream train(train_path, std::ios::binary | std::ios::trunc);
  std::ofstream validation(validation_path, std::ios::binary | std::ios::trunc);
  if (!train || !validation) throw InputError("cannot write split files with prefix " + config.output);

  std::ifstream in(input, std::ios::binary);
  if (!in) throw InputError("cannot open " + input);
  std::string line;
  long line_no = 0;
  size_t index = 0;
  size_t p = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (utf8::trim(line).empty()) continue;
    parse_record(line, line_no);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (p < picked.size() && picked[p] == index) {
      validation << line << '\n';
      ++p;
    } else {
      train << line << '\n';
    }
    ++index;
  }
  train.flush();
  validation.flush();
  if (!train || !validation) throw InputError("failed writing split files");

  Report r;
  r["command"] = "split";
  r["input"] = input;
  r["total"] = total;
  r["holdout_n"] = *config.holdout_n;
  r["seed"] = *config.seed;
  r["train"] = total - picked.size();
  r["validation"] = picked.size();
  r["train_path"] = train_path;
  r["validation_path"] = validation_path;
  return r;
}

Report run_stats(const RunConfig& config) {
  const std::string& input = single_input(config);
  const std::string text = data::read_file(input);
  std::string kind = config.stats_kind;
  if (kind == "auto") {
    kind = "gender";
    const size_t start = text.find_first_not_of(" \t\r\n");
    if (start != std::string::npos) {
      const size_t nl = text.find('\n', start);
      const auto first = nlohmann::json::parse(text.substr(start, nl == std::string::npos ? nl : nl - start),
                                               nullptr, false);
      if (first.is_object() && first.contains("annotator_answer")) kind = "annotations";
    }
  }

  Report r;
  r["command"] = "stats";
  r["input"] = input;
  r["kind"] = kind;
  if (kind == "annotations") {
    std::vector<AnnotationFixture> fixtures;
    try {
      fixtures = parse_annotations(text);
    } catch (const InputError& e) {
      throw InputError(input + ": " + e.what());
    }
    const AnnotationReport a = annotation_report(fixtures);
    r["total"] = a.total;
    r["unsolvable"] = a.unsolvable;
    r["solvable"] = a.solvable;
    r["annotator_correct"] = a.annotator_correct;
    r["annotator_accuracy"] = optional_json(a.annotator_accuracy);
    r["natural"] = a.natural;
    r["natural_fraction"] = optional_json(a.natural_fraction);
    return r;
  }

  const GenderGazetteer gazetteer = config.gender_names.empty()
                                        ? GenderGazetteer::default_instance()
                                        : GenderGazetteer::parse(data::read_file(config.gender_names));
  std::vector<MaskedExample> dataset;
  try {
    dataset = read_records(input);
  } catch (const InputError& e) {
    throw InputError(input + ": " + e.what());
  }
  const GenderReport g = gender_ratio(dataset, gazetteer);
  r["examples"] = g.total;
  nlohmann::ordered_json counts;
  for (size_t k = 0; k < kGenderClassCount; ++k) {
    counts[std::string(to_string(static_cast<GenderClass>(k)))] = g.counts[k];
  }
  r["counts"] = counts;
  r["male"] = g.count(GenderClass::kMale) + g.count(GenderClass::kMostlyMale);
  r["female"] = g.count(GenderClass::kFemale) + g.count(GenderClass::kMostlyFemale);
  r["ratio"] = optional_json(g.ratio);
  return r;
}

Report run_eval(const RunConfig& config) {
  const std::string& input = single_input(config);
  if (config.dataset_kind.empty()) throw UsageError("eval needs --dataset-kind");
  const DatasetKind kind = parse_dataset_kind(config.dataset_kind);
  if (!config.dedup_against.empty() && kind != DatasetKind::kDpr) {
    throw UsageError("--dedup-against applies to dpr data only");
  }

  std::shared_ptr<const NameDetector> detector;
  LoadOptions options;
  if (kind == DatasetKind::kGap) {
    detector = detector_factory(config.detector, config.timeout_ms)();
    options.detector = detector.get();
  }
  std::vector<EvalItem> items = load_dataset(kind, input, options);
  const size_t loaded = items.size();

  Report r;
  r["command"] = "eval";
  r["dataset_kind"] = std::string(to_string(kind));
  r["input"] = input;
  r["loaded"] = loaded;

  if (!config.dedup_against.empty()) {
    const auto wsc = load_dataset(DatasetKind::kWsc273, config.dedup_against);
    std::vector<EvalItem> train;
    std::vector<EvalItem> rest;
    for (auto& item : items) {
      (item.tags["split"] == "train" ? train : rest).push_back(std::move(item));
    }
    DedupResult d = dedupe_dpr(train, wsc);
    items = std::move(d.items);
    items.insert(items.end(), rest.begin(), rest.end());
    r["dedup_removed"] = d.removed;
  }
  if (kind == DatasetKind::kGap) {
    const size_t before = items.size();
    items = gap_discard_unanswerable(items);
    r["gap_discarded"] = before - items.size();
  }

  const auto scorer = make_scorer(config.scorer, config.workers, config.timeout_ms);
  r["scorer"] = scorer->describe();
  const std::vector<ItemOutcome> outcomes = score_items(items, *scorer, config.workers);
  const Metrics m = aggregate(kind, items, outcomes);

  r["items"] = m.items;
  r["scored"] = m.scored;
  r["correct"] = m.correct;
  r["accuracy"] = optional_json(m.accuracy);
  if (kind == DatasetKind::kGap) {
    r["f1"] = optional_json(m.f1);
    r["f1_feminine"] = optional_json(m.f1_feminine);
    r["f1_masculine"] = optional_json(m.f1_masculine);
    r["bias"] = optional_json(m.bias);
    r["confusion"] = confusion_json(m.overall);
    r["confusion_feminine"] = confusion_json(m.feminine);
    r["confusion_masculine"] = confusion_json(m.masculine);
    r["extraction_failures"] = m.extraction_failures;
    try {
      r["f1_cap"] = f1_cap(items);
    } catch (const UsageError&) {
      r["f1_cap"] = nullptr;
    }
  }
  if (kind == DatasetKind::kWnli) {
    r["conversion_failures"] = m.conversion_failures;
    r["unlabelled"] = m.unlabelled;
  }

  // Mean training loss of the scorer on choice items: correct candidate
  // against its strongest competitor.
  double loss_sum = 0.0;
  size_t loss_n = 0;
  for (size_t k = 0; k < items.size(); ++k) {
    const auto* g = std::get_if<GoldChoice>(&items[k].gold);
    const auto& s = outcomes[k].scores;
    if (!g || s.size() < 2 || g->index >= s.size()) continue;
    double rival = -std::numeric_limits<double>::infinity();
    for (size_t c = 0; c < s.size(); ++c) {
      if (c != g->index) rival = std::max(rival, s[c]);
    }
    loss_sum += loss(s[g->index], rival, config.loss);
    ++loss_n;
  }
  r["alpha"] = config.loss.alpha;
  r["beta"] = config.loss.beta;
  r["mean_loss"] = loss_n ? nlohmann::ordered_json(loss_sum / static_cast<double>(loss_n))
                          : nlohmann::ordered_json(nullptr);

  nlohmann::ordered_json subsets = nlohmann::ordered_json::object();
  for (const auto& [name, s] : m.subsets) {
    subsets[name] = {{"correct", s.correct},
                     {"total", s.total},
                     {"accuracy", s.total ? static_cast<double>(s.correct) / static_cast<double>(s.total) : 0.0}};
  }
  r["subsets"] = subsets;
  r["scorer_failures"] = m.scorer_failures;
  r["failed_items"] = m.failed_items;
  return r;
}

Report run_conformance(const RunConfig& config) {
  const ConformanceReport c =
      crem::run_conformance(command_of(config.scorer), std::chrono::milliseconds(config.timeout_ms));
  Report r;
  r["command"] = "conformance";
  r["scorer"] = c.command;
  r["passed"] = c.passed();
  r["checks"] = nlohmann::ordered_json::array();
  for (const auto& check : c.checks) {
    r["checks"].push_back({{"name", check.name}, {"passed", check.passed}, {"detail", check.detail}});
  }
  return r;
}

}  // namespace crem
