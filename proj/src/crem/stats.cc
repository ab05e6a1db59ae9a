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


#include "crem/stats.h"

#include <nlohmann/json.hpp>

#include "crem/data.h"
#include "crem/error.h"
#include "crem/utf8.h"

namespace crem {

std::string_view to_string(GenderClass g) {
  switch (g) {
    case GenderClass::kMale: return "male";
    case GenderClass::kMostlyMale: return "mostly_male";
    case GenderClass::kFemale: return "female";
    case GenderClass::kMostlyFemale: return "mostly_female";
    case GenderClass::kAmbiguous: return "ambiguous";
    case GenderClass::kUnknown: return "unknown";
  }
  return "unknown";
}

GenderClass parse_gender_class(std::string_view s) {
  if (s == "male") return GenderClass::kMale;
  if (s == "mostly_male") return GenderClass::kMostlyMale;
  if (s == "female") return GenderClass::kFemale;
  if (s == "mostly_female") return GenderClass::kMostlyFemale;
  if (s == "andy" || s == "ambiguous") return GenderClass::kAmbiguous;
  if (s == "unknown") return GenderClass::kUnknown;
  throw InputError("unknown gender class '" + std::string(s) + "'");
}

GenderGazetteer GenderGazetteer::parse(std::string_view text) {
  GenderGazetteer g;
  for (const auto& [name, cls] : data::parse_tab_pairs(text)) {
    g.add(name, parse_gender_class(utf8::trim(cls)));
  }
  return g;
}

const GenderGazetteer& GenderGazetteer::default_instance() {
  static const GenderGazetteer instance = parse(data::embedded("gender_names.tsv"));
  return instance;
}

void GenderGazetteer::add(std::string_view name, GenderClass g) {
  by_lower_name_[utf8::to_lower(utf8::trim(name))] = g;
}

GenderClass GenderGazetteer::classify(std::string_view candidate) const {
  const std::string trimmed = utf8::trim(candidate);
  const size_t sp = trimmed.find_first_of(" \t");
  const std::string first = utf8::to_lower(std::string_view(trimmed).substr(0, sp));
  const auto it = by_lower_name_.find(first);
  return it == by_lower_name_.end() ? GenderClass::kUnknown : it->second;
}

GenderReport gender_ratio(const std::vector<std::string>& correct_candidates,
                          const GenderGazetteer& gazetteer) {
  GenderReport r;
  for (const auto& c : correct_candidates) {
    ++r.counts[static_cast<size_t>(gazetteer.classify(c))];
    ++r.total;
  }
  const size_t male = r.count(GenderClass::kMale) + r.count(GenderClass::kMostlyMale);
  const size_t female = r.count(GenderClass::kFemale) + r.count(GenderClass::kMostlyFemale);
  if (male > 0) r.ratio = static_cast<double>(female) / static_cast<double>(male);
  return r;
}

GenderReport gender_ratio(const std::vector<MaskedExample>& dataset, const GenderGazetteer& gazetteer) {
  std::vector<std::string> correct;
  correct.reserve(dataset.size());
  for (const auto& ex : dataset) correct.push_back(ex.correct);
  return gender_ratio(correct, gazetteer);
}

std::vector<AnnotationFixture> parse_annotations(std::string_view text) {
  std::vector<AnnotationFixture> out;
  long line_no = 0;
  size_t pos = 0;
  while (pos < text.size()) {
    size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    const std::string line = utf8::trim(text.substr(pos, nl - pos));
    pos = nl + 1;
    ++line_no;
    if (line.empty()) continue;

    const nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw InputError("malformed annotation record", line_no);
    AnnotationFixture f;
    try {
      f.index = j.at("index").get<int>();
      f.text = j.at("text").get<std::string>();
      f.ambiguous = j.at("ambiguous").get<bool>();
      f.natural_pronoun = j.at("natural_pronoun").get<bool>();
      // Absent and null annotator fields mean the same thing.
      if (j.contains("annotator_answer") && !j["annotator_answer"].is_null()) {
        f.annotator_answer = j["annotator_answer"].get<std::string>();
      }
      if (j.contains("annotator_correct") && !j["annotator_correct"].is_null()) {
        f.annotator_correct = j["annotator_correct"].get<bool>();
      }
    } catch (const nlohmann::json::exception& e) {
      throw InputError(std::string("annotation record field: ") + e.what(), line_no);
    }
    const bool has_answer = f.annotator_answer.has_value() && f.annotator_correct.has_value();
    const bool has_none = !f.annotator_answer && !f.annotator_correct;
    if (f.ambiguous ? !has_none : !has_answer) {
      throw InputError("annotator fields must be present exactly when not ambiguous", line_no);
    }
    out.push_back(std::move(f));
  }
  return out;
}

AnnotationReport annotation_report(const std::vector<AnnotationFixture>& fixtures) {
  AnnotationReport r;
  for (const auto& f : fixtures) {
    ++r.total;
    if (f.natural_pronoun) ++r.natural;
    if (f.ambiguous) {
      ++r.unsolvable;
      continue;
    }
    ++r.solvable;
    if (f.annotator_correct.value_or(false)) ++r.annotator_correct;
  }
  if (r.solvable > 0) {
    r.annotator_accuracy = static_cast<double>(r.annotator_correct) / static_cast<double>(r.solvable);
  }
  if (r.total > 0) r.natural_fraction = static_cast<double>(r.natural) / static_cast<double>(r.total);
  return r;
}

}  // namespace crem
