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


// Dataset statistics: gender of correct candidates and the report over the
// manually annotated sample.

#ifndef CREM_STATS_H_
#define CREM_STATS_H_

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "crem/cremgen.h"

namespace crem {

enum class GenderClass { kMale, kMostlyMale, kFemale, kMostlyFemale, kAmbiguous, kUnknown };
inline constexpr size_t kGenderClassCount = 6;

std::string_view to_string(GenderClass g);
// "male", "mostly_male", "female", "mostly_female", "andy" (or "ambiguous").
// Throws InputError for anything else.
GenderClass parse_gender_class(std::string_view s);

class GenderGazetteer {
 public:
  // "name<TAB>class" lines.
  static GenderGazetteer parse(std::string_view text);
  static const GenderGazetteer& default_instance();

  void add(std::string_view name, GenderClass g);
  // Case-insensitive lookup of the first whitespace-separated token.
  GenderClass classify(std::string_view candidate) const;

 private:
  std::map<std::string, GenderClass> by_lower_name_;
};

struct GenderReport {
  std::array<size_t, kGenderClassCount> counts{};
  size_t total = 0;
  // (female + mostly_female) / (male + mostly_male); absent without males.
  std::optional<double> ratio;

  size_t count(GenderClass g) const { return counts[static_cast<size_t>(g)]; }
};

// Over correct candidates only.
GenderReport gender_ratio(const std::vector<MaskedExample>& dataset, const GenderGazetteer& gazetteer);
GenderReport gender_ratio(const std::vector<std::string>& correct_candidates,
                          const GenderGazetteer& gazetteer);

struct AnnotationFixture {
  int index = 0;
  std::string text;
  bool ambiguous = false;
  bool natural_pronoun = false;
  std::optional<std::string> annotator_answer;
  std::optional<bool> annotator_correct;
};

// One JSON object per line. Annotator fields must be present exactly when
// the example is not ambiguous; violations throw InputError with the line.
std::vector<AnnotationFixture> parse_annotations(std::string_view text);

struct AnnotationReport {
  size_t total = 0;
  size_t unsolvable = 0;
  size_t solvable = 0;
  size_t annotator_correct = 0;
  size_t natural = 0;
  std::optional<double> annotator_accuracy;  // correct / solvable
  std::optional<double> natural_fraction;    // natural / total
};

AnnotationReport annotation_report(const std::vector<AnnotationFixture>& fixtures);

}  // namespace crem

#endif  // CREM_STATS_H_
