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


// Recasting WNLI premise/hypothesis pairs as masked choice problems.
//
// The hypothesis is aligned against the premise: the longest shared token
// prefix and suffix around a single premise pronoun identify the pronoun
// site, and what the hypothesis put in its place is the queried candidate.
// Other noun phrases of the premise are the alternatives.

#ifndef CREM_WNLI_H_
#define CREM_WNLI_H_

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "crem/eval.h"
#include "crem/protocol.h"

namespace crem {

class NounPhraseDetector {
 public:
  virtual ~NounPhraseDetector() = default;
  // Ordered, non-overlapping code-point spans.
  virtual std::vector<Span> find(std::u32string_view text) const = 0;
};

// An optional determiner, then up to four content words, trimmed back to the
// last word that is a known noun or capitalized. Without a determiner the
// first word must itself be a noun or capitalized.
class HeuristicNounPhrases : public NounPhraseDetector {
 public:
  HeuristicNounPhrases(std::set<std::u32string> nouns, std::set<std::u32string> function_words,
                       std::set<std::u32string> determiners);
  // Sections "#nouns", "#function" and "#determiner".
  static HeuristicNounPhrases parse(std::string_view lexicon);
  static std::shared_ptr<const HeuristicNounPhrases> default_instance();

  std::vector<Span> find(std::u32string_view text) const override;

 private:
  std::set<std::u32string> nouns_;
  std::set<std::u32string> function_;
  std::set<std::u32string> determiners_;
};

// Asks an external detector for entity "noun".
class ExternalNounPhrases : public NounPhraseDetector {
 public:
  explicit ExternalNounPhrases(std::shared_ptr<ExternalNameDetector> client);
  std::vector<Span> find(std::u32string_view text) const override;

 private:
  std::shared_ptr<ExternalNameDetector> client_;
};

struct WnliAlignment {
  size_t site_start = 0;  // premise code points of the pronoun
  size_t site_end = 0;
  size_t region_start = 0;  // premise span matched by hypothesis prefix..suffix
  size_t region_end = 0;
  std::string queried;  // hypothesis phrase substituted for the pronoun
};

// Empty when no single-pronoun substitution explains the hypothesis.
std::optional<WnliAlignment> align_wnli(std::string_view premise, std::string_view hypothesis);

// Builds the choice item. On alignment failure the item is flagged
// conversion_failed and carries no candidates.
EvalItem wnli_to_schema(std::string_view item_id, std::string_view premise,
                        std::string_view hypothesis, std::optional<bool> label,
                        const NounPhraseDetector& nouns);

}  // namespace crem

#endif  // CREM_WNLI_H_
