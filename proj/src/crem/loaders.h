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


// Adapters from the public dataset releases to EvalItem.
//
//   wikicrem    mined JSONL records; candidates sorted lexicographically
//   gap         TSV with header ID, Text, Pronoun, Pronoun-offset, A, A-offset,
//               A-coref, B, B-offset, B-coref, URL
//   dpr         blocks of four lines (sentence, pronoun, "c1,c2", answer)
//               separated by blank lines
//   wsc273/pdp  XML collection of <schema> elements (txt1, pron, txt2,
//               answers, correctAnswer)
//   wnli        TSV with header index, sentence1, sentence2[, label]
//   winogender  TSV "sentid<TAB>sentence", sentid
//               occupation.participant.answer.gender[.txt]
//   winobias    "N [The developer] argued ... because [he] ..." lines; type
//               and pro/anti come from the file name
//
// The split tag comes from the file name ("train", "dev"/"validation",
// "test"; GAP "development" is the training split). Errors carry the record
// number.

#ifndef CREM_LOADERS_H_
#define CREM_LOADERS_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "crem/eval.h"
#include "crem/names.h"

namespace crem {

class NounPhraseDetector;

struct LoadOptions {
  // GAP candidate extraction; the built-in detector when null.
  const NameDetector* detector = nullptr;
  // WNLI alternatives; the built-in heuristic when null.
  const NounPhraseDetector* nouns = nullptr;
  // Overrides the split inferred from the file name.
  std::optional<std::string> split;
};

std::vector<EvalItem> load_dataset(DatasetKind kind, const std::string& path,
                                   const LoadOptions& options = {});

// Same, from text already in memory; `name` stands in for the file name.
std::vector<EvalItem> load_dataset_text(DatasetKind kind, std::string_view text,
                                        std::string_view name, const LoadOptions& options = {});

// "train", "validation", "test" or "" from a file name.
std::string split_from_name(std::string_view name);

// "fem", "masc" or "neutral" for an English third-person pronoun, "" otherwise.
std::string pronoun_gender(std::string_view pronoun);

}  // namespace crem

#endif  // CREM_LOADERS_H_
