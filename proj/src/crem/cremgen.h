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

// Masked-name example generation.
//
// A passage yields examples when some name key R occurs at least twice. One
// non-first occurrence m of R is masked and every other name B that occurs
// before m becomes the incorrect candidate of one example. Which (m, B) pairs
// qualify depends on the passage length:
//
//   one sentence:  m follows an occurrence of R and an occurrence of B.
//   two sentences: m lies in sentence 2, and R and B both occur in sentence 1.
//                  If exactly one of R and B also occurs in sentence 2 before
//                  m, the pair is discarded.
//
// m is the earliest non-first occurrence of R with at least one qualifying B.

#ifndef CREM_CREMGEN_H_
#define CREM_CREMGEN_H_

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "crem/names.h"
#include "crem/textio.h"

namespace crem {

inline constexpr std::string_view kMaskToken = "[MASK]";

struct MaskedExample {
  std::string example_id;
  std::string masked_text;
  std::string correct;    // key of the masked name
  std::string incorrect;  // key of the alternative
  size_t mask_offset = 0;  // code points into masked_text
  std::string doc_id;
  size_t passage_start = 0;  // document offsets of the source passage
  size_t passage_end = 0;

  size_t absolute_mask_offset() const { return passage_start + mask_offset; }
  bool operator==(const MaskedExample&) const = default;
};

struct GenerationStats {
  size_t documents = 0;
  size_t passages = 0;
  size_t passages_with_repetition = 0;
  size_t emitted_single_sentence = 0;
  size_t emitted_two_sentence = 0;
  // Repeated keys with no qualifying alternative anywhere.
  size_t no_prior_alternative = 0;
  // Two-sentence pairs where R or B is missing from sentence 1.
  size_t not_in_first_sentence = 0;
  // Two-sentence pairs dropped by the discard rule.
  size_t discarded_mixed_sentence = 0;
  // Identical (doc, mask offset, incorrect) already emitted from a smaller window.
  size_t duplicate_windows = 0;
  size_t detector_failures = 0;
  size_t malformed_pages = 0;

  GenerationStats& operator+=(const GenerationStats& o);
};

// Deterministic id: 16 hex digits of FNV-1a over (doc_id, absolute mask
// offset, incorrect key).
std::string example_id(std::string_view doc_id, size_t absolute_mask_offset,
                       std::string_view incorrect);

// Examples for one passage, ordered by (mask_offset, incorrect). Passages
// whose text already contains the mask token yield nothing.
std::vector<MaskedExample> generate(const Passage& passage,
                                    const std::vector<NameMention>& mentions,
                                    GenerationStats* stats = nullptr);

// Runs segmentation, windows, detection and generation over one document and
// suppresses duplicates across overlapping windows. Detector failures skip
// the passage and are counted.
std::vector<MaskedExample> generate_document(const Document& doc, const NameDetector& detector,
                                             const SentenceSegmenter& segmenter,
                                             GenerationStats* stats = nullptr);

// Uniform sample of `n` indices out of [0, total), sorted ascending. Uses
// mt19937_64 and rejection sampling, so results do not depend on the
// standard library. Throws UsageError when n > total.
std::vector<size_t> holdout_indices(size_t total, size_t n, uint64_t seed);

// (train, validation); both keep input order.
std::pair<std::vector<MaskedExample>, std::vector<MaskedExample>> holdout_split(
    const std::vector<MaskedExample>& dataset, size_t n, uint64_t seed);

// One JSON object per line with keys example_id, masked_text, correct,
// incorrect, doc_id, mask_offset, passage_start, passage_end.
std::string to_record(const MaskedExample& example);
// Throws InputError (with `line_no`) on malformed records.
MaskedExample parse_record(std::string_view line, long line_no = 0);
std::vector<MaskedExample> read_records(const std::string& path);

}  // namespace crem

#endif  // CREM_CREMGEN_H_
