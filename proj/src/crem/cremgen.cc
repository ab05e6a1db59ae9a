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

#include "crem/cremgen.h"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <random>

#include <nlohmann/json.hpp>

#include "crem/error.h"
#include "crem/utf8.h"

namespace crem {

GenerationStats& GenerationStats::operator+=(const GenerationStats& o) {
  documents += o.documents;
  passages += o.passages;
  passages_with_repetition += o.passages_with_repetition;
  emitted_single_sentence += o.emitted_single_sentence;
  emitted_two_sentence += o.emitted_two_sentence;
  no_prior_alternative += o.no_prior_alternative;
  not_in_first_sentence += o.not_in_first_sentence;
  discarded_mixed_sentence += o.discarded_mixed_sentence;
  duplicate_windows += o.duplicate_windows;
  detector_failures += o.detector_failures;
  malformed_pages += o.malformed_pages;
  return *this;
}

std::string example_id(std::string_view doc_id, size_t absolute_mask_offset,
                       std::string_view incorrect) {
  uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::string_view bytes) {
    for (unsigned char c : bytes) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
  };
  mix(doc_id);
  mix("\x1f");
  mix(std::to_string(absolute_mask_offset));
  mix("\x1f");
  mix(incorrect);
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

MaskedExample make_example(const Passage& passage, const NameMention& masked,
                           const std::string& correct, const std::string& incorrect) {
  const std::u32string correct32 = utf8::decode(correct);
  std::u32string text = passage.text;
  text.replace(masked.start, correct32.size(), utf8::decode(kMaskToken));
  MaskedExample ex;
  ex.masked_text = utf8::encode(text);
  ex.correct = correct;
  ex.incorrect = incorrect;
  ex.mask_offset = masked.start;
  ex.doc_id = passage.doc_id;
  ex.passage_start = passage.doc_start();
  ex.passage_end = passage.doc_end();
  ex.example_id = example_id(ex.doc_id, ex.absolute_mask_offset(), incorrect);
  return ex;
}

}  // namespace

std::vector<MaskedExample> generate(const Passage& passage,
                                    const std::vector<NameMention>& mentions,
                                    GenerationStats* stats) {
  GenerationStats local;
  GenerationStats& st = stats ? *stats : local;
  ++st.passages;
  std::vector<MaskedExample> out;
  if (passage.text.find(utf8::decode(kMaskToken)) != std::u32string::npos) return out;

  std::vector<std::string> keys;
  keys.reserve(mentions.size());
  for (const auto& m : mentions) keys.push_back(name_key(m));

  // Occurrence lists per key, in mention order.
  std::map<std::string, std::vector<size_t>> occurrences;
  for (size_t k = 0; k < keys.size(); ++k) occurrences[keys[k]].push_back(k);

  const bool two_sentences = passage.boundary.has_value();
  bool any_repetition = false;

  for (const auto& [repeated, occ] : occurrences) {
    if (occ.size() < 2) continue;
    any_repetition = true;
    bool emitted = false;
    bool saw_no_prior = false;

    for (size_t oi = 1; oi < occ.size() && !emitted; ++oi) {
      const size_t m = occ[oi];
      std::vector<std::string> chosen;

      if (!two_sentences) {
        std::set<std::string> prior;
        for (size_t k = 0; k < m; ++k) {
          if (keys[k] != repeated) prior.insert(keys[k]);
        }
        if (prior.empty()) saw_no_prior = true;
        chosen.assign(prior.begin(), prior.end());
      } else {
        if (mentions[m].sentence_index != 1) continue;
        auto in_first = [&](const std::string& key) {
          for (size_t k : occurrences[key]) {
            if (mentions[k].sentence_index == 0) return true;
          }
          return false;
        };
        auto in_second_before_mask = [&](const std::string& key) {
          for (size_t k : occurrences[key]) {
            if (k < m && mentions[k].sentence_index == 1) return true;
          }
          return false;
        };
        if (!in_first(repeated)) {
          ++st.not_in_first_sentence;
          continue;
        }
        const bool repeated_shares = in_second_before_mask(repeated);
        bool any_alternative = false;
        for (const auto& [other, other_occ] : occurrences) {
          if (other == repeated) continue;
          if (!in_first(other)) {
            if (mentions[other_occ.front()].start < mentions[m].start) {
              ++st.not_in_first_sentence;
            }
            continue;
          }
          any_alternative = true;
          if (in_second_before_mask(other) != repeated_shares) {
            ++st.discarded_mixed_sentence;
            continue;
          }
          chosen.push_back(other);
        }
        if (!any_alternative) saw_no_prior = true;
      }

      for (const auto& alternative : chosen) {
        out.push_back(make_example(passage, mentions[m], repeated, alternative));
      }
      if (!chosen.empty()) {
        emitted = true;
        (two_sentences ? st.emitted_two_sentence : st.emitted_single_sentence) += chosen.size();
      }
    }
    if (!emitted && saw_no_prior) ++st.no_prior_alternative;
  }
  if (any_repetition) ++st.passages_with_repetition;

  std::sort(out.begin(), out.end(), [](const MaskedExample& a, const MaskedExample& b) {
    return std::tie(a.mask_offset, a.incorrect) < std::tie(b.mask_offset, b.incorrect);
  });
  return out;
}

std::vector<MaskedExample> generate_document(const Document& doc, const NameDetector& detector,
                                             const SentenceSegmenter& segmenter,
                                             GenerationStats* stats) {
  GenerationStats local;
  GenerationStats& st = stats ? *stats : local;
  ++st.documents;
  std::vector<MaskedExample> out;
  std::set<std::pair<size_t, std::string>> seen;
  for (const Passage& passage : windows(doc, segmenter)) {
    std::vector<NameMention> mentions;
    try {
      mentions = detector.detect(passage);
    } catch (const Error&) {
      ++st.detector_failures;
      ++st.passages;
      continue;
    }
    for (auto& ex : generate(passage, mentions, &st)) {
      if (!seen.emplace(ex.absolute_mask_offset(), ex.incorrect).second) {
        ++st.duplicate_windows;
        (passage.boundary ? st.emitted_two_sentence : st.emitted_single_sentence) -= 1;
        continue;
      }
      out.push_back(std::move(ex));
    }
  }
  return out;
}

std::vector<size_t> holdout_indices(size_t total, size_t n, uint64_t seed) {
  if (n > total) {
    throw UsageError("holdout size " + std::to_string(n) + " exceeds dataset size " +
                     std::to_string(total));
  }
  std::mt19937_64 rng(seed);
  auto bounded = [&rng](uint64_t range) {
    const uint64_t threshold = (0 - range) % range;
    while (true) {
      const uint64_t r = rng();
      if (r >= threshold) return r % range;
    }
  };
  std::vector<size_t> idx(total);
  std::iota(idx.begin(), idx.end(), size_t{0});
  for (size_t k = 0; k < n; ++k) {
    const size_t j = k + static_cast<size_t>(bounded(total - k));
    std::swap(idx[k], idx[j]);
  }
  idx.resize(n);
  std::sort(idx.begin(), idx.end());
  return idx;
}

std::pair<std::vector<MaskedExample>, std::vector<MaskedExample>> holdout_split(
    const std::vector<MaskedExample>& dataset, size_t n, uint64_t seed) {
  const std::vector<size_t> picked = holdout_indices(dataset.size(), n, seed);
  std::vector<MaskedExample> train;
  std::vector<MaskedExample> validation;
  train.reserve(dataset.size() - n);
  validation.reserve(n);
  size_t p = 0;
  for (size_t k = 0; k < dataset.size(); ++k) {
    if (p < picked.size() && picked[p] == k) {
      validation.push_back(dataset[k]);
      ++p;
    } else {
      train.push_back(dataset[k]);
    }
  }
  return {std::move(train), std::move(validation)};
}

std::string to_record(const MaskedExample& ex) {
  nlohmann::ordered_json j;
  j["example_id"] = ex.example_id;
  j["masked_text"] = ex.masked_text;
  j["correct"] = ex.correct;
  j["incorrect"] = ex.incorrect;
  j["doc_id"] = ex.doc_id;
  j["mask_offset"] = ex.mask_offset;
  j["passage_start"] = ex.passage_start;
  j["passage_end"] = ex.passage_end;
  return j.dump();
}

MaskedExample parse_record(std::string_view line, long line_no) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed dataset record: ") + e.what(), line_no);
  }
  if (!j.is_object()) throw InputError("dataset record is not an object", line_no);
  MaskedExample ex;
  try {
    ex.example_id = j.at("example_id").get<std::string>();
    ex.masked_text = j.at("masked_text").get<std::string>();
    ex.correct = j.at("correct").get<std::string>();
    ex.incorrect = j.at("incorrect").get<std::string>();
    ex.doc_id = j.at("doc_id").get<std::string>();
    ex.mask_offset = j.at("mask_offset").get<size_t>();
    ex.passage_start = j.value("passage_start", size_t{0});
    ex.passage_end = j.value("passage_end", size_t{0});
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("dataset record field: ") + e.what(), line_no);
  }
  return ex;
}

std::vector<MaskedExample> read_records(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::vector<MaskedExample> out;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (utf8::trim(line).empty()) continue;
    out.push_back(parse_record(line, line_no));
  }
  return out;
}

}  // namespace crem
