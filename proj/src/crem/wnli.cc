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


#include "crem/wnli.h"

#include <algorithm>

#include "crem/data.h"
#include "crem/error.h"
#include "crem/utf8.h"

namespace crem {

namespace {

struct Word {
  size_t start;
  size_t end;
  std::u32string lower;
};

std::vector<Word> words(std::u32string_view t) {
  std::vector<Word> out;
  size_t i = 0;
  while (i < t.size()) {
    if (!utf8::is_letter(t[i]) && !utf8::is_digit(t[i])) {
      ++i;
      continue;
    }
    const size_t start = i;
    while (i < t.size()) {
      if (utf8::is_letter(t[i]) || utf8::is_digit(t[i])) {
        ++i;
      } else if ((utf8::is_apostrophe(t[i]) || t[i] == U'-') && i + 1 < t.size() &&
                 utf8::is_letter(t[i + 1])) {
        i += 2;
      } else {
        break;
      }
    }
    out.push_back(Word{start, i, utf8::to_lower(t.substr(start, i - start))});
  }
  return out;
}

const std::set<std::u32string>& pronouns() {
  static const std::set<std::u32string> p = {
      U"he",  U"him",  U"his",    U"himself", U"she",   U"her",   U"hers",  U"herself",
      U"it",  U"its",  U"itself", U"they",    U"them",  U"their", U"theirs", U"themselves"};
  return p;
}

bool possessive_pronoun(const std::u32string& w) {
  return w == U"his" || w == U"her" || w == U"its" || w == U"their";
}

// Lowercased, with a leading article removed.
std::string phrase_key(std::string_view phrase) {
  std::string s = utf8::to_lower(utf8::collapse_whitespace(phrase));
  for (std::string_view article : {"the ", "a ", "an "}) {
    if (s.rfind(article, 0) == 0) return s.substr(article.size());
  }
  return s;
}

}  // namespace

HeuristicNounPhrases::HeuristicNounPhrases(std::set<std::u32string> nouns,
                                           std::set<std::u32string> function_words,
                                           std::set<std::u32string> determiners)
    : nouns_(std::move(nouns)), function_(std::move(function_words)), determiners_(std::move(determiners)) {}

HeuristicNounPhrases HeuristicNounPhrases::parse(std::string_view lexicon) {
  std::set<std::u32string> nouns;
  std::set<std::u32string> function;
  std::set<std::u32string> determiners;
  for (const auto& [section, entries] : data::parse_sections(lexicon)) {
    auto& target = section == "function" ? function : section == "determiner" ? determiners : nouns;
    for (const auto& e : entries) target.insert(utf8::to_lower(utf8::decode(e)));
  }
  return HeuristicNounPhrases(std::move(nouns), std::move(function), std::move(determiners));
}

std::shared_ptr<const HeuristicNounPhrases> HeuristicNounPhrases::default_instance() {
  static const auto instance =
      std::make_shared<const HeuristicNounPhrases>(parse(data::embedded("nouns.txt")));
  return instance;
}

std::vector<Span> HeuristicNounPhrases::find(std::u32string_view text) const {
  const std::vector<Word> ws = words(text);
  auto content = [&](const Word& w) { return !function_.count(w.lower) && !determiners_.count(w.lower); };
  auto in_lexicon = [&](std::u32string key) {
    if (key.size() > 2 && utf8::is_apostrophe(key[key.size() - 2]) && key.back() == U's') key.resize(key.size() - 2);
    if (nouns_.count(key)) return true;
    // Plurals: "permits", "churches".
    if (key.size() > 3 && key.back() == U's' && nouns_.count(key.substr(0, key.size() - 1))) return true;
    return key.size() > 4 && key.compare(key.size() - 2, 2, U"es") == 0 && nouns_.count(key.substr(0, key.size() - 2));
  };
  auto noun_like = [&](const Word& w) {
    return content(w) && (in_lexicon(w.lower) || utf8::is_upper(text[w.start]));
  };
  auto joined = [&](size_t a, size_t b) {
    for (size_t c = ws[a].end; c < ws[b].start; ++c) {
      if (text[c] != U' ') return false;
    }
    return true;
  };
  // Last index of the compound starting at `j`.
  auto compound_end = [&](size_t j) {
    while (j + 1 < ws.size() && noun_like(ws[j + 1]) && joined(j, j + 1)) ++j;
    return j;
  };

  std::vector<Span> out;
  size_t k = 0;
  while (k < ws.size()) {
    if (determiners_.count(ws[k].lower)) {
      // Up to three modifiers, then the head; an unknown word right after the
      // determiner is taken as the head.
      std::optional<size_t> head;
      for (size_t j = k + 1; j < ws.size() && j <= k + 4 && joined(j - 1, j) && content(ws[j]); ++j) {
        if (noun_like(ws[j])) {
          head = compound_end(j);
          break;
        }
      }
      if (!head && k + 1 < ws.size() && joined(k, k + 1) && content(ws[k + 1])) head = k + 1;
      if (!head) {
        ++k;
        continue;
      }
      out.emplace_back(ws[k].start, ws[*head].end);
      k = *head + 1;
    } else if (noun_like(ws[k])) {
      const size_t last = compound_end(k);
      out.emplace_back(ws[k].start, ws[last].end);
      k = last + 1;
    } else {
      ++k;
    }
  }
  return out;
}

ExternalNounPhrases::ExternalNounPhrases(std::shared_ptr<ExternalNameDetector> client)
    : client_(std::move(client)) {}

std::vector<Span> ExternalNounPhrases::find(std::u32string_view text) const {
  std::vector<Span> spans = client_->spans(utf8::encode(text), "noun");
  size_t prev = 0;
  for (const auto& [s, e] : spans) {
    if (s >= e || e > text.size() || s < prev) throw ProtocolError("invalid noun-phrase span", false);
    prev = e;
  }
  return spans;
}

std::optional<WnliAlignment> align_wnli(std::string_view premise, std::string_view hypothesis) {
  const std::u32string p32 = utf8::decode(premise);
  const std::u32string h32 = utf8::decode(hypothesis);
  const std::vector<Word> P = words(p32);
  const std::vector<Word> H = words(h32);
  const size_t nh = H.size();
  if (P.empty() || nh == 0) return std::nullopt;

  struct Best {
    size_t site, prefix, suffix;
  };
  std::optional<Best> best;
  for (size_t p = 0; p < P.size(); ++p) {
    if (!pronouns().count(P[p].lower)) continue;
    for (size_t i = 0; i <= std::min(p, nh - 1); ++i) {
      bool prefix_ok = true;
      for (size_t t = 0; t < i && prefix_ok; ++t) prefix_ok = H[t].lower == P[p - i + t].lower;
      if (!prefix_ok) continue;
      for (size_t s = 0; i + s < nh && p + 1 + s <= P.size(); ++s) {
        bool suffix_ok = true;
        for (size_t t = 0; t < s && suffix_ok; ++t) suffix_ok = H[nh - s + t].lower == P[p + 1 + t].lower;
        if (!suffix_ok) continue;
        if (i + s == 0) continue;
        if (!best || i + s > best->prefix + best->suffix) best = Best{p, i, s};
      }
    }
  }
  if (!best) return std::nullopt;

  WnliAlignment a;
  const Word& site = P[best->site];
  a.site_start = site.start;
  a.site_end = site.end;
  a.region_start = best->prefix ? P[best->site - best->prefix].start : site.start;
  a.region_end = best->suffix ? P[best->site + best->suffix].end : site.end;
  const size_t q_first = best->prefix;
  const size_t q_last = nh - best->suffix - 1;
  std::u32string queried = h32.substr(H[q_first].start, H[q_last].end - H[q_first].start);
  if (possessive_pronoun(site.lower) && queried.size() > 2 && utf8::is_apostrophe(queried[queried.size() - 2]) &&
      queried.back() == U's') {
    queried.resize(queried.size() - 2);
  }
  a.queried = utf8::encode(queried);
  return a;
}

EvalItem wnli_to_schema(std::string_view item_id, std::string_view premise,
                        std::string_view hypothesis, std::optional<bool> label,
                        const NounPhraseDetector& nouns) {
  EvalItem item;
  item.item_id = std::string(item_id);
  item.source_text = std::string(premise);
  GoldEntailment gold;
  gold.label = label;
  const auto alignment = align_wnli(premise, hypothesis);
  if (!alignment) {
    gold.conversion_failed = true;
    item.masked_text = std::string(premise);
    item.gold = gold;
    return item;
  }
  const std::u32string p32 = utf8::decode(premise);
  item.masked_text = utf8::encode(std::u32string_view(p32).substr(0, alignment->site_start)) + "[MASK]" +
                     utf8::encode(std::u32string_view(p32).substr(alignment->site_end));
  item.candidates.push_back(alignment->queried);
  std::set<std::string> keys = {phrase_key(alignment->queried)};
  for (const auto& [s, e] : nouns.find(p32)) {
    if (s < alignment->region_end && e > alignment->region_start) continue;
    std::string phrase = utf8::encode(std::u32string_view(p32).substr(s, e - s));
    if (!keys.insert(phrase_key(phrase)).second) continue;
    item.candidates.push_back(std::move(phrase));
  }
  gold.queried = 0;
  item.gold = gold;
  return item;
}

}  // namespace crem
