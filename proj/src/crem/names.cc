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

#include "crem/names.h"

#include "crem/data.h"
#include "crem/error.h"
#include "crem/utf8.h"

namespace crem {

namespace {

// Length of `s` without trailing possessive clitics.
size_t key_length(std::u32string_view s) {
  size_t n = s.size();
  while (n > 0) {
    if (n >= 2 && (s[n - 1] == U's' || s[n - 1] == U'S') && utf8::is_apostrophe(s[n - 2])) {
      n -= 2;
    } else if (utf8::is_apostrophe(s[n - 1])) {
      n -= 1;
    } else {
      break;
    }
  }
  return n;
}

struct Token {
  size_t start;
  size_t end;        // includes a possessive clitic if present
  size_t key_end;    // end without the clitic
  bool possessive;
  bool sentence_initial;
};

std::vector<Token> word_tokens(const Passage& passage) {
  const std::u32string& t = passage.text;
  const size_t n = t.size();
  std::vector<Token> out;
  int last_sentence = -1;
  size_t i = 0;
  while (i < n) {
    if (!utf8::is_letter(t[i])) {
      ++i;
      continue;
    }
    const size_t start = i;
    while (i < n) {
      if (utf8::is_letter(t[i]) || utf8::is_digit(t[i])) {
        ++i;
      } else if ((utf8::is_apostrophe(t[i]) || t[i] == U'-') && i + 1 < n &&
                 utf8::is_letter(t[i + 1])) {
        i += 2;
      } else {
        break;
      }
    }
    // Bare possessive after a final s: "Adams' report".
    if (i < n && utf8::is_apostrophe(t[i]) && (t[i - 1] == U's' || t[i - 1] == U'S') &&
        (i + 1 >= n || !utf8::is_letter(t[i + 1]))) {
      ++i;
    }
    const std::u32string_view word(t.data() + start, i - start);
    const size_t key_end = start + key_length(word);
    const int sentence = passage.sentence_of(start);
    out.push_back(Token{start, i, key_end, key_end != i, sentence != last_sentence});
    last_sentence = sentence;
  }
  return out;
}

}  // namespace

std::string name_key(std::string_view surface) {
  const std::u32string s = utf8::decode(surface);
  return utf8::encode(std::u32string_view(s).substr(0, key_length(s)));
}

void validate_mentions(const Passage& passage, const std::vector<NameMention>& mentions) {
  size_t prev_end = 0;
  for (size_t k = 0; k < mentions.size(); ++k) {
    const NameMention& m = mentions[k];
    const std::string where = "mention " + std::to_string(k);
    if (m.start >= m.end || m.end > passage.text.size()) {
      throw ProtocolError(where + " has invalid offsets", false);
    }
    if (k > 0 && m.start < prev_end) {
      throw ProtocolError(where + " overlaps or precedes the previous mention", false);
    }
    const std::string slice =
        utf8::encode(std::u32string_view(passage.text).substr(m.start, m.end - m.start));
    if (slice != m.surface) throw ProtocolError(where + " surface does not match its span", false);
    if (m.sentence_index != passage.sentence_of(m.start)) {
      throw ProtocolError(where + " has the wrong sentence index", false);
    }
    prev_end = m.end;
  }
}

Gazetteer Gazetteer::parse(std::string_view text) {
  Gazetteer g;
  for (const auto& [section, entries] : data::parse_sections(text)) {
    auto& target = section == "family" ? g.family : g.given;
    for (const auto& e : entries) target.insert(utf8::decode(e));
  }
  return g;
}

Gazetteer Gazetteer::from_names(const std::vector<std::string>& given_names) {
  Gazetteer g;
  for (const auto& n : given_names) g.given.insert(utf8::decode(n));
  return g;
}

GazetteerDetector::GazetteerDetector(Gazetteer gazetteer, std::set<std::u32string> stopwords)
    : gazetteer_(std::move(gazetteer)), stopwords_(std::move(stopwords)) {}

std::set<std::u32string> GazetteerDetector::parse_stopwords(std::string_view text) {
  std::set<std::u32string> out;
  for (const auto& [section, entries] : data::parse_sections(text)) {
    for (const auto& e : entries) out.insert(utf8::decode(e));
  }
  return out;
}

std::shared_ptr<const GazetteerDetector> GazetteerDetector::default_instance() {
  static const auto instance = std::make_shared<const GazetteerDetector>(
      Gazetteer::parse(data::embedded("gazetteer.txt")),
      parse_stopwords(data::embedded("stopwords.txt")));
  return instance;
}

std::vector<NameMention> GazetteerDetector::detect(const Passage& passage) const {
  const std::u32string& t = passage.text;
  const std::vector<Token> tokens = word_tokens(passage);
  std::vector<NameMention> out;

  auto usable = [&](const Token& tok) {
    if (!utf8::is_upper(t[tok.start])) return false;
    return stopwords_.count(t.substr(tok.start, tok.key_end - tok.start)) == 0;
  };
  auto emit = [&](size_t first, size_t last) {
    bool known = false;
    for (size_t k = first; k <= last; ++k) {
      const Token& tok = tokens[k];
      if (gazetteer_.contains(std::u32string_view(t).substr(tok.start, tok.key_end - tok.start))) {
        known = true;
        break;
      }
    }
    if (!known && tokens[first].sentence_initial) return;
    NameMention m;
    m.start = tokens[first].start;
    m.end = tokens[last].end;
    m.surface = utf8::encode(std::u32string_view(t).substr(m.start, m.end - m.start));
    m.sentence_index = passage.sentence_of(m.start);
    out.push_back(std::move(m));
  };

  size_t k = 0;
  while (k < tokens.size()) {
    if (!usable(tokens[k])) {
      ++k;
      continue;
    }
    size_t last = k;
    while (!tokens[last].possessive && last + 1 < tokens.size()) {
      const Token& next = tokens[last + 1];
      const bool adjacent = next.start == tokens[last].end + 1 && t[tokens[last].end] == U' ';
      if (!adjacent || next.sentence_initial || !usable(next)) break;
      ++last;
    }
    emit(k, last);
    k = last + 1;
  }
  return out;
}

}  // namespace crem
