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


#include "crem/loaders.h"

#include <algorithm>
#include <cctype>

#include "crem/cremgen.h"
#include "crem/data.h"
#include "crem/error.h"
#include "crem/utf8.h"
#include "crem/wnli.h"
#include "crem/xml.h"

namespace crem {

namespace {

std::vector<std::string> split_lines(std::string_view text) {
  std::vector<std::string> out;
  size_t pos = 0;
  while (pos < text.size()) {
    size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string line(text.substr(pos, nl - pos));
    if (!line.empty() && line.back() == '\r') line.pop_back();
    out.push_back(std::move(line));
    pos = nl + 1;
  }
  return out;
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  size_t pos = 0;
  while (true) {
    const size_t tab = line.find('\t', pos);
    out.push_back(line.substr(pos, tab == std::string::npos ? std::string::npos : tab - pos));
    if (tab == std::string::npos) break;
    pos = tab + 1;
  }
  return out;
}

bool parse_bool(const std::string& s, long line) {
  const std::string v = utf8::to_lower(utf8::trim(s));
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw InputError("expected TRUE or FALSE, got '" + s + "'", line);
}

size_t parse_offset(const std::string& s, long line) {
  try {
    size_t used = 0;
    const long long v = std::stoll(s, &used);
    if (used != s.size() || v < 0) throw std::invalid_argument(s);
    return static_cast<size_t>(v);
  } catch (const std::exception&) {
    throw InputError("expected a nonnegative offset, got '" + s + "'", line);
  }
}

std::string base_name(std::string_view path) {
  const size_t slash = path.find_last_of('/');
  return std::string(slash == std::string_view::npos ? path : path.substr(slash + 1));
}

bool is_word_char(char32_t c) { return utf8::is_letter(c) || utf8::is_digit(c); }

// Case-insensitive whole-word occurrences of `word` in `text`.
std::vector<size_t> word_occurrences(std::u32string_view text, std::u32string_view word) {
  std::vector<size_t> out;
  const std::u32string lt = utf8::to_lower(text);
  const std::u32string lw = utf8::to_lower(word);
  if (lw.empty()) return out;
  size_t pos = 0;
  while ((pos = lt.find(lw, pos)) != std::u32string::npos) {
    const bool left = pos == 0 || !is_word_char(lt[pos - 1]);
    const size_t end = pos + lw.size();
    const bool right = end == lt.size() || !is_word_char(lt[end]);
    if (left && right) out.push_back(pos);
    pos += 1;
  }
  return out;
}

std::string mask_at(std::u32string_view text, size_t start, size_t length) {
  return utf8::encode(text.substr(0, start)) + "[MASK]" + utf8::encode(text.substr(start + length));
}

void tag(EvalItem& item, const std::string& key, const std::string& value) {
  if (!value.empty()) item.tags[key] = value;
}

std::string split_for(std::string_view name, const LoadOptions& options) {
  return options.split ? *options.split : split_from_name(name);
}

std::vector<EvalItem> load_wikicrem(std::string_view text, std::string_view name, const LoadOptions& options) {
  std::vector<EvalItem> out;
  long line_no = 0;
  for (const auto& line : split_lines(text)) {
    ++line_no;
    if (utf8::trim(line).empty()) continue;
    const MaskedExample ex = parse_record(line, line_no);
    EvalItem item;
    item.item_id = ex.example_id;
    item.masked_text = ex.masked_text;
    const size_t mask = ex.masked_text.find(kMaskToken);
    if (mask == std::string::npos) throw InputError("record has no mask token", line_no);
    item.source_text = ex.masked_text.substr(0, mask) + ex.correct + ex.masked_text.substr(mask + kMaskToken.size());
    item.candidates = {ex.correct, ex.incorrect};
    std::sort(item.candidates.begin(), item.candidates.end());
    item.gold = GoldChoice{item.candidates[0] == ex.correct ? size_t{0} : size_t{1}};
    tag(item, "split", split_for(name, options));
    out.push_back(std::move(item));
  }
  return out;
}

std::vector<EvalItem> load_gap(std::string_view text, std::string_view name, const LoadOptions& options) {
  const NameDetector& detector = options.detector ? *options.detector : *GazetteerDetector::default_instance();
  const std::vector<std::string> lines = split_lines(text);
  std::vector<EvalItem> out;
  const std::string split = split_for(name, options);
  for (size_t k = 0; k < lines.size(); ++k) {
    const long line_no = static_cast<long>(k + 1);
    if (utf8::trim(lines[k]).empty()) continue;
    const std::vector<std::string> f = split_tabs(lines[k]);
    if (k == 0) {
      if (f.size() < 2 || f[0] != "ID" || f[1] != "Text") throw InputError("GAP header expected", line_no);
      continue;
    }
    if (f.size() < 10) throw InputError("GAP row needs at least 10 columns", line_no);
    const std::u32string text32 = utf8::decode(f[1]);
    const std::u32string pronoun = utf8::decode(f[2]);
    const size_t offset = parse_offset(f[3], line_no);
    if (offset + pronoun.size() > text32.size() || text32.compare(offset, pronoun.size(), pronoun) != 0) {
      throw InputError("pronoun '" + f[2] + "' not found at offset " + f[3], line_no);
    }
    EvalItem item;
    item.item_id = f[0];
    item.source_text = f[1];
    item.masked_text = mask_at(text32, offset, pronoun.size());
    GoldGap gold;
    gold.a = utf8::trim(f[4]);
    gold.a_coref = parse_bool(f[6], line_no);
    gold.b = utf8::trim(f[7]);
    gold.b_coref = parse_bool(f[9], line_no);
    GapExtraction ex = extract_gap_candidates(f[1], gold.a, gold.b, detector);
    gold.a_failed = ex.a_failed;
    gold.b_failed = ex.b_failed;
    item.candidates = std::move(ex.candidates);
    item.gold = gold;
    tag(item, "split", split);
    tag(item, "gender", pronoun_gender(f[2]));
    out.push_back(std::move(item));
  }
  return out;
}

std::vector<EvalItem> load_dpr(std::string_view text, std::string_view name, const LoadOptions& options) {
  const std::vector<std::string> lines = split_lines(text);
  std::vector<EvalItem> out;
  const std::string split = split_for(name, options);
  size_t k = 0;
  size_t record = 0;
  while (k < lines.size()) {
    if (utf8::trim(lines[k]).empty()) {
      ++k;
      continue;
    }
    const long first_line = static_cast<long>(k + 1);
    std::vector<std::string> block;
    while (k < lines.size() && !utf8::trim(lines[k]).empty()) block.push_back(utf8::trim(lines[k++]));
    ++record;
    if (block.size() < 4) throw InputError("DPR record needs 4 lines", first_line);

    const std::u32string sentence = utf8::decode(block[0]);
    const std::string pronoun = block[1];
    std::vector<std::string> candidates;
    size_t comma = 0;
    size_t pos = 0;
    while ((comma = block[2].find(',', pos)) != std::string::npos) {
      candidates.push_back(utf8::trim(std::string_view(block[2]).substr(pos, comma - pos)));
      pos = comma + 1;
    }
    candidates.push_back(utf8::trim(std::string_view(block[2]).substr(pos)));
    if (candidates.size() < 2) throw InputError("DPR record needs two candidates", first_line + 2);

    const std::string& answer = block[3];
    auto gold = std::find(candidates.begin(), candidates.end(), answer);
    if (gold == candidates.end()) {
      gold = std::find_if(candidates.begin(), candidates.end(), [&](const std::string& c) {
        return utf8::to_lower(c) == utf8::to_lower(answer);
      });
    }
    if (gold == candidates.end()) throw InputError("DPR answer is not a candidate", first_line + 3);

    // The pronoun occurrence after the first candidate mention.
    const std::vector<size_t> hits = word_occurrences(sentence, utf8::decode(pronoun));
    if (hits.empty()) throw InputError("DPR pronoun '" + pronoun + "' not in sentence", first_line);
    size_t after = std::u32string::npos;
    for (const auto& c : candidates) {
      const auto occ = word_occurrences(sentence, utf8::decode(c));
      if (!occ.empty()) after = std::min(after, occ.front() + utf8::decode(c).size());
    }
    size_t site = hits.front();
    if (after != std::u32string::npos) {
      const auto it = std::find_if(hits.begin(), hits.end(), [after](size_t h) { return h >= after; });
      if (it != hits.end()) site = *it;
    }

    EvalItem item;
    item.item_id = base_name(name) + ":" + std::to_string(record);
    item.source_text = block[0];
    item.masked_text = mask_at(sentence, site, utf8::decode(pronoun).size());
    item.candidates = candidates;
    item.gold = GoldChoice{static_cast<size_t>(gold - candidates.begin())};
    tag(item, "split", split);
    tag(item, "gender", pronoun_gender(pronoun));
    out.push_back(std::move(item));
  }
  return out;
}

std::string xml_text(std::string_view raw) { return utf8::collapse_whitespace(xml::unescape(raw)); }

std::vector<EvalItem> load_schemas(DatasetKind kind, std::string_view text, std::string_view name,
                                   const LoadOptions& options) {
  std::vector<EvalItem> out;
  const std::string split = split_for(name, options);
  size_t record = 0;
  for (const auto& schema : xml::find_all(text, "schema")) {
    ++record;
    const auto fail = [&](const std::string& what) {
      return InputError("schema " + std::to_string(record) + ": " + what);
    };
    const auto body = xml::find(schema.content, "text");
    if (!body) throw fail("missing <text>");
    const auto t1 = xml::find(body->content, "txt1");
    const auto pron = xml::find(body->content, "pron");
    const auto t2 = xml::find(body->content, "txt2");
    if (!t1 || !pron || !t2) throw fail("missing txt1, pron or txt2");
    const std::string txt1 = xml_text(t1->content);
    const std::string pronoun = xml_text(pron->content);
    const std::string txt2 = xml_text(t2->content);

    const auto answers = xml::find(schema.content, "answers");
    if (!answers) throw fail("missing <answers>");
    std::vector<std::string> candidates;
    for (const auto& a : xml::find_all(answers->content, "answer")) candidates.push_back(xml_text(a.content));
    if (candidates.size() < 2) throw fail("needs at least two answers");

    const auto correct = xml::find(schema.content, "correctAnswer");
    if (!correct) throw fail("missing <correctAnswer>");
    const std::string letter = xml_text(correct->content);
    if (letter.empty() || letter[0] < 'A' || static_cast<size_t>(letter[0] - 'A') >= candidates.size()) {
      throw fail("bad correctAnswer '" + letter + "'");
    }

    const bool glue = !txt2.empty() && !is_word_char(utf8::decode(txt2).front());
    auto join = [&](const std::string& middle) {
      std::string s = txt1;
      if (!s.empty()) s += ' ';
      s += middle;
      if (!txt2.empty()) s += (glue ? "" : " ") + txt2;
      return s;
    };
    EvalItem item;
    item.item_id = std::string(to_string(kind)) + ":" + std::to_string(record);
    item.masked_text = join("[MASK]");
    item.source_text = join(pronoun);
    item.candidates = std::move(candidates);
    item.gold = GoldChoice{static_cast<size_t>(letter[0] - 'A')};
    tag(item, "split", split.empty() ? "test" : split);
    tag(item, "gender", pronoun_gender(pronoun));
    out.push_back(std::move(item));
  }
  // The 273-problem set is the first 273 schemas of the collection.
  if (kind == DatasetKind::kWsc273 && out.size() > 273) out.resize(273);
  return out;
}

std::vector<EvalItem> load_wnli(std::string_view text, std::string_view name, const LoadOptions& options) {
  const NounPhraseDetector& nouns = options.nouns ? *options.nouns : *HeuristicNounPhrases::default_instance();
  const std::vector<std::string> lines = split_lines(text);
  std::vector<EvalItem> out;
  const std::string split = split_for(name, options);
  bool has_label = false;
  for (size_t k = 0; k < lines.size(); ++k) {
    const long line_no = static_cast<long>(k + 1);
    if (utf8::trim(lines[k]).empty()) continue;
    const std::vector<std::string> f = split_tabs(lines[k]);
    if (k == 0) {
      if (f.size() < 3 || f[0] != "index" || f[1] != "sentence1" || f[2] != "sentence2") {
        throw InputError("WNLI header expected", line_no);
      }
      has_label = f.size() >= 4 && f[3] == "label";
      continue;
    }
    if (f.size() < (has_label ? 4u : 3u)) throw InputError("WNLI row has too few columns", line_no);
    std::optional<bool> label;
    if (has_label) label = parse_bool(f[3], line_no);
    EvalItem item = wnli_to_schema("wnli:" + f[0], f[1], f[2], label, nouns);
    tag(item, "split", split);
    out.push_back(std::move(item));
  }
  return out;
}

const std::vector<std::u32string>& gender_pronouns(const std::string& gender) {
  static const std::vector<std::u32string> male = {U"he", U"him", U"his"};
  static const std::vector<std::u32string> female = {U"she", U"her"};
  static const std::vector<std::u32string> neutral = {U"they", U"them", U"their"};
  if (gender == "male") return male;
  if (gender == "female") return female;
  return neutral;
}

std::vector<EvalItem> load_winogender(std::string_view text, std::string_view name, const LoadOptions& options) {
  const std::vector<std::string> lines = split_lines(text);
  std::vector<EvalItem> out;
  const std::string split = split_for(name, options);
  for (size_t k = 0; k < lines.size(); ++k) {
    const long line_no = static_cast<long>(k + 1);
    if (utf8::trim(lines[k]).empty()) continue;
    const std::vector<std::string> f = split_tabs(lines[k]);
    if (k == 0 && f[0] == "sentid") continue;
    if (f.size() < 2) throw InputError("WinoGender row needs sentid and sentence", line_no);

    std::vector<std::string> parts;
    size_t pos = 0;
    size_t dot = 0;
    while ((dot = f[0].find('.', pos)) != std::string::npos) {
      parts.push_back(f[0].substr(pos, dot - pos));
      pos = dot + 1;
    }
    parts.push_back(f[0].substr(pos));
    if (parts.size() < 4 || (parts[2] != "0" && parts[2] != "1")) {
      throw InputError("bad WinoGender sentid '" + f[0] + "'", line_no);
    }
    auto spaced = [](std::string s) {
      std::replace(s.begin(), s.end(), '_', ' ');
      return s;
    };
    const std::string occupation = spaced(parts[0]);
    const std::string participant = spaced(parts[1]);
    const std::string gender = parts[3];

    const std::u32string sentence = utf8::decode(f[1]);
    const auto occ = word_occurrences(sentence, utf8::decode(occupation));
    const size_t after = occ.empty() ? 0 : occ.front() + utf8::decode(occupation).size();
    std::optional<std::pair<size_t, size_t>> site;
    for (const auto& p : gender_pronouns(gender)) {
      for (size_t h : word_occurrences(sentence, p)) {
        if (h >= after && (!site || h < site->first)) site = {{h, p.size()}};
      }
    }
    if (!site) throw InputError("no " + gender + " pronoun after the occupation", line_no);

    EvalItem item;
    item.item_id = f[0];
    item.source_text = f[1];
    item.masked_text = mask_at(sentence, site->first, site->second);
    item.candidates = {"the " + occupation, participant == "someone" ? participant : "the " + participant};
    item.gold = GoldChoice{parts[2] == "0" ? size_t{0} : size_t{1}};
    tag(item, "split", split.empty() ? "test" : split);
    tag(item, "gender", gender == "male" ? "masc" : gender == "female" ? "fem" : "neutral");
    out.push_back(std::move(item));
  }
  return out;
}

std::vector<EvalItem> load_winobias(std::string_view text, std::string_view name, const LoadOptions& options) {
  std::vector<std::u32string> occupations;
  for (const auto& [section, entries] : data::parse_sections(data::embedded("occupations.txt"))) {
    for (const auto& e : entries) occupations.push_back(utf8::decode(e));
  }
  std::stable_sort(occupations.begin(), occupations.end(),
                   [](const auto& a, const auto& b) { return a.size() > b.size(); });

  const std::string lower_name = utf8::to_lower(base_name(name));
  const std::string type = lower_name.find("type1") != std::string::npos   ? "type1"
                           : lower_name.find("type2") != std::string::npos ? "type2"
                                                                           : "";
  const std::string stereotype = lower_name.find("anti") != std::string::npos  ? "anti"
                                 : lower_name.find("pro") != std::string::npos ? "pro"
                                                                               : "";
  const std::string split = split_for(name, options);
  std::vector<EvalItem> out;
  const std::vector<std::string> lines = split_lines(text);
  for (size_t k = 0; k < lines.size(); ++k) {
    const long line_no = static_cast<long>(k + 1);
    std::string line = utf8::trim(lines[k]);
    if (line.empty()) continue;
    size_t lead = 0;
    while (lead < line.size() && std::isdigit(static_cast<unsigned char>(line[lead]))) ++lead;
    const std::u32string raw = utf8::decode(utf8::trim(std::string_view(line).substr(lead)));

    // Strip brackets, remembering the bracketed spans in the clean text.
    std::u32string clean;
    std::vector<std::pair<size_t, size_t>> spans;
    size_t open = std::u32string::npos;
    for (char32_t c : raw) {
      if (c == U'[') {
        open = clean.size();
      } else if (c == U']' && open != std::u32string::npos) {
        spans.emplace_back(open, clean.size());
        open = std::u32string::npos;
      } else {
        clean += c;
      }
    }
    if (spans.size() != 2) throw InputError("WinoBias line needs two bracketed spans", line_no);
    auto text_of = [&clean](std::pair<size_t, size_t> s) {
      return utf8::encode(std::u32string_view(clean).substr(s.first, s.second - s.first));
    };
    const bool first_is_pronoun = !pronoun_gender(text_of(spans[0])).empty();
    const auto pron = first_is_pronoun ? spans[0] : spans[1];
    const auto gold = first_is_pronoun ? spans[1] : spans[0];
    if (pronoun_gender(text_of(pron)).empty()) throw InputError("no bracketed pronoun", line_no);

    std::optional<std::pair<size_t, size_t>> other;
    for (const auto& occ : occupations) {
      for (size_t h : word_occurrences(clean, occ)) {
        const size_t end = h + occ.size();
        if (h < gold.second && end > gold.first) continue;
        if (!other || h < other->first) other = {{h, end}};
      }
      if (other) break;
    }
    if (!other) throw InputError("cannot find the second occupation", line_no);
    // Include a preceding article.
    for (std::u32string_view article : {U"the ", U"a ", U"an "}) {
      if (other->first >= article.size() &&
          utf8::to_lower(clean.substr(other->first - article.size(), article.size())) == article) {
        other->first -= article.size();
        break;
      }
    }

    EvalItem item;
    item.item_id = base_name(name) + ":" + std::to_string(line_no);
    item.source_text = utf8::encode(clean);
    item.masked_text = mask_at(clean, pron.first, pron.second - pron.first);
    const bool gold_first = gold.first < other->first;
    item.candidates = gold_first ? std::vector<std::string>{text_of(gold), text_of(*other)}
                                 : std::vector<std::string>{text_of(*other), text_of(gold)};
    item.gold = GoldChoice{gold_first ? size_t{0} : size_t{1}};
    tag(item, "split", split);
    tag(item, "type", type);
    tag(item, "stereotype", stereotype);
    tag(item, "gender", pronoun_gender(text_of(pron)));
    out.push_back(std::move(item));
  }
  return out;
}

}  // namespace

std::string split_from_name(std::string_view name) {
  const std::string n = utf8::to_lower(base_name(name));
  if (n.find("development") != std::string::npos) return "train";
  if (n.find("train") != std::string::npos) return "train";
  if (n.find("validation") != std::string::npos || n.find("dev") != std::string::npos) return "validation";
  if (n.find("test") != std::string::npos) return "test";
  return "";
}

std::string pronoun_gender(std::string_view pronoun) {
  const std::string p = utf8::to_lower(utf8::trim(pronoun));
  if (p == "she" || p == "her" || p == "hers" || p == "herself") return "fem";
  if (p == "he" || p == "him" || p == "his" || p == "himself") return "masc";
  if (p == "they" || p == "them" || p == "their" || p == "theirs" || p == "themselves" || p == "it" ||
      p == "its" || p == "itself") {
    return "neutral";
  }
  return "";
}

std::vector<EvalItem> load_dataset_text(DatasetKind kind, std::string_view text, std::string_view name,
                                        const LoadOptions& options) {
  switch (kind) {
    case DatasetKind::kWikiCrem: return load_wikicrem(text, name, options);
    case DatasetKind::kGap: return load_gap(text, name, options);
    case DatasetKind::kDpr: return load_dpr(text, name, options);
    case DatasetKind::kWsc273:
    case DatasetKind::kPdp: return load_schemas(kind, text, name, options);
    case DatasetKind::kWnli: return load_wnli(text, name, options);
    case DatasetKind::kWinoGender: return load_winogender(text, name, options);
    case DatasetKind::kWinoBias: return load_winobias(text, name, options);
  }
  throw UsageError("unsupported dataset kind");
}

std::vector<EvalItem> load_dataset(DatasetKind kind, const std::string& path, const LoadOptions& options) {
  const std::string text = data::read_file(path);
  try {
    return load_dataset_text(kind, text, path, options);
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

}  // namespace crem
