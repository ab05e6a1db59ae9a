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

#include "crem/textio.h"

#include <algorithm>
#include <array>
#include <filesystem>
#include <fstream>
#include <istream>

#include <boost/iostreams/filter/bzip2.hpp>
#include <boost/iostreams/filter/gzip.hpp>
#include <boost/iostreams/filtering_stream.hpp>

#include "crem/data.h"
#include "crem/error.h"
#include "crem/utf8.h"
#include "crem/xml.h"

namespace crem {

namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// Sentence segmentation

SentenceSegmenter::SentenceSegmenter(std::set<std::u32string> abbreviations)
    : abbreviations_(std::move(abbreviations)) {}

SentenceSegmenter SentenceSegmenter::from_list(std::string_view list_text) {
  std::set<std::u32string> abbrevs;
  for (const auto& [section, entries] : data::parse_sections(list_text)) {
    for (const auto& e : entries) {
      std::u32string token = utf8::decode(e);
      if (!token.empty() && token.back() == U'.') token.pop_back();
      if (!token.empty()) abbrevs.insert(std::move(token));
    }
  }
  return SentenceSegmenter(std::move(abbrevs));
}

const SentenceSegmenter& SentenceSegmenter::default_instance() {
  static const SentenceSegmenter instance = from_list(data::embedded("abbreviations.txt"));
  return instance;
}

bool SentenceSegmenter::is_abbreviation(std::u32string_view text, size_t period) const {
  size_t begin = period;
  while (begin > 0 && !utf8::is_space(text[begin - 1])) --begin;
  while (begin < period && utf8::is_opening_quote(text[begin])) ++begin;
  if (begin == period) return false;
  return abbreviations_.count(std::u32string(text.substr(begin, period - begin))) > 0;
}

std::vector<Sentence> SentenceSegmenter::segment(std::u32string_view text) const {
  std::vector<Sentence> out;
  const size_t n = text.size();
  size_t start = 0;
  auto skip_space = [&](size_t i) {
    while (i < n && utf8::is_space(text[i])) ++i;
    return i;
  };
  auto emit = [&](size_t end) {
    // Trim trailing whitespace; callers pass ends that may include it.
    while (end > start && utf8::is_space(text[end - 1])) --end;
    if (end > start) out.push_back(Sentence{start, end, out.size()});
  };

  start = skip_space(0);
  size_t i = start;
  while (i < n) {
    const char32_t c = text[i];
    if (c == U'\n') {
      size_t j = i + 1;
      while (j < n && text[j] != U'\n' && utf8::is_space(text[j])) ++j;
      if (j < n && text[j] == U'\n') {
        emit(i);
        start = skip_space(j);
        i = start;
        continue;
      }
      ++i;
      continue;
    }
    if (c != U'.' && c != U'!' && c != U'?') {
      ++i;
      continue;
    }
    size_t j = i + 1;
    while (j < n && (text[j] == U'.' || text[j] == U'!' || text[j] == U'?')) ++j;
    const size_t last_terminal = j - 1;
    while (j < n && utf8::is_closing_punct(text[j])) ++j;
    if (j >= n || !utf8::is_space(text[j])) {
      i = j;
      continue;
    }
    const size_t next = skip_space(j);
    if (next >= n || !(utf8::is_upper(text[next]) || utf8::is_opening_quote(text[next]))) {
      i = j;
      continue;
    }
    if (last_terminal == i && c == U'.' && is_abbreviation(text, i)) {
      i = j;
      continue;
    }
    emit(j);
    start = next;
    i = next;
  }
  if (start < n) emit(n);
  return out;
}

std::vector<Sentence> segment_sentences(std::string_view text) {
  return SentenceSegmenter::default_instance().segment(utf8::decode(text));
}

// ---------------------------------------------------------------------------
// Windows

std::vector<Passage> windows(const std::string& doc_id, std::u32string_view text,
                             const std::vector<Sentence>& sentences) {
  std::vector<Passage> out;
  const size_t n = sentences.size();
  out.reserve(n + (n > 0 ? n - 1 : 0));
  for (const Sentence& s : sentences) {
    Passage p;
    p.doc_id = doc_id;
    p.sentences = {s};
    p.text = std::u32string(text.substr(s.start, s.end - s.start));
    out.push_back(std::move(p));
  }
  for (size_t k = 0; k + 1 < n; ++k) {
    const Sentence& a = sentences[k];
    const Sentence& b = sentences[k + 1];
    Passage p;
    p.doc_id = doc_id;
    p.sentences = {a, b};
    p.text = std::u32string(text.substr(a.start, b.end - a.start));
    p.boundary = b.start - a.start;
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<Passage> windows(const Document& doc, const SentenceSegmenter& segmenter) {
  const std::u32string text = utf8::decode(doc.text);
  return windows(doc.doc_id, text, segmenter.segment(text));
}

// ---------------------------------------------------------------------------
// Wikitext

namespace {

bool starts_with_at(std::string_view s, size_t i, std::string_view prefix) {
  return s.size() >= i + prefix.size() && s.compare(i, prefix.size(), prefix) == 0;
}

std::string remove_between(std::string_view s, std::string_view open, std::string_view close) {
  std::string out;
  size_t pos = 0;
  while (true) {
    const size_t b = s.find(open, pos);
    if (b == std::string_view::npos) break;
    out.append(s.substr(pos, b - pos));
    const size_t e = s.find(close, b + open.size());
    if (e == std::string_view::npos) {
      pos = s.size();
      break;
    }
    pos = e + close.size();
  }
  out.append(s.substr(std::min(pos, s.size())));
  return out;
}

// Drops <tag ...>...</tag> and <tag .../> blocks, contents included.
std::string remove_tag_blocks(std::string_view s, std::string_view tag) {
  std::string out;
  const std::string open = "<" + std::string(tag);
  const std::string close = "</" + std::string(tag) + ">";
  size_t pos = 0;
  while (true) {
    size_t b = s.find(open, pos);
    while (b != std::string_view::npos && b + open.size() < s.size()) {
      const char c = s[b + open.size()];
      if (c == '>' || c == ' ' || c == '/' || c == '\n') break;
      b = s.find(open, b + 1);
    }
    if (b == std::string_view::npos || b + open.size() >= s.size()) break;
    out.append(s.substr(pos, b - pos));
    const size_t gt = s.find('>', b);
    if (gt == std::string_view::npos) {
      pos = s.size();
      break;
    }
    if (s[gt - 1] == '/') {
      pos = gt + 1;
      continue;
    }
    const size_t e = s.find(close, gt);
    pos = e == std::string_view::npos ? s.size() : e + close.size();
  }
  out.append(s.substr(std::min(pos, s.size())));
  return out;
}

std::string remove_templates_and_tables(std::string_view s) {
  std::string out;
  int templates = 0;
  int tables = 0;
  size_t i = 0;
  while (i < s.size()) {
    if (starts_with_at(s, i, "{{")) {
      ++templates;
      i += 2;
    } else if (templates > 0 && starts_with_at(s, i, "}}")) {
      --templates;
      i += 2;
    } else if (starts_with_at(s, i, "{|") && (i == 0 || s[i - 1] == '\n')) {
      ++tables;
      i += 2;
    } else if (tables > 0 && starts_with_at(s, i, "|}")) {
      --tables;
      i += 2;
    } else {
      if (templates == 0 && tables == 0) out.push_back(s[i]);
      ++i;
    }
  }
  return out;
}

bool is_dropped_link(std::string_view target) {
  const size_t colon = target.find(':');
  if (colon == std::string_view::npos || colon == 0) return false;
  std::string ns = utf8::to_lower(target.substr(0, colon));
  if (ns == "file" || ns == "image" || ns == "category" || ns == "media") return true;
  // Interlanguage links: [[de:Foo]], [[zh-yue:Foo]].
  if (ns.size() <= 7 && std::all_of(ns.begin(), ns.end(),
                                    [](char c) { return (c >= 'a' && c <= 'z') || c == '-'; })) {
    return ns.size() >= 2 && target[0] >= 'a' && target[0] <= 'z';
  }
  return false;
}

std::string rewrite_links(std::string_view s) {
  std::string out;
  size_t i = 0;
  while (i < s.size()) {
    if (starts_with_at(s, i, "[[")) {
      int depth = 1;
      size_t j = i + 2;
      while (j < s.size() && depth > 0) {
        if (starts_with_at(s, j, "[[")) {
          ++depth;
          j += 2;
        } else if (starts_with_at(s, j, "]]")) {
          --depth;
          j += 2;
        } else {
          ++j;
        }
      }
      const size_t inner_end = depth == 0 ? j - 2 : s.size();
      std::string_view inner = s.substr(i + 2, inner_end - i - 2);
      i = j;
      if (is_dropped_link(inner)) continue;
      const size_t bar = inner.rfind('|');
      std::string_view anchor = bar == std::string_view::npos ? inner : inner.substr(bar + 1);
      if (!anchor.empty() && anchor[0] == ':') anchor.remove_prefix(1);
      out += rewrite_links(anchor);
      continue;
    }
    if (s[i] == '[' && (starts_with_at(s, i + 1, "http") || starts_with_at(s, i + 1, "//") ||
                        starts_with_at(s, i + 1, "ftp"))) {
      const size_t close = s.find(']', i);
      if (close != std::string_view::npos) {
        std::string_view inner = s.substr(i + 1, close - i - 1);
        const size_t space = inner.find(' ');
        if (space != std::string_view::npos) out.append(inner.substr(space + 1));
        i = close + 1;
        continue;
      }
    }
    out.push_back(s[i++]);
  }
  return out;
}

std::string strip_tags(std::string_view s) {
  std::string out;
  size_t i = 0;
  while (i < s.size()) {
    if (s[i] == '<' && i + 1 < s.size() &&
        (s[i + 1] == '/' || (s[i + 1] >= 'a' && s[i + 1] <= 'z') ||
         (s[i + 1] >= 'A' && s[i + 1] <= 'Z'))) {
      const size_t gt = s.find('>', i);
      if (gt != std::string_view::npos) {
        i = gt + 1;
        continue;
      }
    }
    out.push_back(s[i++]);
  }
  return out;
}

bool is_prose_line(std::string_view line) {
  if (line.empty()) return false;
  switch (line[0]) {
    case '=': case '*': case '#': case ':': case ';': case '|': case '!': case '{': case '}':
      return false;
    default:
      break;
  }
  return !starts_with_at(line, 0, "__");
}

}  // namespace

std::string strip_wikitext(std::string_view wikitext) {
  std::string s = remove_between(wikitext, "<!--", "-->");
  for (std::string_view tag : {"ref", "math", "gallery", "timeline", "score", "syntaxhighlight",
                               "source", "pre", "imagemap", "chem", "references"}) {
    s = remove_tag_blocks(s, tag);
  }
  s = remove_templates_and_tables(s);
  s = rewrite_links(s);
  // Bold and italic markers: any run of two or more apostrophes.
  std::string no_quotes;
  {
    size_t i = 0;
    while (i < s.size()) {
      if (starts_with_at(s, i, "''")) {
        while (i < s.size() && s[i] == '\'') ++i;
        continue;
      }
      no_quotes.push_back(s[i++]);
    }
  }
  s = xml::unescape(strip_tags(no_quotes));

  std::string out;
  size_t pos = 0;
  while (pos <= s.size()) {
    size_t nl = s.find('\n', pos);
    if (nl == std::string::npos) nl = s.size();
    std::string line = utf8::collapse_whitespace(std::string_view(s).substr(pos, nl - pos));
    if (is_prose_line(line)) {
      if (!out.empty()) out += "\n\n";
      out += line;
    }
    pos = nl + 1;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Corpus sources

namespace {

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

bool is_blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r';
  });
}

}  // namespace

CorpusSource CorpusSource::detect(const std::string& path) {
  CorpusSource src;
  src.path = path;
  if (!fs::is_directory(path) &&
      (ends_with(path, ".xml") || ends_with(path, ".xml.gz") || ends_with(path, ".xml.bz2"))) {
    src.kind = SourceKind::kWikiDump;
  }
  return src;
}

class DocumentStream::Impl {
 public:
  virtual ~Impl() = default;
  virtual std::optional<Document> next() = 0;
  virtual size_t malformed() const { return 0; }
};

namespace {

class PlainDirectoryStream : public DocumentStream::Impl {
 public:
  explicit PlainDirectoryStream(const fs::path& root) {
    std::error_code ec;
    for (fs::recursive_directory_iterator it(root, ec), end; !ec && it != end; it.increment(ec)) {
      if (it->is_regular_file()) files_.push_back(fs::relative(it->path(), root).generic_string());
    }
    if (ec) throw InputError("cannot read directory " + root.string() + ": " + ec.message());
    std::sort(files_.begin(), files_.end());
    root_ = root;
  }

  std::optional<Document> next() override {
    while (index_ < files_.size()) {
      const std::string& rel = files_[index_++];
      std::string text = data::read_file((root_ / rel).string());
      if (is_blank(text)) continue;
      return Document{rel, std::move(text), SourceKind::kPlainText};
    }
    return std::nullopt;
  }

 private:
  fs::path root_;
  std::vector<std::string> files_;
  size_t index_ = 0;
};

// One document per blank-line-separated block.
class PlainFileStream : public DocumentStream::Impl {
 public:
  explicit PlainFileStream(const std::string& path)
      : in_(path, std::ios::binary), name_(fs::path(path).filename().string()) {
    if (!in_) throw InputError("cannot open " + path);
  }

  std::optional<Document> next() override {
    std::string block;
    std::string line;
    while (std::getline(in_, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (is_blank(line)) {
        if (!block.empty()) break;
        continue;
      }
      if (!block.empty()) block.push_back('\n');
      block += line;
    }
    if (block.empty()) return std::nullopt;
    ++count_;
    return Document{name_ + ":" + std::to_string(count_), std::move(block),
                    SourceKind::kPlainText};
  }

 private:
  std::ifstream in_;
  std::string name_;
  size_t count_ = 0;
};

class WikiDumpStream : public DocumentStream::Impl {
 public:
  explicit WikiDumpStream(const std::string& path) : path_(path), file_(path, std::ios::binary) {
    if (!file_) throw InputError("cannot open " + path);
    if (ends_with(path, ".gz")) {
      in_.push(boost::iostreams::gzip_decompressor());
    } else if (ends_with(path, ".bz2")) {
      in_.push(boost::iostreams::bzip2_decompressor());
    }
    in_.push(file_);
  }

  std::optional<Document> next() override {
    while (auto page = next_page()) {
      if (auto doc = parse_page(*page)) return doc;
    }
    return std::nullopt;
  }

  size_t malformed() const override { return malformed_; }

 private:
  static constexpr std::string_view kOpen = "<page>";
  static constexpr std::string_view kClose = "</page>";

  // Raw text of the next <page> element; nullopt at end of input.
  std::optional<std::string> next_page() {
    while (true) {
      const size_t open = buffer_.find(kOpen);
      if (open != std::string::npos) {
        const size_t close = buffer_.find(kClose, open + kOpen.size());
        const size_t next_open = buffer_.find(kOpen, open + kOpen.size());
        if (next_open != std::string::npos && (close == std::string::npos || next_open < close)) {
          // A page that never closed before the next one started.
          ++malformed_;
          buffer_.erase(0, next_open);
          continue;
        }
        if (close != std::string::npos) {
          std::string page = buffer_.substr(open + kOpen.size(), close - open - kOpen.size());
          buffer_.erase(0, close + kClose.size());
          return page;
        }
      } else if (buffer_.size() > kOpen.size()) {
        buffer_.erase(0, buffer_.size() - kOpen.size());
      }
      if (eof_) {
        if (buffer_.find(kOpen) != std::string::npos) ++malformed_;
        buffer_.clear();
        return std::nullopt;
      }
      fill();
    }
  }

  void fill() {
    std::array<char, 1 << 16> chunk;
    in_.read(chunk.data(), chunk.size());
    const std::streamsize got = in_.gcount();
    if (got > 0) buffer_.append(chunk.data(), static_cast<size_t>(got));
    // The filter chain reports decompression errors through badbit only.
    if (in_.bad()) throw InputError("corrupt or unreadable compressed stream: " + path_);
    if (!in_) eof_ = true;
  }

  std::optional<Document> parse_page(std::string_view page) {
    auto title = xml::find(page, "title");
    auto text = xml::find(page, "text");
    if (!title || !text) {
      ++malformed_;
      return std::nullopt;
    }
    if (auto ns = xml::find(page, "ns"); ns && utf8::trim(ns->content) != "0") return std::nullopt;
    if (xml::find(page, "redirect")) return std::nullopt;
    std::string doc_id;
    if (auto id = xml::find(page, "id")) doc_id = utf8::trim(id->content);
    if (doc_id.empty()) doc_id = xml::unescape(title->content);
    std::string prose = strip_wikitext(xml::unescape(text->content));
    if (is_blank(prose)) return std::nullopt;
    return Document{std::move(doc_id), std::move(prose), SourceKind::kWikiDump};
  }

  std::string path_;
  std::ifstream file_;
  boost::iostreams::filtering_istream in_;
  std::string buffer_;
  bool eof_ = false;
  size_t malformed_ = 0;
};

}  // namespace

DocumentStream::DocumentStream(const CorpusSource& source) {
  if (!fs::exists(source.path)) throw InputError("corpus source does not exist: " + source.path);
  if (source.kind == SourceKind::kWikiDump) {
    impl_ = std::make_unique<WikiDumpStream>(source.path);
  } else if (fs::is_directory(source.path)) {
    impl_ = std::make_unique<PlainDirectoryStream>(source.path);
  } else {
    impl_ = std::make_unique<PlainFileStream>(source.path);
  }
}

DocumentStream::~DocumentStream() = default;
DocumentStream::DocumentStream(DocumentStream&&) noexcept = default;
DocumentStream& DocumentStream::operator=(DocumentStream&&) noexcept = default;

std::optional<Document> DocumentStream::next() {
  try {
    return impl_->next();
  } catch (const boost::iostreams::gzip_error& e) {
    throw InputError(std::string("corrupt gzip stream: ") + e.what());
  } catch (const boost::iostreams::bzip2_error& e) {
    throw InputError(std::string("corrupt bzip2 stream: ") + e.what());
  }
}

size_t DocumentStream::malformed_pages() const { return impl_->malformed(); }

}  // namespace crem
