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

// Corpus streaming, sentence segmentation and passage windows.
//
// Documents come either from a MediaWiki XML export (plain, .gz or .bz2) or
// from UTF-8 plain-text files. Each document is segmented into sentences and
// turned into passages: every single sentence, then every adjacent pair.
// Nothing longer than two sentences is ever produced.

#ifndef CREM_TEXTIO_H_
#define CREM_TEXTIO_H_

#include <cstddef>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace crem {

enum class SourceKind { kWikiDump, kPlainText };

struct Document {
  std::string doc_id;
  std::string text;  // UTF-8, never empty
  SourceKind source = SourceKind::kPlainText;
};

// Offsets count code points into the document text; `end` is exclusive.
struct Sentence {
  size_t start = 0;
  size_t end = 0;
  size_t index = 0;

  bool operator==(const Sentence&) const = default;
};

struct Passage {
  std::string doc_id;
  std::vector<Sentence> sentences;  // one or two consecutive sentences
  std::u32string text;              // document text from first start to last end
  std::optional<size_t> boundary;   // passage offset where sentence 2 begins

  size_t doc_start() const { return sentences.front().start; }
  size_t doc_end() const { return sentences.back().end; }
  // 0 or 1: which sentence a passage offset falls in.
  int sentence_of(size_t offset) const {
    return boundary && offset >= *boundary ? 1 : 0;
  }
};

// Rule-based splitter: a run of '.', '!' or '?' (plus closing quotes or
// brackets) ends a sentence when followed by whitespace and then an uppercase
// letter or an opening quote. A period does not split when the word before it
// is on the abbreviation list. A blank line always ends a sentence.
class SentenceSegmenter {
 public:
  explicit SentenceSegmenter(std::set<std::u32string> abbreviations);

  // Uses the shipped abbreviation list.
  static const SentenceSegmenter& default_instance();
  // One token per line, without the trailing period.
  static SentenceSegmenter from_list(std::string_view list_text);

  std::vector<Sentence> segment(std::u32string_view text) const;

 private:
  bool is_abbreviation(std::u32string_view text, size_t period) const;

  std::set<std::u32string> abbreviations_;
};

// Segments UTF-8 text with the default segmenter.
std::vector<Sentence> segment_sentences(std::string_view text);

// Every single sentence in order, then every adjacent pair in order.
std::vector<Passage> windows(const std::string& doc_id, std::u32string_view text,
                             const std::vector<Sentence>& sentences);
std::vector<Passage> windows(const Document& doc,
                             const SentenceSegmenter& segmenter = SentenceSegmenter::default_instance());

// Reduces wikitext to prose paragraphs separated by blank lines: drops
// templates, tables, references, comments, headings, lists, file and category
// links; keeps the anchor text of internal and external links.
std::string strip_wikitext(std::string_view wikitext);

struct CorpusSource {
  SourceKind kind = SourceKind::kPlainText;
  std::string path;

  // Directories and non-XML files are plain text; *.xml, *.xml.gz and
  // *.xml.bz2 are wiki dumps.
  static CorpusSource detect(const std::string& path);
};

// Single-pass reader over a corpus source. Plain-text directories yield one
// document per regular file in lexicographic path order; a single plain-text
// file yields one document per blank-line-separated block. Dumps yield
// article pages (namespace 0, not redirects) in dump order.
class DocumentStream {
 public:
  // Throws InputError when the source cannot be opened.
  explicit DocumentStream(const CorpusSource& source);
  ~DocumentStream();
  DocumentStream(DocumentStream&&) noexcept;
  DocumentStream& operator=(DocumentStream&&) noexcept;

  std::optional<Document> next();

  // Dump pages that could not be parsed and were skipped.
  size_t malformed_pages() const;

  class Impl;

 private:
  std::unique_ptr<Impl> impl_;
};

}  // namespace crem

#endif  // CREM_TEXTIO_H_
