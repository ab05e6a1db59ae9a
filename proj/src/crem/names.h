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

#ifndef CREM_NAMES_H_
#define CREM_NAMES_H_

#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "crem/textio.h"

namespace crem {

// A personal-name span inside a passage. Offsets are code points into
// Passage::text; `surface` is exactly that slice, possessive clitic included
// ("Adams'" or "Adams's").
struct NameMention {
  size_t start = 0;
  size_t end = 0;
  std::string surface;
  int sentence_index = 0;

  bool operator==(const NameMention&) const = default;
};

// Identity used for repetition checks: the surface with trailing possessive
// clitics ('s, ’s, bare ' or ’) removed, otherwise exact and case-sensitive.
std::string name_key(std::string_view surface);
inline std::string name_key(const NameMention& m) { return name_key(m.surface); }

class NameDetector {
 public:
  virtual ~NameDetector() = default;
  // Ordered, non-overlapping mentions. External detectors throw
  // ProtocolError on failure.
  virtual std::vector<NameMention> detect(const Passage& passage) const = 0;
};

// Checks ordering, overlap, bounds and surface slices; throws ProtocolError
// naming the first violation. Applied to every external detector reply.
void validate_mentions(const Passage& passage, const std::vector<NameMention>& mentions);

struct Gazetteer {
  std::set<std::u32string> given;
  std::set<std::u32string> family;

  bool contains(std::u32string_view token) const {
    const std::u32string t(token);
    return given.count(t) > 0 || family.count(t) > 0;
  }

  // "#given" and "#family" sections, one name per line.
  static Gazetteer parse(std::string_view text);
  static Gazetteer from_names(const std::vector<std::string>& given_names);
};

// Built-in detector. A candidate is a maximal run of capitalized words joined
// by single spaces, never containing a stopword, ending at a possessive. A run
// is kept when one of its words is in the gazetteer, or when it does not start
// a sentence.
class GazetteerDetector : public NameDetector {
 public:
  GazetteerDetector(Gazetteer gazetteer, std::set<std::u32string> stopwords);

  // Shipped gazetteer and stopword list.
  static std::shared_ptr<const GazetteerDetector> default_instance();
  static std::set<std::u32string> parse_stopwords(std::string_view text);

  std::vector<NameMention> detect(const Passage& passage) const override;

 private:
  Gazetteer gazetteer_;
  std::set<std::u32string> stopwords_;
};

}  // namespace crem

#endif  // CREM_NAMES_H_
