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

// Just enough XML for flat, well-known exports (wiki dumps, the WSC and PDP
// collections): element lookup by tag name and entity decoding. No
// namespaces, no DTDs.

#ifndef CREM_XML_H_
#define CREM_XML_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace crem::xml {

// Decodes the XML entities, numeric character references and the common
// HTML named entities (&nbsp; &ndash; &mdash; ...). Unknown entities are kept.
std::string unescape(std::string_view s);

struct Element {
  std::string_view attributes;  // raw text between the tag name and '>'
  std::string_view content;     // empty for self-closing elements
  size_t end = 0;               // offset just past the element
};

// First <tag ...>...</tag> or <tag .../> at or after `from`. Nested
// elements with the same tag are not supported.
std::optional<Element> find(std::string_view s, std::string_view tag, size_t from = 0);

std::vector<Element> find_all(std::string_view s, std::string_view tag);

}  // namespace crem::xml

#endif  // CREM_XML_H_
