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

#include "crem/xml.h"

#include <charconv>
#include <utility>

#include "crem/utf8.h"

namespace crem::xml {

namespace {

constexpr std::pair<std::string_view, char32_t> kNamedEntities[] = {
    {"amp", '&'},      {"lt", '<'},       {"gt", '>'},       {"quot", '"'},
    {"apos", '\''},    {"nbsp", 0xA0},    {"ndash", 0x2013}, {"mdash", 0x2014},
    {"lsquo", 0x2018}, {"rsquo", 0x2019}, {"ldquo", 0x201C}, {"rdquo", 0x201D},
    {"hellip", 0x2026}, {"minus", 0x2212}, {"times", 0xD7},  {"deg", 0xB0},
    {"copy", 0xA9},    {"eacute", 0xE9},  {"auml", 0xE4},    {"ouml", 0xF6},
    {"uuml", 0xFC},    {"szlig", 0xDF},
};

}  // namespace

std::string unescape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  size_t i = 0;
  while (i < s.size()) {
    if (s[i] != '&') {
      out.push_back(s[i++]);
      continue;
    }
    const size_t semi = s.find(';', i + 1);
    if (semi == std::string_view::npos || semi - i > 10) {
      out.push_back(s[i++]);
      continue;
    }
    std::string_view name = s.substr(i + 1, semi - i - 1);
    bool decoded = false;
    if (!name.empty() && name[0] == '#') {
      unsigned long value = 0;
      std::from_chars_result r;
      if (name.size() > 1 && (name[1] == 'x' || name[1] == 'X')) {
        r = std::from_chars(name.data() + 2, name.data() + name.size(), value, 16);
      } else {
        r = std::from_chars(name.data() + 1, name.data() + name.size(), value, 10);
      }
      if (r.ec == std::errc() && r.ptr == name.data() + name.size() && value > 0 &&
          value <= 0x10FFFF) {
        out += utf8::encode(static_cast<char32_t>(value));
        decoded = true;
      }
    } else {
      for (const auto& [entity, cp] : kNamedEntities) {
        if (entity == name) {
          out += utf8::encode(cp);
          decoded = true;
          break;
        }
      }
    }
    if (decoded) {
      i = semi + 1;
    } else {
      out.push_back(s[i++]);
    }
  }
  return out;
}

std::optional<Element> find(std::string_view s, std::string_view tag, size_t from) {
  const std::string open = "<" + std::string(tag);
  const std::string close = "</" + std::string(tag) + ">";
  size_t pos = from;
  while (true) {
    pos = s.find(open, pos);
    if (pos == std::string_view::npos) return std::nullopt;
    const size_t after = pos + open.size();
    if (after >= s.size()) return std::nullopt;
    const char c = s[after];
    if (c != '>' && c != ' ' && c != '/' && c != '\t' && c != '\n' && c != '\r') {
      pos = after;
      continue;
    }
    const size_t gt = s.find('>', after);
    if (gt == std::string_view::npos) return std::nullopt;
    Element e;
    if (s[gt - 1] == '/') {
      e.attributes = s.substr(after, gt - 1 - after);
      e.end = gt + 1;
      return e;
    }
    e.attributes = s.substr(after, gt - after);
    const size_t end = s.find(close, gt + 1);
    if (end == std::string_view::npos) return std::nullopt;
    e.content = s.substr(gt + 1, end - gt - 1);
    e.end = end + close.size();
    return e;
  }
}

std::vector<Element> find_all(std::string_view s, std::string_view tag) {
  std::vector<Element> out;
  size_t pos = 0;
  while (auto e = find(s, tag, pos)) {
    pos = e->end;
    out.push_back(*e);
  }
  return out;
}

}  // namespace crem::xml
