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

#include "crem/data.h"

#include <fstream>
#include <sstream>

#include "crem/error.h"
#include "crem/utf8.h"

namespace crem::data {

// Defined in the generated embedded_data.cc.
extern const std::vector<std::pair<std::string_view, std::string_view>>& embedded_files();

std::string_view embedded(std::string_view name) {
  for (const auto& [file, contents] : embedded_files()) {
    if (file == name) return contents;
  }
  throw UsageError("no embedded data file named " + std::string(name));
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string load_or_embedded(const std::string& path, std::string_view embedded_name) {
  if (path.empty()) return std::string(embedded(embedded_name));
  return read_file(path);
}

namespace {

template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  long line_no = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    ++line_no;
    std::string_view line = text.substr(pos, nl - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    fn(line, line_no);
    pos = nl + 1;
  }
}

bool is_header(std::string_view line) {
  return line.size() > 1 && line[0] == '#' &&
         ((line[1] >= 'a' && line[1] <= 'z') || (line[1] >= 'A' && line[1] <= 'Z'));
}

}  // namespace

Sections parse_sections(std::string_view text) {
  Sections out;
  std::string current;
  for_each_line(text, [&](std::string_view raw, long) {
    std::string line = utf8::trim(raw);
    if (line.empty()) return;
    if (is_header(line)) {
      current = line.substr(1);
      out[current];
      return;
    }
    if (line[0] == '#') return;
    out[current].push_back(std::move(line));
  });
  return out;
}

std::vector<std::pair<std::string, std::string>> parse_tab_pairs(std::string_view text) {
  std::vector<std::pair<std::string, std::string>> out;
  for_each_line(text, [&](std::string_view raw, long line_no) {
    std::string line = utf8::trim(raw);
    if (line.empty() || line[0] == '#') return;
    const size_t tab = line.find('\t');
    if (tab == std::string::npos) throw InputError("expected key<TAB>value", line_no);
    out.emplace_back(utf8::trim(line.substr(0, tab)), utf8::trim(line.substr(tab + 1)));
  });
  return out;
}

}  // namespace crem::data
