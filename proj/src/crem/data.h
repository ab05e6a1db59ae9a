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

#ifndef CREM_DATA_H_
#define CREM_DATA_H_

#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace crem::data {

// Copies of the files under data/, compiled into the library so the default
// detectors and scorers work without a data directory. Throws UsageError for
// an unknown name.
std::string_view embedded(std::string_view name);

// Reads a whole file; throws InputError when it cannot be opened.
std::string read_file(const std::string& path);

// Returns the named embedded file when `path` is empty, otherwise the file.
std::string load_or_embedded(const std::string& path, std::string_view embedded_name);

// One entry per line. "#section" (hash directly followed by a letter) opens a
// section; "# ..." lines and blank lines are ignored. Entries before the first
// header land in section "".
using Sections = std::map<std::string, std::vector<std::string>>;
Sections parse_sections(std::string_view text);

// "key<TAB>value" lines, same comment rules. Throws InputError with the line
// number on a line without a tab.
std::vector<std::pair<std::string, std::string>> parse_tab_pairs(std::string_view text);

}  // namespace crem::data

#endif  // CREM_DATA_H_
