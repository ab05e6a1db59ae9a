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

// UTF-8 <-> code point conversion and the handful of character classes the
// segmenter and detectors need. All offsets exposed by the library count
// Unicode scalar values, so text is decoded once and processed as UTF-32.

#ifndef CREM_UTF8_H_
#define CREM_UTF8_H_

#include <string>
#include <string_view>

namespace crem::utf8 {

// Invalid sequences decode to U+FFFD.
std::u32string decode(std::string_view bytes);
std::string encode(std::u32string_view text);
std::string encode(char32_t c);

bool is_letter(char32_t c);
bool is_upper(char32_t c);
bool is_lower(char32_t c);
bool is_digit(char32_t c);
bool is_space(char32_t c);
bool is_apostrophe(char32_t c);
bool is_opening_quote(char32_t c);
bool is_closing_punct(char32_t c);

// Simple case folding, sufficient for Latin, Greek and Cyrillic.
char32_t to_lower(char32_t c);
std::u32string to_lower(std::u32string_view text);
std::string to_lower(std::string_view utf8_text);

std::string trim(std::string_view s);
// Collapses whitespace runs to one space and trims both ends.
std::string collapse_whitespace(std::string_view s);

}  // namespace crem::utf8

#endif  // CREM_UTF8_H_
