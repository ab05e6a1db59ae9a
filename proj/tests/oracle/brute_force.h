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


// Exhaustive reference for example generation, used only by tests. Every
// (repeated key, occurrence, alternative key) triple is checked against the
// generation rules stated literally; nothing is shared with the production
// generator except the key and id definitions.

#ifndef CREM_TESTS_ORACLE_BRUTE_FORCE_H_
#define CREM_TESTS_ORACLE_BRUTE_FORCE_H_

#include <vector>

#include "crem/cremgen.h"
#include "crem/names.h"
#include "crem/textio.h"

namespace crem::oracle {

std::vector<MaskedExample> brute_force_generate(const Passage& passage,
                                                const std::vector<NameMention>& mentions);

// Whole-document version: every window, brute-force generation, and
// suppression of (absolute offset, incorrect) pairs already emitted.
std::vector<MaskedExample> brute_force_document(const Document& doc, const NameDetector& detector);

}  // namespace crem::oracle

#endif  // CREM_TESTS_ORACLE_BRUTE_FORCE_H_
