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


#include <gtest/gtest.h>

#include "crem/data.h"
#include "crem/error.h"
#include "crem/utf8.h"
#include "crem/xml.h"
#include "support/test_support.h"

namespace crem {
namespace {

TEST(Utf8, RoundTripsMultibyteText) {
  const std::string s = "Zoë met Élodie in Kraków, 東京 and 🙂.";
  const std::u32string d = utf8::decode(s);
  EXPECT_EQ(d.size(), 35u);
  EXPECT_EQ(d[2], U'ë');
  EXPECT_EQ(utf8::encode(d), s);
}

TEST(Utf8, InvalidBytesBecomeReplacementCharacters) {
  const std::u32string d = utf8::decode("a\xff" "b\xe2\x82");
  ASSERT_EQ(d.size(), 4u);
  EXPECT_EQ(d[1], U'�');
  EXPECT_EQ(d[3], U'�');
}

TEST(Utf8, CharacterClasses) {
  EXPECT_TRUE(utf8::is_upper(U'É'));
  EXPECT_TRUE(utf8::is_lower(U'ë'));
  EXPECT_TRUE(utf8::is_letter(U'Ж'));
  EXPECT_FALSE(utf8::is_letter(U'-'));
  EXPECT_TRUE(utf8::is_apostrophe(U'’'));
  EXPECT_TRUE(utf8::is_space(U' '));
  EXPECT_EQ(utf8::to_lower(std::string_view("ÉLODIE Жук")), "élodie жук");
}

TEST(Utf8, TrimAndCollapse) {
  EXPECT_EQ(utf8::trim("  a b \t\n"), "a b");
  EXPECT_EQ(utf8::collapse_whitespace("  a \n\t b  c "), "a b c");
  EXPECT_EQ(utf8::collapse_whitespace(""), "");
}

TEST(Data, ParsesSectionsAndComments) {
  const auto s = data::parse_sections("loose\n#given\nAnn\n# a comment\n\nBob\n#family\nSmith\n");
  ASSERT_EQ(s.size(), 3u);
  EXPECT_EQ(s.at(""), std::vector<std::string>{"loose"});
  EXPECT_EQ(s.at("given"), (std::vector<std::string>{"Ann", "Bob"}));
  EXPECT_EQ(s.at("family"), std::vector<std::string>{"Smith"});
}

TEST(Data, TabPairsReportTheBadLine) {
  const auto pairs = data::parse_tab_pairs("a\t1\n# skip\nb\t2\n");
  ASSERT_EQ(pairs.size(), 2u);
  EXPECT_EQ(pairs[1], (std::pair<std::string, std::string>{"b", "2"}));
  try {
    data::parse_tab_pairs("a\t1\nbroken\n");
    FAIL();
  } catch (const InputError& e) {
    EXPECT_EQ(e.line(), 2);
  }
}

TEST(Data, EmbeddedFilesMatchTheDataDirectory) {
  for (const char* name : {"gazetteer.txt", "stopwords.txt", "abbreviations.txt", "nouns.txt",
                           "unigram_counts.tsv", "gender_names.tsv", "occupations.txt",
                           "annotations_appendix.jsonl"}) {
    EXPECT_EQ(data::embedded(name), testing::slurp(std::string(CREM_DATA_SOURCE_DIR) + "/" + name)) << name;
  }
  EXPECT_THROW(data::embedded("missing.txt"), UsageError);
}

TEST(Data, MissingFileIsAnInputError) {
  EXPECT_THROW(data::read_file("/nonexistent/file"), InputError);
  EXPECT_EQ(data::load_or_embedded("", "nouns.txt"), data::embedded("nouns.txt"));
}

TEST(Xml, FindsElementsAndDecodesEntities) {
  const std::string doc = "<a><b x=\"1\">one &amp; two</b><c/><b>&#233;&#x41;&nbsp;&unknown;</b></a>";
  const auto b = xml::find(doc, "b");
  ASSERT_TRUE(b);
  EXPECT_EQ(b->content, "one &amp; two");
  EXPECT_EQ(b->attributes, " x=\"1\"");
  EXPECT_EQ(xml::unescape(b->content), "one & two");
  const auto c = xml::find(doc, "c");
  ASSERT_TRUE(c);
  EXPECT_TRUE(c->content.empty());
  const auto all = xml::find_all(doc, "b");
  ASSERT_EQ(all.size(), 2u);
  EXPECT_EQ(xml::unescape(all[1].content), "éA\u00a0&unknown;");
  EXPECT_FALSE(xml::find(doc, "d"));
}

TEST(Xml, TagPrefixIsNotAMatch) {
  const std::string doc = "<bb>no</bb><b>yes</b>";
  const auto b = xml::find(doc, "b");
  ASSERT_TRUE(b);
  EXPECT_EQ(b->content, "yes");
}

}  // namespace
}  // namespace crem
