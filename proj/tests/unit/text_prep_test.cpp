#include <gtest/gtest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "cascadesum/text_prep.hpp"
#include "cascadesum/utf8.hpp"
#include "support/synth.hpp"

namespace cascadesum {
namespace {

using Strings = std::vector<std::string>;

TEST(CleanForDisplay, Examples) {
  EXPECT_EQ(clean_for_display("[Music]  hello   there"), "hello there");
  EXPECT_EQ(clean_for_display("no brackets here"), "no brackets here");
  EXPECT_EQ(clean_for_display("[a][b] x"), "x");
  EXPECT_EQ(clean_for_display("keep [unclosed bracket"), "keep [unclosed bracket");
  EXPECT_EQ(clean_for_display("a [b [c] d] e"), "a d] e");
  EXPECT_EQ(clean_for_display("\t line\nbreak  "), "line break");
}

TEST(CleanForAnalysis, Examples) {
  EXPECT_EQ(clean_for_analysis("It's 2023, folks!"), "it s folks");
  EXPECT_EQ(clean_for_analysis("abc"), "abc");
  EXPECT_EQ(clean_for_analysis("123 456"), "");
  EXPECT_EQ(clean_for_analysis("Caf\xC3\x89 \xC3\x9C" "ber"), "caf\xC3\xA9 \xC3\xBC" "ber");
}

TEST(SegmentSentences, Examples) {
  EXPECT_EQ(segment_sentences("Hello world. How are you?"), (Strings{"Hello world.", "How are you?"}));
  EXPECT_EQ(segment_sentences("Dr. Smith arrived."), (Strings{"Dr. Smith arrived."}));
  EXPECT_EQ(segment_sentences(""), Strings{});
  EXPECT_EQ(segment_sentences("no terminal punctuation here"), (Strings{"no terminal punctuation here"}));
  EXPECT_EQ(segment_sentences("Wait! Really?! Yes."), (Strings{"Wait!", "Really?!", "Yes."}));
  EXPECT_EQ(segment_sentences("Pi is 3.14 today. ok then. Next one"), (Strings{"Pi is 3.14 today. ok then.", "Next one"}));
  EXPECT_EQ(segment_sentences("Use tools, e.g. Hammers. Then rest."), (Strings{"Use tools, e.g. Hammers.", "Then rest."}));
}

TEST(SegmentSentences, CustomAbbreviations) {
  const auto abbrevs = AbbreviationList::from_text("# comment\nfig\n");
  EXPECT_EQ(segment_sentences("See Fig. Two here.", abbrevs), (Strings{"See Fig. Two here."}));
  EXPECT_EQ(segment_sentences("Ask Dr. Who.", abbrevs), (Strings{"Ask Dr.", "Who."}));
}

TEST(Tokenize, Examples) {
  EXPECT_EQ(tokenize("The cat sat."), (Strings{"the", "cat", "sat"}));
  EXPECT_EQ(tokenize(""), Strings{});
  EXPECT_EQ(tokenize("co-op"), (Strings{"co", "op"}));
  EXPECT_EQ(tokenize("!!! ..."), Strings{});
}

TEST(RemoveStopwords, Examples) {
  const auto& sw = default_stopwords();
  EXPECT_EQ(remove_stopwords({"the", "cat"}, sw), (Strings{"cat"}));
  EXPECT_EQ(remove_stopwords({"cat", "cat"}, sw), (Strings{"cat", "cat"}));
  EXPECT_EQ(remove_stopwords({}, sw), Strings{});
}

TEST(Stopwords, BundledListMatchesDataFile) {
  const auto& sw = default_stopwords();
  EXPECT_EQ(sw.size(), 179u);
  for (const char* w : {"the", "a", "an", "and", "or", "of", "to", "in", "is", "are"}) EXPECT_TRUE(sw.contains(w)) << w;

  const auto from_file = StopwordList::load(CASCADESUM_DATA_DIR "/stopwords_en.txt");
  EXPECT_EQ(from_file.words(), sw.words());
  const auto abbrevs = AbbreviationList::load(CASCADESUM_DATA_DIR "/abbreviations_en.txt");
  EXPECT_EQ(abbrevs.words(), default_abbreviations().words());
  EXPECT_THROW(StopwordList::load("/nonexistent/stopwords.txt"), Error);
}

TEST(SentenceRecord, WordCountAndTokens) {
  const auto records = analyze_document("The cat sat on the mat. It's 2023 folks!");
  ASSERT_EQ(records.size(), 2u);
  EXPECT_EQ(records[0].word_count, 6u);
  EXPECT_EQ(records[0].content_tokens, (Strings{"cat", "sat", "mat"}));
  EXPECT_EQ(records[1].index, 1u);
  EXPECT_EQ(records[1].word_count, 3u);
  EXPECT_EQ(records[1].tokens, (Strings{"it", "s", "folks"}));
  EXPECT_EQ(records[1].content_tokens, (Strings{"folks"}));
}

std::string random_text(std::mt19937& rng) {
  static const std::vector<std::string> pieces = {
      "Hello", "world", ".", "!", "?", " ", "  ", "\n", "[Music]", "[", "]", "Dr.", "e.g.", "it's", "2023",
      "co-op", "\xC3\x89t\xC3\xA9", "\xCE\x91\xCE\xB2", "x", "A", "\t", ",", "\xE2\x80\x94", "\xFF"};
  std::uniform_int_distribution<std::size_t> pick(0, pieces.size() - 1);
  std::uniform_int_distribution<int> len(0, 30);
  std::string s;
  const int n = len(rng);
  for (int i = 0; i < n; ++i) s += pieces[pick(rng)];
  return s;
}

TEST(TextPrepProperties, CleanersAreIdempotent) {
  std::mt19937 rng(5);
  for (int i = 0; i < 2000; ++i) {
    const auto s = random_text(rng);
    const auto d = clean_for_display(s);
    EXPECT_EQ(clean_for_display(d), d) << s;
    const auto a = clean_for_analysis(s);
    EXPECT_EQ(clean_for_analysis(a), a) << s;
  }
}

TEST(TextPrepProperties, SegmentationPreservesCharacters) {
  std::mt19937 rng(6);
  const auto strip_ws = [](std::string_view s) {
    std::string out;
    for (char c : s) {
      if (c != ' ' && c != '\t' && c != '\n' && c != '\r') out.push_back(c);
    }
    return out;
  };
  for (int i = 0; i < 2000; ++i) {
    const auto doc = clean_for_display(random_text(rng));
    std::string joined;
    for (const auto& s : segment_sentences(doc)) joined += (joined.empty() ? "" : " ") + s;
    EXPECT_EQ(strip_ws(joined), strip_ws(doc)) << doc;
  }
}

TEST(TextPrepProperties, TokensAreLowercaseAlphabetic) {
  std::mt19937 rng(8);
  for (int i = 0; i < 2000; ++i) {
    for (const auto& tok : tokenize(random_text(rng))) {
      ASSERT_FALSE(tok.empty());
      for (char32_t c : utf8::decode(tok)) {
        EXPECT_TRUE(utf8::is_alpha(c));
        EXPECT_FALSE(utf8::is_upper(c));
      }
    }
  }
}

TEST(TextPrepProperties, StopwordRemovalShrinksOnlyOnStopwords) {
  std::mt19937 rng(9);
  const auto& sw = default_stopwords();
  for (int i = 0; i < 500; ++i) {
    const auto tokens = tokenize(testing::random_document(rng, 2));
    const auto kept = remove_stopwords(tokens, sw);
    EXPECT_LE(kept.size(), tokens.size());
    const bool any_stop = std::any_of(tokens.begin(), tokens.end(), [&](const auto& t) { return sw.contains(t); });
    EXPECT_EQ(kept.size() == tokens.size(), !any_stop);
  }
}

}  // namespace
}  // namespace cascadesum
