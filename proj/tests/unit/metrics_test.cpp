#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "cascadesum/metrics.hpp"
#include "support/oracles.hpp"
#include "support/synth.hpp"

namespace cascadesum {
namespace {

Tokens toks(std::string_view s) { return tokenize(s); }

TEST(Lcs, Examples) {
  EXPECT_EQ(lcs_length(toks("a b c d"), toks("a c d")), 3u);
  EXPECT_EQ(lcs_length({}, toks("a")), 0u);
  EXPECT_EQ(lcs_length(toks("a b"), toks("c d")), 0u);
  EXPECT_EQ(lcs_length(toks("x y x y"), toks("y x y x")), 3u);
}

TEST(RougeN, Examples) {
  const auto r1 = rouge_n(toks("the cat sat"), toks("the cat sat down"), 1);
  EXPECT_DOUBLE_EQ(r1.precision, 1.0);
  EXPECT_DOUBLE_EQ(r1.recall, 0.75);
  EXPECT_NEAR(r1.f1, 6.0 / 7.0, 1e-12);

  // Clipping: the candidate's repeated "the" counts once.
  const auto clipped = rouge_n(toks("the the the"), toks("the cat"), 1);
  EXPECT_NEAR(clipped.precision, 1.0 / 3.0, 1e-12);
  EXPECT_DOUBLE_EQ(clipped.recall, 0.5);

  EXPECT_EQ(rouge_n({}, toks("a"), 1), (PrfScores{}));
  EXPECT_EQ(rouge_n(toks("a"), toks("a"), 2), (PrfScores{}));
  try {
    rouge_n(toks("a"), toks("a"), 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::InvalidN);
  }
}

TEST(RougeL, Examples) {
  const auto r = rouge_l(toks("a b c d"), toks("a c d"));
  EXPECT_DOUBLE_EQ(r.precision, 0.75);
  EXPECT_DOUBLE_EQ(r.recall, 1.0);
  EXPECT_NEAR(r.f1, 6.0 / 7.0, 1e-12);
  EXPECT_EQ(rouge_l({}, {}), (PrfScores{}));
}

TEST(Bleu, Examples) {
  EXPECT_DOUBLE_EQ(bleu(toks("the cat sat on the mat"), {toks("the cat sat on the mat")}), 1.0);
  EXPECT_EQ(bleu({}, {toks("a b")}), 0.0);
  // Repeated unigram against a shorter reference: p1 = 1/4, p2..p4 smoothed,
  // no brevity penalty (c = 4 > r = 2).
  EXPECT_NEAR(bleu(toks("the the the the"), {toks("the cat")}), 1.2574334296829372e-07, 1e-9);
  try {
    bleu(toks("a"), {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NoReferences);
  }
}

TEST(Bleu, BrevityPenaltyAndClosestReference) {
  // Candidate is a prefix of the reference: all precisions 1, BP = exp(1 - 6/4).
  EXPECT_NEAR(bleu(toks("a b c d"), {toks("a b c d e f")}), std::exp(1.0 - 6.0 / 4.0), 1e-12);
  // Closest reference length wins; the exact-length one removes the penalty.
  EXPECT_NEAR(bleu(toks("a b c d"), {toks("a b c d e f"), toks("a b c d")}), 1.0, 1e-12);
  // Equidistant references (3 and 5 for c = 4): the shorter one is used.
  EXPECT_NEAR(bleu(toks("a b c d"), {toks("a b c d e"), toks("a b c")}), 1.0, 1e-12);
}

TEST(ScorePair, IdentityAndDisjoint) {
  const auto same = score_pair("Solar panels convert sunlight.", "solar panels convert sunlight");
  EXPECT_DOUBLE_EQ(same.rouge1.f1, 1.0);
  EXPECT_DOUBLE_EQ(same.rouge2.f1, 1.0);
  EXPECT_DOUBLE_EQ(same.rougeL.f1, 1.0);
  EXPECT_NEAR(same.bleu, 1.0, 1e-12);
  const auto none = score_pair("alpha beta", "gamma delta");
  EXPECT_EQ(none.rouge1.f1, 0.0);
  EXPECT_EQ(none.rougeL.f1, 0.0);
}

TEST(CorpusStats, Examples) {
  const auto s = corpus_stats({{"a b c d", "x"}, {"a b", "x y"}, {"a b c d e f", "x y z"}});
  EXPECT_EQ(s.doc_count, 3u);
  EXPECT_EQ(s.article_len, (LengthSummary{2, 6, 4.0, 4, 2}));
  EXPECT_EQ(s.summary_len, (LengthSummary{1, 3, 2.0, 2, 1}));
  EXPECT_EQ(s.article_vocab, 6u);
  EXPECT_EQ(s.summary_vocab, 3u);
  // article lengths 4,2,6 vs summary 1,2,3: r = 0.5.
  EXPECT_NEAR(s.len_correlation, 0.5, 1e-12);

  const auto flat = corpus_stats({{"a", "b"}, {"c", "d"}});
  EXPECT_EQ(flat.len_correlation, 0.0);
  EXPECT_EQ(flat.article_len.median, 1u);

  try {
    corpus_stats({});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::EmptyCorpus);
  }
}

TEST(SummarizeLengths, EvenCountUsesLowerMiddle) {
  EXPECT_EQ(summarize_lengths({4, 1, 3, 2}), (LengthSummary{1, 4, 2.5, 2, 1}));
  EXPECT_EQ(summarize_lengths({9, 1, 5, 3, 7}), (LengthSummary{1, 9, 5.0, 5, 3}));
}

TEST(MetricProperties, LcsMatchesBruteForce) {
  std::mt19937 rng(12);
  std::uniform_int_distribution<std::size_t> len(0, 9);
  for (int i = 0; i < 500; ++i) {
    const auto a = testing::random_tokens(rng, len(rng), 3);
    const auto b = testing::random_tokens(rng, len(rng), 3);
    EXPECT_EQ(lcs_length(a, b), oracle::lcs_brute(a, b));
    const auto fast = rouge_l(a, b);
    const auto slow = oracle::rouge_l_brute(a, b);
    EXPECT_NEAR(fast.f1, slow.f, 1e-12);
  }
}

TEST(MetricProperties, RougeNMatchesExplicitMatching) {
  std::mt19937 rng(13);
  std::uniform_int_distribution<std::size_t> len(0, 12);
  for (int i = 0; i < 500; ++i) {
    const auto a = testing::random_tokens(rng, len(rng), 3);
    const auto b = testing::random_tokens(rng, len(rng), 3);
    for (int n = 1; n <= 3; ++n) {
      const auto r = rouge_n(a, b, n);
      const auto un = static_cast<std::size_t>(n);
      const double m = static_cast<double>(oracle::clipped_matches(a, b, un));
      if (a.size() >= un && b.size() >= un) {
        EXPECT_NEAR(r.precision, m / static_cast<double>(a.size() - un + 1), 1e-12);
        EXPECT_NEAR(r.recall, m / static_cast<double>(b.size() - un + 1), 1e-12);
      } else {
        EXPECT_EQ(r, (PrfScores{}));
      }
    }
  }
}

TEST(MetricProperties, RangesAndSymmetry) {
  std::mt19937 rng(14);
  std::uniform_int_distribution<std::size_t> len(0, 15);
  for (int i = 0; i < 1000; ++i) {
    const auto a = testing::random_tokens(rng, len(rng), 5);
    const auto b = testing::random_tokens(rng, len(rng), 5);
    for (const auto& s : {rouge_n(a, b, 1), rouge_n(a, b, 2), rouge_l(a, b)}) {
      EXPECT_GE(s.f1, 0.0);
      EXPECT_LE(s.f1, 1.0);
    }
    EXPECT_NEAR(rouge_n(a, b, 1).f1, rouge_n(b, a, 1).f1, 1e-12);
    EXPECT_NEAR(rouge_l(a, b).f1, rouge_l(b, a).f1, 1e-12);
    const double v = bleu(a, {b});
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
  }
}

TEST(MetricProperties, ToJsonKeys) {
  const auto j = to_json(score_pair("a b", "a b"));
  EXPECT_EQ(canonical_dump(j["rouge1"]), R"({"f1":1.0,"precision":1.0,"recall":1.0})");
  EXPECT_TRUE(j.contains("bleu"));
}

}  // namespace
}  // namespace cascadesum
