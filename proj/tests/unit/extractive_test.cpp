#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "cascadesum/extractive.hpp"
#include "support/oracles.hpp"
#include "support/synth.hpp"

namespace cascadesum {
namespace {

SentenceRecord record(std::size_t index, std::vector<std::string> content, std::size_t words = 0) {
  SentenceRecord r;
  r.index = index;
  r.tokens = content;
  r.content_tokens = std::move(content);
  r.word_count = words ? words : std::max<std::size_t>(r.content_tokens.size(), 1);
  for (const auto& t : r.content_tokens) r.display_text += (r.display_text.empty() ? "" : " ") + t;
  return r;
}

ScoredSentence scored(std::size_t index, double score, std::vector<std::string> content = {}) {
  if (content.empty()) content = {"tok" + std::to_string(index)};
  return {record(index, std::move(content)), score};
}

TEST(FrequencyTable, MaxNorm) {
  const auto t = build_frequency_table({record(0, {"b", "a"}), record(1, {"b"})}, NormMode::MaxNorm);
  EXPECT_EQ(t.raw_counts.at("b"), 2);
  EXPECT_EQ(t.weights.at("b"), 1.0);
  EXPECT_EQ(t.weights.at("a"), 0.5);
}

TEST(FrequencyTable, L2Norm) {
  const auto t = build_frequency_table({record(0, {"b", "a"}), record(1, {"b"})}, NormMode::L2Norm);
  EXPECT_NEAR(t.weights.at("b"), 0.8944271909999159, 1e-12);
  EXPECT_NEAR(t.weights.at("a"), 0.4472135954999579, 1e-12);
}

TEST(FrequencyTable, Empty) {
  EXPECT_TRUE(build_frequency_table({}, NormMode::MaxNorm).empty());
  EXPECT_TRUE(build_frequency_table({record(0, {})}, NormMode::L2Norm).empty());
}

TEST(ScoreSentences, SumsWeightsWithMultiplicity) {
  const auto table = build_frequency_table({record(0, {"b", "a"}), record(1, {"b"})}, NormMode::MaxNorm);
  const auto out = score_sentences({record(0, {"b", "a"}), record(1, {"a", "a"})}, table, 30);
  ASSERT_EQ(out.size(), 2u);
  EXPECT_DOUBLE_EQ(out[0].score, 1.5);
  EXPECT_DOUBLE_EQ(out[1].score, 1.0);
}

TEST(ScoreSentences, LengthThresholdAndStopwordOnly) {
  const auto table = build_frequency_table({record(0, {"x"})}, NormMode::MaxNorm);
  const auto out = score_sentences({record(0, {"x"}, 30), record(1, {"x"}, 31), record(2, {}, 4)}, table, 30);
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0].record.index, 0u);
  EXPECT_EQ(out[1].record.index, 2u);
  EXPECT_EQ(out[1].score, 0.0);
}

TEST(SelectSummary, ArgmaxAndTieBreak) {
  SelectionParams p;
  p.budget_sentences = 1;
  auto s = select_summary({scored(0, 2.0), scored(1, 1.0)}, p);
  ASSERT_EQ(s.selected.size(), 1u);
  EXPECT_EQ(s.selected[0].record.index, 0u);

  s = select_summary({scored(0, 1.0), scored(1, 1.0)}, p);
  ASSERT_EQ(s.selected.size(), 1u);
  EXPECT_EQ(s.selected[0].record.index, 0u);
}

TEST(SelectSummary, DiversityPenaltyHandExample) {
  // #0 and #1 share tokens; #2 is disjoint. MMR values after picking #0:
  // #1: 0.7*1.0 - 0.3*1.0 = 0.40, #2: 0.7*0.9 - 0 = 0.63.
  SelectionParams p;
  p.budget_sentences = 2;
  p.mmr_lambda = 0.7;
  const auto s = select_summary({scored(0, 1.0, {"sun", "panel"}), scored(1, 1.0, {"panel", "sun"}),
                                 scored(2, 0.9, {"battery", "night"})},
                                p);
  ASSERT_EQ(s.selected.size(), 2u);
  EXPECT_EQ(s.selected[0].record.index, 0u);
  EXPECT_EQ(s.selected[1].record.index, 2u);
  EXPECT_DOUBLE_EQ(s.total_score, 1.9);
  EXPECT_NEAR(0.7 * 1.0 - 0.3 * jaccard({"sun", "panel"}, {"panel", "sun"}), 0.40, 1e-12);
}

TEST(SelectSummary, BudgetLargerThanCandidatesAndEmptyInput) {
  SelectionParams p;
  p.budget_sentences = 10;
  EXPECT_EQ(select_summary({scored(0, 0.0), scored(1, 0.5)}, p).selected.size(), 2u);
  EXPECT_TRUE(select_summary({}, p).selected.empty());
}

TEST(Jaccard, Cases) {
  EXPECT_EQ(jaccard({}, {}), 0.0);
  EXPECT_EQ(jaccard({"a", "a"}, {"a"}), 1.0);
  EXPECT_DOUBLE_EQ(jaccard({"a", "b"}, {"b", "c"}), 1.0 / 3.0);
}

std::vector<SentenceRecord> random_records(std::mt19937& rng) {
  std::uniform_int_distribution<int> count(1, 25);
  return analyze_document(testing::random_document(rng, count(rng)));
}

TEST(ExtractiveProperties, MaxNormHasUnitMaximum) {
  std::mt19937 rng(1);
  for (int i = 0; i < 200; ++i) {
    const auto t = build_frequency_table(random_records(rng), NormMode::MaxNorm);
    if (t.empty()) continue;
    long max_count = 0;
    for (const auto& [_, c] : t.raw_counts) max_count = std::max(max_count, c);
    for (const auto& [tok, w] : t.weights) {
      EXPECT_GT(w, 0.0);
      EXPECT_LE(w, 1.0);
      EXPECT_EQ(w == 1.0, t.raw_counts.at(tok) == max_count);
    }
  }
}

TEST(ExtractiveProperties, AddingTokenOccurrenceRaisesScore) {
  std::mt19937 rng(2);
  for (int i = 0; i < 100; ++i) {
    auto records = random_records(rng);
    const auto table = build_frequency_table(records, NormMode::L2Norm);
    if (table.empty()) continue;
    const auto base = score_sentences(records, table, 1000);
    auto boosted = records[0];
    boosted.content_tokens.push_back(table.weights.begin()->first);
    const auto after = score_sentences({boosted}, table, 1000);
    EXPECT_GT(after[0].score, base[0].score);
  }
}

TEST(ExtractiveProperties, LambdaOneIsTopK) {
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> n(0, 15);
  std::uniform_int_distribution<int> k(1, 6);
  std::uniform_int_distribution<int> coarse(0, 4);
  for (int i = 0; i < 200; ++i) {
    std::vector<ScoredSentence> cands;
    std::vector<double> scores;
    const int count = n(rng);
    for (int j = 0; j < count; ++j) {
      const double s = coarse(rng) * 0.5;  // coarse values force ties
      scores.push_back(s);
      cands.push_back(scored(static_cast<std::size_t>(j), s, {"shared", "t" + std::to_string(j % 3)}));
    }
    SelectionParams p;
    p.mmr_lambda = 1.0;
    p.budget_sentences = k(rng);
    const auto summary = select_summary(cands, p);
    std::vector<std::size_t> got;
    for (const auto& s : summary.selected) got.push_back(s.record.index);
    EXPECT_EQ(got, oracle::top_k(scores, static_cast<std::size_t>(p.budget_sentences)));
  }
}

TEST(ExtractiveProperties, Deterministic) {
  std::mt19937 rng(4);
  for (int i = 0; i < 50; ++i) {
    const auto records = random_records(rng);
    const auto table = build_frequency_table(records);
    const auto a = select_summary(score_sentences(records, table, 30), {});
    const auto b = select_summary(score_sentences(records, table, 30), {});
    ASSERT_EQ(a.selected.size(), b.selected.size());
    for (std::size_t j = 0; j < a.selected.size(); ++j) {
      EXPECT_EQ(a.selected[j].record, b.selected[j].record);
      EXPECT_EQ(a.selected[j].score, b.selected[j].score);
    }
    for (std::size_t j = 1; j < a.selected.size(); ++j) {
      EXPECT_LT(a.selected[j - 1].record.index, a.selected[j].record.index);
    }
  }
}

}  // namespace
}  // namespace cascadesum
