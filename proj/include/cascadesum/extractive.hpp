#pragma once

// Term-frequency salience, sentence scoring with a length threshold, and
// greedy maximal-marginal-relevance selection.

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "text_prep.hpp"

namespace cascadesum {

enum class NormMode { MaxNorm, L2Norm };

inline const char* to_string(NormMode m) { return m == NormMode::MaxNorm ? "MaxNorm" : "L2Norm"; }

struct FrequencyTable {
  std::map<std::string, double> weights;
  std::map<std::string, long> raw_counts;
  NormMode mode = NormMode::MaxNorm;

  double weight(const std::string& token) const {
    const auto it = weights.find(token);
    return it == weights.end() ? 0.0 : it->second;
  }
  bool empty() const { return weights.empty(); }
};

struct ScoredSentence {
  SentenceRecord record;
  double score = 0.0;
};

struct SelectionParams {
  int max_sentence_words = 30;
  int budget_sentences = 3;
  double mmr_lambda = 0.7;
};

struct ExtractiveSummary {
  std::vector<ScoredSentence> selected;  // ascending by record.index
  double total_score = 0.0;
};

/// Counts content tokens across all sentences and normalizes the counts by
/// their maximum (MaxNorm) or by the Euclidean norm of the count vector
/// (L2Norm).
inline FrequencyTable build_frequency_table(const std::vector<SentenceRecord>& sentences,
                                            NormMode mode = NormMode::MaxNorm) {
  FrequencyTable table;
  table.mode = mode;
  for (const auto& s : sentences) {
    for (const auto& t : s.content_tokens) ++table.raw_counts[t];
  }
  if (table.raw_counts.empty()) return table;

  double denom = 0.0;
  if (mode == NormMode::MaxNorm) {
    for (const auto& [_, c] : table.raw_counts) denom = std::max(denom, static_cast<double>(c));
  } else {
    for (const auto& [_, c] : table.raw_counts) denom += static_cast<double>(c) * static_cast<double>(c);
    denom = std::sqrt(denom);
  }
  for (const auto& [token, c] : table.raw_counts) table.weights.emplace(token, static_cast<double>(c) / denom);
  return table;
}

/// Sums token weights over each sentence's content tokens (with
/// multiplicity). Sentences longer than `max_words` surface words are left
/// out of the result.
inline std::vector<ScoredSentence> score_sentences(const std::vector<SentenceRecord>& sentences,
                                                   const FrequencyTable& table, int max_words) {
  std::vector<ScoredSentence> scored;
  scored.reserve(sentences.size());
  for (const auto& s : sentences) {
    if (s.word_count > static_cast<std::size_t>(std::max(max_words, 0))) continue;
    double score = 0.0;
    for (const auto& t : s.content_tokens) score += table.weight(t);
    scored.push_back({s, score});
  }
  return scored;
}

/// Jaccard similarity of the two token sets; two empty sets count as 0.
inline double jaccard(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  const std::set<std::string_view> sa(a.begin(), a.end());
  const std::set<std::string_view> sb(b.begin(), b.end());
  if (sa.empty() && sb.empty()) return 0.0;
  std::size_t common = 0;
  for (const auto& t : sa) common += sb.count(t);
  return static_cast<double>(common) / static_cast<double>(sa.size() + sb.size() - common);
}

/// Greedy MMR: each round picks the candidate maximising
///   lambda * score - (1 - lambda) * max_{s in selected} jaccard(c, s),
/// ties going to the lower original index. The result is re-sorted by index.
inline ExtractiveSummary select_summary(const std::vector<ScoredSentence>& scored, const SelectionParams& p) {
  ExtractiveSummary summary;
  const std::size_t budget = static_cast<std::size_t>(std::max(p.budget_sentences, 0));
  std::vector<bool> taken(scored.size(), false);
  std::vector<double> max_similarity(scored.size(), 0.0);
  std::vector<std::size_t> picks;

  while (picks.size() < budget && picks.size() < scored.size()) {
    std::size_t best = scored.size();
    double best_value = 0.0;
    for (std::size_t i = 0; i < scored.size(); ++i) {
      if (taken[i]) continue;
      const double value = p.mmr_lambda * scored[i].score - (1.0 - p.mmr_lambda) * max_similarity[i];
      if (best == scored.size() || value > best_value ||
          (value == best_value && scored[i].record.index < scored[best].record.index)) {
        best = i;
        best_value = value;
      }
    }
    taken[best] = true;
    picks.push_back(best);
    for (std::size_t i = 0; i < scored.size(); ++i) {
      if (!taken[i]) {
        max_similarity[i] =
            std::max(max_similarity[i], jaccard(scored[i].record.content_tokens, scored[best].record.content_tokens));
      }
    }
  }

  std::sort(picks.begin(), picks.end(),
            [&](std::size_t a, std::size_t b) { return scored[a].record.index < scored[b].record.index; });
  for (auto i : picks) {
    summary.total_score += scored[i].score;
    summary.selected.push_back(scored[i]);
  }
  return summary;
}

}  // namespace cascadesum
