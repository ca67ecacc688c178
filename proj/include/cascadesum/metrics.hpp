#pragma once

// ROUGE-N, ROUGE-L, sentence-level BLEU and corpus length statistics.

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "error.hpp"
#include "json_io.hpp"
#include "text_prep.hpp"

namespace cascadesum {

using Tokens = std::vector<std::string>;

struct PrfScores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;

  bool operator==(const PrfScores&) const = default;
};

struct EvalScores {
  PrfScores rouge1;
  PrfScores rouge2;
  PrfScores rougeL;
  double bleu = 0.0;

  bool operator==(const EvalScores&) const = default;
};

inline PrfScores make_prf(double precision, double recall) {
  const double f1 = precision + recall > 0.0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
  return {precision, recall, f1};
}

/// Longest common subsequence length, two-row DP over interned tokens.
inline std::size_t lcs_length(const Tokens& a, const Tokens& b) {
  if (a.empty() || b.empty()) return 0;
  std::unordered_map<std::string_view, int> ids;
  const auto intern = [&](const Tokens& xs) {
    std::vector<int> out;
    out.reserve(xs.size());
    for (const auto& x : xs) out.push_back(ids.emplace(x, static_cast<int>(ids.size())).first->second);
    return out;
  };
  const auto ia = intern(a);
  const auto ib = intern(b);

  std::vector<std::size_t> prev(ib.size() + 1, 0), cur(ib.size() + 1, 0);
  for (std::size_t i = 1; i <= ia.size(); ++i) {
    for (std::size_t j = 1; j <= ib.size(); ++j) {
      cur[j] = ia[i - 1] == ib[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[ib.size()];
}

namespace detail {

inline std::map<Tokens, std::size_t> ngram_counts(const Tokens& tokens, std::size_t n) {
  std::map<Tokens, std::size_t> counts;
  if (tokens.size() < n) return counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    ++counts[Tokens(tokens.begin() + static_cast<std::ptrdiff_t>(i), tokens.begin() + static_cast<std::ptrdiff_t>(i + n))];
  }
  return counts;
}

inline std::size_t clipped_overlap(const std::map<Tokens, std::size_t>& candidate,
                                   const std::map<Tokens, std::size_t>& reference) {
  std::size_t overlap = 0;
  for (const auto& [gram, count] : candidate) {
    const auto it = reference.find(gram);
    if (it != reference.end()) overlap += std::min(count, it->second);
  }
  return overlap;
}

}  // namespace detail

inline PrfScores rouge_n(const Tokens& candidate, const Tokens& reference, int n) {
  if (n < 1) throw Error(Errc::InvalidN, "n must be >= 1, got " + std::to_string(n));
  const auto un = static_cast<std::size_t>(n);
  if (candidate.size() < un || reference.size() < un) return {};
  const auto overlap = detail::clipped_overlap(detail::ngram_counts(candidate, un), detail::ngram_counts(reference, un));
  return make_prf(static_cast<double>(overlap) / static_cast<double>(candidate.size() - un + 1),
                  static_cast<double>(overlap) / static_cast<double>(reference.size() - un + 1));
}

/// ROUGE-L with beta = 1.
inline PrfScores rouge_l(const Tokens& candidate, const Tokens& reference) {
  if (candidate.empty() || reference.empty()) return {};
  const auto lcs = static_cast<double>(lcs_length(candidate, reference));
  return make_prf(lcs / static_cast<double>(candidate.size()), lcs / static_cast<double>(reference.size()));
}

struct BleuParams {
  int max_n = 4;
  double smoothing_epsilon = 1e-9;
};

/// Sentence-level BLEU: geometric mean of clipped modified n-gram
/// precisions times the brevity penalty exp(1 - r/c) (c < r), r being the
/// reference length closest to c (shorter wins ties).
///
/// A zero precision is replaced by the smoothing epsilon. Orders for which
/// the candidate has no n-grams at all (c < n) are left out of the mean.
inline double bleu(const Tokens& candidate, const std::vector<Tokens>& references, BleuParams p = {}) {
  if (references.empty()) throw Error(Errc::NoReferences, "BLEU needs at least one reference");
  if (p.max_n < 1) throw Error(Errc::InvalidN, "max_n must be >= 1, got " + std::to_string(p.max_n));
  if (candidate.empty()) return 0.0;

  const std::size_t c = candidate.size();
  const int orders = static_cast<int>(std::min<std::size_t>(c, static_cast<std::size_t>(p.max_n)));
  double log_sum = 0.0;
  for (int n = 1; n <= orders; ++n) {
    const auto un = static_cast<std::size_t>(n);
    const auto cand = detail::ngram_counts(candidate, un);
    std::map<Tokens, std::size_t> max_ref;
    for (const auto& ref : references) {
      for (const auto& [gram, count] : detail::ngram_counts(ref, un)) {
        auto& slot = max_ref[gram];
        slot = std::max(slot, count);
      }
    }
    const double precision =
        static_cast<double>(detail::clipped_overlap(cand, max_ref)) / static_cast<double>(c - un + 1);
    log_sum += std::log(precision > 0.0 ? precision : p.smoothing_epsilon);
  }
  const double geo_mean = std::exp(log_sum / orders);

  std::size_t closest = references.front().size();
  for (const auto& ref : references) {
    const auto d = [&](std::size_t r) { return r > c ? r - c : c - r; };
    if (d(ref.size()) < d(closest) || (d(ref.size()) == d(closest) && ref.size() < closest)) closest = ref.size();
  }
  const double bp = c < closest ? std::exp(1.0 - static_cast<double>(closest) / static_cast<double>(c)) : 1.0;
  return std::clamp(bp * geo_mean, 0.0, 1.0);
}

/// ROUGE-1/2/L and BLEU-4 over tokenize()d text, stopwords kept.
inline EvalScores score_pair(std::string_view candidate, std::string_view reference) {
  const auto cand = tokenize(candidate);
  const auto ref = tokenize(reference);
  EvalScores s;
  s.rouge1 = rouge_n(cand, ref, 1);
  s.rouge2 = rouge_n(cand, ref, 2);
  s.rougeL = rouge_l(cand, ref);
  s.bleu = bleu(cand, {ref});
  return s;
}

struct LengthSummary {
  std::size_t min = 0;
  std::size_t max = 0;
  double mean = 0.0;
  std::size_t median = 0;  // lower-middle element for even counts
  std::size_t q1 = 0;      // element floor((n-1)/4) of the sorted lengths

  bool operator==(const LengthSummary&) const = default;
};

struct CorpusStats {
  std::size_t doc_count = 0;
  LengthSummary article_len;
  LengthSummary summary_len;
  std::size_t article_vocab = 0;
  std::size_t summary_vocab = 0;
  double len_correlation = 0.0;
};

struct CorpusPair {
  std::string article;
  std::string summary;
};

inline LengthSummary summarize_lengths(std::vector<std::size_t> lengths) {
  LengthSummary s;
  if (lengths.empty()) return s;
  std::sort(lengths.begin(), lengths.end());
  const std::size_t n = lengths.size();
  s.min = lengths.front();
  s.max = lengths.back();
  s.mean = static_cast<double>(std::accumulate(lengths.begin(), lengths.end(), std::size_t{0})) / static_cast<double>(n);
  s.median = lengths[(n - 1) / 2];
  s.q1 = lengths[(n - 1) / 4];
  return s;
}

/// Pearson correlation; 0 when either side has zero variance.
inline double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n == 0) return 0.0;
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

inline CorpusStats corpus_stats(const std::vector<CorpusPair>& pairs) {
  if (pairs.empty()) throw Error(Errc::EmptyCorpus, "corpus has no article/summary pairs");
  CorpusStats stats;
  stats.doc_count = pairs.size();
  std::vector<std::size_t> article_lens, summary_lens;
  std::set<std::string> article_vocab, summary_vocab;
  for (const auto& pair : pairs) {
    auto a = tokenize(pair.article);
    auto s = tokenize(pair.summary);
    article_lens.push_back(a.size());
    summary_lens.push_back(s.size());
    article_vocab.insert(std::make_move_iterator(a.begin()), std::make_move_iterator(a.end()));
    summary_vocab.insert(std::make_move_iterator(s.begin()), std::make_move_iterator(s.end()));
  }
  stats.article_vocab = article_vocab.size();
  stats.summary_vocab = summary_vocab.size();
  stats.len_correlation = pearson(std::vector<double>(article_lens.begin(), article_lens.end()),
                                  std::vector<double>(summary_lens.begin(), summary_lens.end()));
  stats.article_len = summarize_lengths(std::move(article_lens));
  stats.summary_len = summarize_lengths(std::move(summary_lens));
  return stats;
}

inline Json to_json(const PrfScores& s) {
  return {{"precision", s.precision}, {"recall", s.recall}, {"f1", s.f1}};
}

inline Json to_json(const EvalScores& s) {
  return {{"rouge1", to_json(s.rouge1)}, {"rouge2", to_json(s.rouge2)}, {"rougeL", to_json(s.rougeL)}, {"bleu", s.bleu}};
}

inline Json to_json(const LengthSummary& s) {
  return {{"min", s.min}, {"max", s.max}, {"mean", s.mean}, {"median", s.median}, {"q1", s.q1}};
}

inline Json to_json(const CorpusStats& s) {
  return {{"doc_count", s.doc_count},
          {"article_len", to_json(s.article_len)},
          {"summary_len", to_json(s.summary_len)},
          {"article_vocab", s.article_vocab},
          {"summary_vocab", s.summary_vocab},
          {"len_correlation", s.len_correlation}};
}

}  // namespace cascadesum
