#pragma once

// Brute-force reference implementations. Deliberately naive and independent
// of the library code paths they check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace cascadesum::oracle {

using Tokens = std::vector<std::string>;

inline bool is_subsequence(const Tokens& sub, const Tokens& seq) {
  std::size_t j = 0;
  for (std::size_t i = 0; i < seq.size() && j < sub.size(); ++i) {
    if (seq[i] == sub[j]) ++j;
  }
  return j == sub.size();
}

/// Enumerates every subsequence of `a` (2^|a| masks) and keeps the longest
/// one that is also a subsequence of `b`.
inline std::size_t lcs_brute(const Tokens& a, const Tokens& b) {
  std::size_t best = 0;
  const std::uint32_t masks = 1u << a.size();
  Tokens sub;
  sub.reserve(a.size());
  for (std::uint32_t m = 0; m < masks; ++m) {
    const auto bits = static_cast<std::size_t>(__builtin_popcount(m));
    if (bits <= best) continue;
    sub.clear();
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (m & (1u << i)) sub.push_back(a[i]);
    }
    if (is_subsequence(sub, b)) best = bits;
  }
  return best;
}

struct Prf {
  double p, r, f;
};

inline Prf prf_from_lcs(std::size_t lcs, std::size_t c_len, std::size_t r_len) {
  if (c_len == 0 || r_len == 0) return {0, 0, 0};
  const double l = static_cast<double>(lcs);
  const double p = l / static_cast<double>(c_len);
  const double r = l / static_cast<double>(r_len);
  return {p, r, p + r > 0 ? 2 * p * r / (p + r) : 0.0};
}

inline Prf rouge_l_brute(const Tokens& c, const Tokens& r) { return prf_from_lcs(lcs_brute(c, r), c.size(), r.size()); }

/// Clipped n-gram overlap by explicit matching: each candidate n-gram
/// consumes one unused identical reference n-gram.
inline std::size_t clipped_matches(const Tokens& c, const Tokens& r, std::size_t n) {
  if (c.size() < n || r.size() < n) return 0;
  std::vector<bool> used(r.size() - n + 1, false);
  std::size_t matches = 0;
  for (std::size_t i = 0; i + n <= c.size(); ++i) {
    for (std::size_t j = 0; j + n <= r.size(); ++j) {
      if (used[j]) continue;
      if (std::equal(c.begin() + static_cast<std::ptrdiff_t>(i), c.begin() + static_cast<std::ptrdiff_t>(i + n),
                     r.begin() + static_cast<std::ptrdiff_t>(j))) {
        used[j] = true;
        ++matches;
        break;
      }
    }
  }
  return matches;
}

/// Top-k indices by score (descending), ties to the lower index, returned in
/// ascending index order. Full sort of all candidates.
inline std::vector<std::size_t> top_k(const std::vector<double>& scores, std::size_t k) {
  std::vector<std::size_t> idx(scores.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return a < b;
  });
  idx.resize(std::min(k, idx.size()));
  std::sort(idx.begin(), idx.end());
  return idx;
}

}  // namespace cascadesum::oracle
