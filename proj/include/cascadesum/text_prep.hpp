#pragma once

// Text preprocessing: display cleaning (bracketed annotations, whitespace),
// analysis cleaning (alphabetic-only, lowercase), rule-based sentence
// segmentation, tokenization and stopword filtering.

#include <array>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "error.hpp"
#include "utf8.hpp"

namespace cascadesum {

namespace resources {

// Mirrors data/stopwords_en.txt (179 entries).
inline constexpr std::array<std::string_view, 179> kStopwordsEn = {
    "i", "me", "my", "myself", "we", "our", "ours", "ourselves", "you", "you're", "you've",
    "you'll", "you'd", "your", "yours", "yourself", "yourselves", "he", "him", "his", "himself",
    "she", "she's", "her", "hers", "herself", "it", "it's", "its", "itself", "they", "them",
    "their", "theirs", "themselves", "what", "which", "who", "whom", "this", "that", "that'll",
    "these", "those", "am", "is", "are", "was", "were", "be", "been", "being", "have", "has", "had",
    "having", "do", "does", "did", "doing", "a", "an", "the", "and", "but", "if", "or", "because",
    "as", "until", "while", "of", "at", "by", "for", "with", "about", "against", "between", "into",
    "through", "during", "before", "after", "above", "below", "to", "from", "up", "down", "in",
    "out", "on", "off", "over", "under", "again", "further", "then", "once", "here", "there",
    "when", "where", "why", "how", "all", "any", "both", "each", "few", "more", "most", "other",
    "some", "such", "no", "nor", "not", "only", "own", "same", "so", "than", "too", "very", "s",
    "t", "can", "will", "just", "don", "don't", "should", "should've", "now", "d", "ll", "m", "o",
    "re", "ve", "y", "ain", "aren", "aren't", "couldn", "couldn't", "didn", "didn't", "doesn",
    "doesn't", "hadn", "hadn't", "hasn", "hasn't", "haven", "haven't", "isn", "isn't", "ma",
    "mightn", "mightn't", "mustn", "mustn't", "needn", "needn't", "shan", "shan't", "shouldn",
    "shouldn't", "wasn", "wasn't", "weren", "weren't", "won", "won't", "wouldn", "wouldn't",
};

// Mirrors data/abbreviations_en.txt.
inline constexpr std::array<std::string_view, 10> kAbbreviationsEn = {
    "dr", "mr", "mrs", "ms", "prof", "st", "vs", "etc", "e.g", "i.e",
};

}  // namespace resources

/// A set of lowercase entries, one per line in its file form. The tag keeps
/// stopword and abbreviation lists from being mixed up.
template <class Tag>
class WordList {
 public:
  WordList() = default;

  template <class Range>
  explicit WordList(const Range& words) {
    for (const auto& w : words) words_.emplace(w);
  }

  /// One entry per line; blank lines and lines starting with '#' are skipped.
  static WordList from_text(std::string_view text) {
    WordList list;
    std::size_t start = 0;
    while (start <= text.size()) {
      auto end = text.find('\n', start);
      if (end == std::string_view::npos) end = text.size();
      std::string_view line = text.substr(start, end - start);
      while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t')) line.remove_suffix(1);
      while (!line.empty() && (line.front() == ' ' || line.front() == '\t')) line.remove_prefix(1);
      if (!line.empty() && line.front() != '#') list.words_.emplace(line);
      start = end + 1;
    }
    return list;
  }

  static WordList load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::InputNotFound, "cannot open word list '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    auto list = from_text(ss.str());
    if (list.empty()) throw Error(Errc::InputNotFound, "word list '" + path + "' is empty");
    return list;
  }

  bool contains(std::string_view w) const { return words_.count(std::string(w)) != 0; }
  std::size_t size() const { return words_.size(); }
  bool empty() const { return words_.empty(); }
  const std::unordered_set<std::string>& words() const { return words_; }

 private:
  std::unordered_set<std::string> words_;
};

struct StopwordTag {};
struct AbbreviationTag {};
using StopwordList = WordList<StopwordTag>;
using AbbreviationList = WordList<AbbreviationTag>;

inline const StopwordList& default_stopwords() {
  static const StopwordList list(resources::kStopwordsEn);
  return list;
}

inline const AbbreviationList& default_abbreviations() {
  static const AbbreviationList list(resources::kAbbreviationsEn);
  return list;
}

namespace detail {

inline std::string collapse_whitespace(std::u32string_view cps) {
  std::string out;
  out.reserve(cps.size());
  bool pending_space = false;
  for (char32_t c : cps) {
    if (utf8::is_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    utf8::append(out, c);
  }
  return out;
}

}  // namespace detail

/// Removes `[...]` spans (shortest match, no nesting), collapses whitespace
/// runs to one space and trims.
inline std::string clean_for_display(std::string_view raw) {
  const std::u32string cps = utf8::decode(raw);
  std::u32string kept;
  kept.reserve(cps.size());
  for (std::size_t i = 0; i < cps.size(); ++i) {
    if (cps[i] == U'[') {
      const auto close = cps.find(U']', i + 1);
      if (close != std::u32string::npos) {
        i = close;
        continue;
      }
    }
    kept.push_back(cps[i]);
  }
  return detail::collapse_whitespace(kept);
}

/// Replaces every non-alphabetic character with a space, lowercases,
/// collapses whitespace and trims.
inline std::string clean_for_analysis(std::string_view raw) {
  std::u32string cps = utf8::decode(raw);
  for (auto& c : cps) c = utf8::is_alpha(c) ? utf8::to_lower(c) : U' ';
  return detail::collapse_whitespace(cps);
}

struct SentenceSpan {
  std::size_t begin;  // byte offsets into the segmented text, half-open
  std::size_t end;
};

/// Byte spans of the sentences in already display-cleaned text.
///
/// A sentence ends after '.', '!' or '?' when followed by whitespace and then
/// an uppercase letter or the end of the text. A '.' closing a listed
/// abbreviation never ends a sentence.
inline std::vector<SentenceSpan> segment_sentence_spans(std::string_view text,
                                                        const AbbreviationList& abbreviations = default_abbreviations()) {
  std::vector<SentenceSpan> spans;
  const auto is_ws = [](char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; };
  const auto push = [&](std::size_t b, std::size_t e) {
    while (b < e && is_ws(text[b])) ++b;
    while (e > b && is_ws(text[e - 1])) --e;
    if (b < e) spans.push_back({b, e});
  };

  std::size_t start = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c != '.' && c != '!' && c != '?') continue;
    if (i + 1 < text.size() && !is_ws(text[i + 1])) continue;

    std::size_t next = i + 1;
    while (next < text.size() && is_ws(text[next])) ++next;
    if (next < text.size()) {
      std::size_t probe = next;
      if (!utf8::is_upper(utf8::next(text, probe))) continue;
    }
    if (c == '.') {
      std::size_t word_begin = i;
      while (word_begin > start && !is_ws(text[word_begin - 1])) --word_begin;
      std::string word;
      for (std::size_t k = word_begin; k < i; ++k) {
        const char w = text[k];
        if (word.empty() && (w == '(' || w == '"' || w == '\'')) continue;
        word.push_back((w >= 'A' && w <= 'Z') ? static_cast<char>(w + 32) : w);
      }
      if (abbreviations.contains(word)) continue;
    }
    push(start, i + 1);
    start = i + 1;
  }
  push(start, text.size());
  return spans;
}

inline std::vector<std::string> segment_sentences(std::string_view cleaned_display,
                                                  const AbbreviationList& abbreviations = default_abbreviations()) {
  std::vector<std::string> out;
  for (const auto& s : segment_sentence_spans(cleaned_display, abbreviations)) {
    out.emplace_back(cleaned_display.substr(s.begin, s.end - s.begin));
  }
  return out;
}

inline std::vector<std::string> tokenize(std::string_view sentence) {
  std::vector<std::string> tokens;
  const std::string cleaned = clean_for_analysis(sentence);
  std::size_t start = 0;
  while (start < cleaned.size()) {
    auto end = cleaned.find(' ', start);
    if (end == std::string::npos) end = cleaned.size();
    tokens.push_back(cleaned.substr(start, end - start));
    start = end + 1;
  }
  return tokens;
}

inline std::vector<std::string> remove_stopwords(const std::vector<std::string>& tokens, const StopwordList& sw) {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) {
    if (!sw.contains(t)) out.push_back(t);
  }
  return out;
}

struct SentenceRecord {
  std::size_t index = 0;
  std::string display_text;
  std::vector<std::string> tokens;
  std::vector<std::string> content_tokens;
  std::size_t word_count = 0;

  bool operator==(const SentenceRecord&) const = default;
};

inline std::size_t count_words(std::string_view s) {
  std::size_t words = 0;
  bool in_word = false;
  std::size_t pos = 0;
  while (pos < s.size()) {
    const bool space = utf8::is_space(utf8::next(s, pos));
    if (!space && !in_word) ++words;
    in_word = !space;
  }
  return words;
}

inline SentenceRecord make_sentence_record(std::size_t index, std::string display_text, const StopwordList& sw) {
  SentenceRecord r;
  r.index = index;
  r.tokens = tokenize(display_text);
  r.content_tokens = remove_stopwords(r.tokens, sw);
  r.word_count = count_words(display_text);
  r.display_text = std::move(display_text);
  return r;
}

/// Segments display-cleaned text and builds one record per sentence.
inline std::vector<SentenceRecord> analyze_document(std::string_view cleaned_display,
                                                    const StopwordList& sw = default_stopwords(),
                                                    const AbbreviationList& abbreviations = default_abbreviations()) {
  std::vector<SentenceRecord> records;
  auto sentences = segment_sentences(cleaned_display, abbreviations);
  records.reserve(sentences.size());
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    records.push_back(make_sentence_record(i, std::move(sentences[i]), sw));
  }
  return records;
}

}  // namespace cascadesum
