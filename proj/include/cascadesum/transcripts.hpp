#pragma once

// Time-aligned transcript model, caption parsers (SRT, WebVTT, plain text)
// and the canonical JSON interchange form.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "error.hpp"
#include "json_io.hpp"
#include "utf8.hpp"

namespace cascadesum {

struct TimedSegment {
  std::size_t index = 0;
  std::string text;
  std::optional<std::int64_t> start_ms;
  std::optional<std::int64_t> end_ms;

  bool operator==(const TimedSegment&) const = default;
};

struct Transcript {
  std::vector<TimedSegment> segments;
  std::string source_id;
  std::string language_tag = "en";

  /// Segment texts joined by single spaces.
  std::string full_text() const {
    std::string out;
    for (std::size_t i = 0; i < segments.size(); ++i) {
      if (i) out.push_back(' ');
      out += segments[i].text;
    }
    return out;
  }

  bool operator==(const Transcript&) const = default;
};

/// Stable-sorts by start time when every segment is timed, then renumbers
/// indices from zero.
inline void sort_and_reindex(Transcript& t) {
  const bool all_timed = std::all_of(t.segments.begin(), t.segments.end(),
                                     [](const TimedSegment& s) { return s.start_ms.has_value(); });
  if (all_timed) {
    std::stable_sort(t.segments.begin(), t.segments.end(),
                     [](const TimedSegment& a, const TimedSegment& b) { return *a.start_ms < *b.start_ms; });
  }
  for (std::size_t i = 0; i < t.segments.size(); ++i) t.segments[i].index = i;
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto ws = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v'; };
  while (!s.empty() && ws(s.front())) s.remove_prefix(1);
  while (!s.empty() && ws(s.back())) s.remove_suffix(1);
  return s;
}

inline std::string_view strip_bom(std::string_view s) {
  if (s.size() >= 3 && s.substr(0, 3) == "\xEF\xBB\xBF") s.remove_prefix(3);
  return s;
}

/// Splits on \n, \r\n or lone \r.
inline std::vector<std::string_view> split_lines(std::string_view s) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '\n' || s[i] == '\r') {
      lines.push_back(s.substr(start, i - start));
      if (s[i] == '\r' && i + 1 < s.size() && s[i + 1] == '\n') ++i;
      start = i + 1;
    }
  }
  if (start < s.size()) lines.push_back(s.substr(start));
  return lines;
}

/// Groups lines into blank-line separated blocks.
inline std::vector<std::vector<std::string_view>> split_blocks(const std::vector<std::string_view>& lines,
                                                               std::size_t first_line,
                                                               std::vector<std::size_t>& block_line_numbers) {
  std::vector<std::vector<std::string_view>> blocks;
  std::vector<std::string_view> current;
  std::size_t current_start = 0;
  for (std::size_t i = first_line; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) {
      if (!current.empty()) {
        blocks.push_back(std::move(current));
        block_line_numbers.push_back(current_start);
        current.clear();
      }
      continue;
    }
    if (current.empty()) current_start = i + 1;
    current.push_back(lines[i]);
  }
  if (!current.empty()) {
    blocks.push_back(std::move(current));
    block_line_numbers.push_back(current_start);
  }
  return blocks;
}

inline std::optional<std::int64_t> parse_digits(std::string_view s, std::size_t min_len, std::size_t max_len) {
  if (s.size() < min_len || s.size() > max_len) return std::nullopt;
  std::int64_t v = 0;
  for (char c : s) {
    if (c < '0' || c > '9') return std::nullopt;
    v = v * 10 + (c - '0');
  }
  return v;
}

/// Parses `[H+:]MM:SS(,|.)mmm`. Hours are mandatory unless `hours_optional`.
inline std::optional<std::int64_t> parse_timestamp(std::string_view s, bool hours_optional) {
  const auto frac = s.find_last_of(",.");
  if (frac == std::string_view::npos) return std::nullopt;
  const auto ms = parse_digits(s.substr(frac + 1), 3, 3);
  if (!ms) return std::nullopt;
  std::string_view clock = s.substr(0, frac);

  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= clock.size(); ++i) {
    if (i == clock.size() || clock[i] == ':') {
      parts.push_back(clock.substr(start, i - start));
      start = i + 1;
    }
  }
  std::optional<std::int64_t> hours = 0;
  if (parts.size() == 3) {
    hours = parse_digits(parts[0], 1, 6);
  } else if (!(parts.size() == 2 && hours_optional)) {
    return std::nullopt;
  }
  const auto minutes = parse_digits(parts[parts.size() - 2], 2, 2);
  const auto seconds = parse_digits(parts[parts.size() - 1], 2, 2);
  if (!hours || !minutes || !seconds || *minutes > 59 || *seconds > 59) return std::nullopt;
  return ((*hours * 60 + *minutes) * 60 + *seconds) * 1000 + *ms;
}

struct CueTiming {
  std::int64_t start_ms;
  std::int64_t end_ms;
};

/// Parses "start --> end[ settings]"; anything after the end timestamp is
/// ignored (WebVTT cue settings, SRT coordinates).
inline CueTiming parse_timing_line(std::string_view line, bool hours_optional, std::size_t line_no) {
  const auto arrow = line.find("-->");
  const auto fail = [&](const char* why) {
    return Error(Errc::MalformedCue, "line " + std::to_string(line_no) + ": " + why);
  };
  if (arrow == std::string_view::npos) throw fail("missing '-->'");
  const auto lhs = trim(line.substr(0, arrow));
  auto rhs = trim(line.substr(arrow + 3));
  const auto ws = rhs.find_first_of(" \t");
  if (ws != std::string_view::npos) rhs = rhs.substr(0, ws);
  const auto start = parse_timestamp(lhs, hours_optional);
  const auto end = parse_timestamp(rhs, hours_optional);
  if (!start || !end) throw fail("bad timestamp");
  if (*start > *end) throw fail("cue ends before it starts");
  return {*start, *end};
}

inline std::string join_cue_text(const std::vector<std::string_view>& lines, std::size_t first) {
  std::string text;
  for (std::size_t i = first; i < lines.size(); ++i) {
    const auto line = trim(lines[i]);
    if (line.empty()) continue;
    if (!text.empty()) text.push_back(' ');
    text.append(line);
  }
  return text;
}

/// Drops WebVTT inline tags (<b>, <c.class>, <00:00:01.000>) and decodes the
/// handful of character references WebVTT allows.
inline std::string strip_vtt_markup(std::string_view s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '<') {
      const auto close = s.find('>', i);
      if (close == std::string_view::npos) break;
      i = close;
      continue;
    }
    if (s[i] == '&') {
      static constexpr std::pair<std::string_view, std::string_view> kEntities[] = {
          {"&amp;", "&"}, {"&lt;", "<"}, {"&gt;", ">"}, {"&nbsp;", " "}, {"&lrm;", ""}, {"&rlm;", ""}};
      bool matched = false;
      for (const auto& [name, value] : kEntities) {
        if (s.substr(i, name.size()) == name) {
          out.append(value);
          i += name.size() - 1;
          matched = true;
          break;
        }
      }
      if (matched) continue;
    }
    out.push_back(s[i]);
  }
  return std::string(trim(out));
}

inline std::string_view checked_text(std::string_view data) {
  if (!utf8::is_valid(data)) throw Error(Errc::EncodingError, "input is not valid UTF-8");
  return strip_bom(data);
}

}  // namespace detail

/// SubRip captions. Cue numbers are ignored; cues are sorted by start time
/// and renumbered. Cues whose text is empty are dropped.
inline Transcript parse_srt(std::string_view data, std::string source_id = {}) {
  const auto text = detail::checked_text(data);
  const auto lines = detail::split_lines(text);
  std::vector<std::size_t> line_numbers;
  const auto blocks = detail::split_blocks(lines, 0, line_numbers);

  Transcript t;
  t.source_id = std::move(source_id);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const auto& block = blocks[b];
    std::size_t timing = 0;
    if (block[0].find("-->") == std::string_view::npos) {
      if (block.size() < 2 || block[1].find("-->") == std::string_view::npos) {
        throw Error(Errc::MalformedCue, "line " + std::to_string(line_numbers[b]) + ": cue has no timing line");
      }
      timing = 1;
    }
    const auto cue = detail::parse_timing_line(block[timing], false, line_numbers[b] + timing);
    auto body = detail::join_cue_text(block, timing + 1);
    if (body.empty()) continue;
    t.segments.push_back({0, std::move(body), cue.start_ms, cue.end_ms});
  }
  sort_and_reindex(t);
  return t;
}

/// WebVTT captions. NOTE, STYLE and REGION blocks are skipped, cue settings
/// and inline markup are discarded.
inline Transcript parse_vtt(std::string_view data, std::string source_id = {}) {
  const auto text = detail::checked_text(data);
  const auto lines = detail::split_lines(text);
  if (lines.empty() || lines[0].substr(0, 6) != "WEBVTT" ||
      (lines[0].size() > 6 && lines[0][6] != ' ' && lines[0][6] != '\t')) {
    throw Error(Errc::MissingHeader, "first line must start with WEBVTT");
  }
  // The header block runs to the first blank line.
  std::size_t first = 1;
  while (first < lines.size() && !detail::trim(lines[first]).empty()) ++first;

  std::vector<std::size_t> line_numbers;
  const auto blocks = detail::split_blocks(lines, first, line_numbers);

  const auto is_keyword_block = [](std::string_view head) {
    for (std::string_view kw : {"NOTE", "STYLE", "REGION"}) {
      if (head.substr(0, kw.size()) == kw &&
          (head.size() == kw.size() || head[kw.size()] == ' ' || head[kw.size()] == '\t')) {
        return true;
      }
    }
    return false;
  };

  Transcript t;
  t.source_id = std::move(source_id);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const auto& block = blocks[b];
    if (is_keyword_block(block[0])) continue;
    std::size_t timing = 0;
    if (block[0].find("-->") == std::string_view::npos) {
      if (block.size() < 2 || block[1].find("-->") == std::string_view::npos) {
        throw Error(Errc::MalformedCue, "line " + std::to_string(line_numbers[b]) + ": cue has no timing line");
      }
      timing = 1;
    }
    const auto cue = detail::parse_timing_line(block[timing], true, line_numbers[b] + timing);
    auto body = detail::strip_vtt_markup(detail::join_cue_text(block, timing + 1));
    if (body.empty()) continue;
    t.segments.push_back({0, std::move(body), cue.start_ms, cue.end_ms});
  }
  sort_and_reindex(t);
  return t;
}

/// Whole text as one untimed segment; blank input yields no segments.
inline Transcript parse_plain(std::string_view text, std::string source_id = {}) {
  Transcript t;
  t.source_id = std::move(source_id);
  const auto body = detail::trim(detail::strip_bom(text));
  if (!body.empty()) t.segments.push_back({0, std::string(body), std::nullopt, std::nullopt});
  return t;
}

inline Json to_json(const Transcript& t) {
  Json segments = Json::array();
  for (const auto& s : t.segments) {
    segments.push_back({{"index", s.index},
                        {"text", s.text},
                        {"start_ms", s.start_ms ? Json(*s.start_ms) : Json(nullptr)},
                        {"end_ms", s.end_ms ? Json(*s.end_ms) : Json(nullptr)}});
  }
  return {{"language_tag", t.language_tag}, {"segments", std::move(segments)}, {"source_id", t.source_id}};
}

inline std::string serialize_canonical(const Transcript& t) { return canonical_dump(to_json(t)); }

/// Inverse of to_json. Rejects unknown keys, wrong types and violated
/// segment invariants.
inline Transcript transcript_from_json(const Json& j) {
  const auto fail = [](const std::string& why) { return Error(Errc::InvalidTranscript, why); };
  if (!j.is_object()) throw fail("transcript must be an object");
  for (const auto& [key, _] : j.items()) {
    if (key != "language_tag" && key != "segments" && key != "source_id") throw fail("unknown key '" + key + "'");
  }
  if (!j.contains("segments") || !j["segments"].is_array()) throw fail("'segments' must be an array");
  if (!j.contains("source_id") || !j["source_id"].is_string()) throw fail("'source_id' must be a string");
  if (!j.contains("language_tag") || !j["language_tag"].is_string()) throw fail("'language_tag' must be a string");

  Transcript t;
  t.source_id = j["source_id"].get<std::string>();
  t.language_tag = j["language_tag"].get<std::string>();
  const auto read_ms = [&](const Json& seg, const char* key) -> std::optional<std::int64_t> {
    if (!seg.contains(key)) throw fail(std::string("segment missing '") + key + "'");
    const auto& v = seg[key];
    if (v.is_null()) return std::nullopt;
    if (!v.is_number_integer() || v.get<std::int64_t>() < 0) throw fail(std::string("'") + key + "' must be a non-negative integer");
    return v.get<std::int64_t>();
  };
  for (const auto& seg : j["segments"]) {
    if (!seg.is_object() || seg.size() != 4) throw fail("segment must have exactly end_ms, index, start_ms, text");
    if (!seg.contains("index") || !seg["index"].is_number_unsigned()) throw fail("'index' must be a non-negative integer");
    if (!seg.contains("text") || !seg["text"].is_string()) throw fail("'text' must be a string");
    TimedSegment s;
    s.index = seg["index"].get<std::size_t>();
    s.text = seg["text"].get<std::string>();
    s.start_ms = read_ms(seg, "start_ms");
    s.end_ms = read_ms(seg, "end_ms");
    if (s.index != t.segments.size()) throw fail("segment indices must be contiguous from 0");
    if (detail::trim(s.text).empty()) throw fail("segment text is empty");
    if (s.start_ms && s.end_ms && *s.start_ms > *s.end_ms) throw fail("segment ends before it starts");
    t.segments.push_back(std::move(s));
  }
  return t;
}

inline Transcript deserialize_canonical(std::string_view bytes) {
  Json j = Json::parse(bytes.begin(), bytes.end(), nullptr, false);
  if (j.is_discarded()) throw Error(Errc::InvalidTranscript, "not valid JSON");
  return transcript_from_json(j);
}

}  // namespace cascadesum
