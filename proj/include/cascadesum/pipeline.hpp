#pragma once

// Config-driven cascade: ingest -> (chunk -> transcribe) -> clean -> segment
// -> tokenize -> frequency table -> score -> select -> (fuse) -> (evaluate)
// -> report.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "error.hpp"
#include "extractive.hpp"
#include "gateway.hpp"
#include "http_transport.hpp"
#include "json_io.hpp"
#include "media.hpp"
#include "metrics.hpp"
#include "text_prep.hpp"
#include "transcripts.hpp"
#include "version.hpp"

namespace cascadesum {

enum class InputKind { Wav, Srt, Vtt, Plain };

inline const char* to_string(InputKind k) {
  switch (k) {
    case InputKind::Wav: return "wav";
    case InputKind::Srt: return "srt";
    case InputKind::Vtt: return "vtt";
    case InputKind::Plain: return "plain";
  }
  return "plain";
}

inline std::optional<InputKind> parse_input_kind(std::string_view s) {
  if (s == "wav") return InputKind::Wav;
  if (s == "srt") return InputKind::Srt;
  if (s == "vtt") return InputKind::Vtt;
  if (s == "plain") return InputKind::Plain;
  return std::nullopt;
}

struct PipelineConfig {
  struct Input {
    InputKind kind = InputKind::Plain;
    std::string path;
  } input;
  ChunkParams chunking;
  std::optional<SttConfig> stt;
  SelectionParams extraction;
  NormMode norm_mode = NormMode::MaxNorm;
  AbstractiveConfig abstractive;
  std::optional<std::string> reference_path;
  std::optional<std::string> stopwords_path;
  std::optional<std::string> abbreviations_path;
  std::string output_path;
};

namespace config_detail {

class Reader {
 public:
  Reader(const Json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) throw ConfigError(path_, "must be an object");
  }

  void allow_only(std::initializer_list<std::string_view> keys) const {
    for (const auto& [key, _] : obj_.items()) {
      if (std::find(keys.begin(), keys.end(), key) == keys.end()) throw ConfigError(sub(key), "unknown key");
    }
  }

  bool has(const char* key) const { return obj_.contains(key) && !obj_[key].is_null(); }
  const Json& at(const char* key) const { return obj_[key]; }
  std::string sub(std::string_view key) const { return path_.empty() ? std::string(key) : path_ + "." + std::string(key); }

  std::string string(const char* key, std::optional<std::string> fallback = std::nullopt, bool non_empty = true) const {
    if (!has(key)) {
      if (fallback) return *fallback;
      throw ConfigError(sub(key), "required");
    }
    if (!obj_[key].is_string()) throw ConfigError(sub(key), "must be a string");
    auto s = obj_[key].get<std::string>();
    if (non_empty && s.empty()) throw ConfigError(sub(key), "must not be empty");
    return s;
  }

  int integer(const char* key, int fallback, int min_value) const {
    if (!has(key)) return fallback;
    const auto& v = obj_[key];
    if (!v.is_number_integer()) throw ConfigError(sub(key), "must be an integer");
    const auto value = v.get<std::int64_t>();
    if (value < min_value || value > std::numeric_limits<int>::max()) {
      throw ConfigError(sub(key), "must be >= " + std::to_string(min_value));
    }
    return static_cast<int>(value);
  }

  double real(const char* key, double fallback) const {
    if (!has(key)) return fallback;
    if (!obj_[key].is_number()) throw ConfigError(sub(key), "must be a number");
    return obj_[key].get<double>();
  }

  bool boolean(const char* key, bool fallback) const {
    if (!has(key)) return fallback;
    if (!obj_[key].is_boolean()) throw ConfigError(sub(key), "must be a boolean");
    return obj_[key].get<bool>();
  }

 private:
  const Json& obj_;
  std::string path_;
};

}  // namespace config_detail

/// Parses a JSON config, fills documented defaults and rejects unknown keys.
/// Errors name the offending key path.
inline PipelineConfig config_from_json(const Json& j) {
  using config_detail::Reader;
  const Reader root(j, "");
  root.allow_only({"input", "chunking", "stt", "extraction", "abstractive", "evaluation", "text", "output_path"});
  PipelineConfig cfg;

  if (!root.has("input")) throw ConfigError("input", "required");
  {
    const Reader in(root.at("input"), "input");
    in.allow_only({"kind", "path"});
    const auto kind = parse_input_kind(in.string("kind"));
    if (!kind) throw ConfigError("input.kind", "must be one of wav, srt, vtt, plain");
    cfg.input.kind = *kind;
    cfg.input.path = in.string("path");
  }

  if (root.has("chunking")) {
    const Reader c(root.at("chunking"), "chunking");
    c.allow_only({"silence_threshold_dbfs", "min_silence_ms", "min_chunk_ms", "pad_ms", "frame_ms"});
    cfg.chunking.silence_threshold_dbfs = c.real("silence_threshold_dbfs", cfg.chunking.silence_threshold_dbfs);
    if (cfg.chunking.silence_threshold_dbfs > 0.0) throw ConfigError("chunking.silence_threshold_dbfs", "must be <= 0");
    cfg.chunking.min_silence_ms = c.integer("min_silence_ms", cfg.chunking.min_silence_ms, 1);
    cfg.chunking.min_chunk_ms = c.integer("min_chunk_ms", cfg.chunking.min_chunk_ms, 1);
    cfg.chunking.pad_ms = c.integer("pad_ms", cfg.chunking.pad_ms, 0);
    cfg.chunking.frame_ms = c.integer("frame_ms", cfg.chunking.frame_ms, 1);
  }

  if (root.has("stt")) {
    const Reader s(root.at("stt"), "stt");
    s.allow_only({"endpoint_url", "language_tag", "max_retries", "backoff_base_ms", "parallelism"});
    SttConfig stt;
    stt.endpoint_url = s.string("endpoint_url");
    stt.language_tag = s.string("language_tag", stt.language_tag);
    stt.max_retries = s.integer("max_retries", stt.max_retries, 0);
    stt.backoff_base_ms = s.integer("backoff_base_ms", stt.backoff_base_ms, 0);
    stt.parallelism = s.integer("parallelism", stt.parallelism, 1);
    cfg.stt = stt;
  }
  if (cfg.input.kind == InputKind::Wav && !cfg.stt) throw ConfigError("stt", "required when input.kind is wav");

  if (root.has("extraction")) {
    const Reader e(root.at("extraction"), "extraction");
    e.allow_only({"max_sentence_words", "budget_sentences", "mmr_lambda", "norm_mode"});
    cfg.extraction.max_sentence_words = e.integer("max_sentence_words", cfg.extraction.max_sentence_words, 1);
    cfg.extraction.budget_sentences = e.integer("budget_sentences", cfg.extraction.budget_sentences, 1);
    cfg.extraction.mmr_lambda = e.real("mmr_lambda", cfg.extraction.mmr_lambda);
    if (!(cfg.extraction.mmr_lambda >= 0.0 && cfg.extraction.mmr_lambda <= 1.0)) {
      throw ConfigError("extraction.mmr_lambda", "must be in [0, 1]");
    }
    const auto mode = e.string("norm_mode", std::string("MaxNorm"));
    if (mode == "MaxNorm") {
      cfg.norm_mode = NormMode::MaxNorm;
    } else if (mode == "L2Norm") {
      cfg.norm_mode = NormMode::L2Norm;
    } else {
      throw ConfigError("extraction.norm_mode", "must be MaxNorm or L2Norm");
    }
  }

  if (root.has("abstractive")) {
    const Reader a(root.at("abstractive"), "abstractive");
    a.allow_only({"endpoint_url", "max_summary_tokens", "enabled"});
    cfg.abstractive.enabled = a.boolean("enabled", true);
    cfg.abstractive.endpoint_url = a.string("endpoint_url", cfg.abstractive.enabled ? std::nullopt : std::optional<std::string>(""), cfg.abstractive.enabled);
    cfg.abstractive.max_summary_tokens = a.integer("max_summary_tokens", cfg.abstractive.max_summary_tokens, 5);
  }

  if (root.has("evaluation")) {
    const Reader ev(root.at("evaluation"), "evaluation");
    ev.allow_only({"reference_path"});
    cfg.reference_path = ev.string("reference_path");
  }

  if (root.has("text")) {
    const Reader t(root.at("text"), "text");
    t.allow_only({"stopwords_path", "abbreviations_path"});
    if (t.has("stopwords_path")) cfg.stopwords_path = t.string("stopwords_path");
    if (t.has("abbreviations_path")) cfg.abbreviations_path = t.string("abbreviations_path");
  }

  cfg.output_path = root.string("output_path");
  return cfg;
}

inline PipelineConfig validate_config(std::string_view raw) {
  Json j = Json::parse(raw.begin(), raw.end(), nullptr, false);
  if (j.is_discarded()) throw ConfigError("", "not valid JSON");
  return config_from_json(j);
}

/// Fully resolved config, defaults included.
inline Json to_json(const PipelineConfig& c) {
  const auto opt = [](const std::optional<std::string>& s) { return s ? Json(*s) : Json(nullptr); };
  Json stt = nullptr;
  if (c.stt) {
    stt = {{"endpoint_url", c.stt->endpoint_url},
           {"language_tag", c.stt->language_tag},
           {"max_retries", c.stt->max_retries},
           {"backoff_base_ms", c.stt->backoff_base_ms},
           {"parallelism", c.stt->parallelism}};
  }
  return {
      {"input", {{"kind", to_string(c.input.kind)}, {"path", c.input.path}}},
      {"chunking",
       {{"silence_threshold_dbfs", c.chunking.silence_threshold_dbfs},
        {"min_silence_ms", c.chunking.min_silence_ms},
        {"min_chunk_ms", c.chunking.min_chunk_ms},
        {"pad_ms", c.chunking.pad_ms},
        {"frame_ms", c.chunking.frame_ms}}},
      {"stt", stt},
      {"extraction",
       {{"max_sentence_words", c.extraction.max_sentence_words},
        {"budget_sentences", c.extraction.budget_sentences},
        {"mmr_lambda", c.extraction.mmr_lambda},
        {"norm_mode", to_string(c.norm_mode)}}},
      {"abstractive",
       {{"endpoint_url", c.abstractive.endpoint_url},
        {"max_summary_tokens", c.abstractive.max_summary_tokens},
        {"enabled", c.abstractive.enabled}}},
      {"evaluation", c.reference_path ? Json{{"reference_path", *c.reference_path}} : Json(nullptr)},
      {"text", {{"stopwords_path", opt(c.stopwords_path)}, {"abbreviations_path", opt(c.abbreviations_path)}}},
      {"output_path", c.output_path},
  };
}

struct ExtractiveEntry {
  std::size_t index = 0;
  std::string text;
  double score = 0.0;
  std::optional<std::int64_t> start_ms;
  std::optional<std::int64_t> end_ms;
};

struct Report {
  std::string tool_version = kToolVersion;
  Json config_echo;
  Transcript transcript;
  std::size_t sentence_count = 0;
  std::vector<ExtractiveEntry> extractive;
  std::optional<std::string> abstractive_summary;
  std::optional<EvalScores> metrics;
  std::map<std::string, double> timings_ms;
};

inline Json to_json(const Report& r) {
  Json extractive = Json::array();
  for (const auto& e : r.extractive) {
    extractive.push_back({{"index", e.index},
                          {"text", e.text},
                          {"score", e.score},
                          {"start_ms", e.start_ms ? Json(*e.start_ms) : Json(nullptr)},
                          {"end_ms", e.end_ms ? Json(*e.end_ms) : Json(nullptr)}});
  }
  return {{"tool_version", r.tool_version},
          {"config_echo", r.config_echo},
          {"transcript", to_json(r.transcript)},
          {"sentence_count", r.sentence_count},
          {"extractive", std::move(extractive)},
          {"abstractive_summary", r.abstractive_summary ? Json(*r.abstractive_summary) : Json(nullptr)},
          {"metrics", r.metrics ? to_json(*r.metrics) : Json(nullptr)},
          {"timings_ms", r.timings_ms}};
}

/// Replaces the non-deterministic part of a serialized report.
inline Json mask_timings(Json report) {
  if (report.is_object() && report.contains("timings_ms")) report["timings_ms"] = Json::object();
  return report;
}

/// Display-cleaned document assembled from transcript segments, with each
/// sentence mapped back to the time span of the segments it overlaps.
struct AnalyzedDocument {
  std::string display_text;
  std::vector<SentenceRecord> sentences;
  std::vector<std::optional<std::pair<std::int64_t, std::int64_t>>> sentence_times;
};

inline AnalyzedDocument analyze_transcript(const Transcript& t, const StopwordList& sw = default_stopwords(),
                                           const AbbreviationList& abbreviations = default_abbreviations()) {
  AnalyzedDocument doc;
  struct Piece {
    std::size_t begin, end;
    const TimedSegment* segment;
  };
  std::vector<Piece> pieces;
  for (const auto& seg : t.segments) {
    const auto cleaned = clean_for_display(seg.text);
    if (cleaned.empty()) continue;
    if (!doc.display_text.empty()) doc.display_text.push_back(' ');
    pieces.push_back({doc.display_text.size(), doc.display_text.size() + cleaned.size(), &seg});
    doc.display_text += cleaned;
  }

  const auto spans = segment_sentence_spans(doc.display_text, abbreviations);
  std::size_t first_piece = 0;
  for (std::size_t i = 0; i < spans.size(); ++i) {
    const auto [b, e] = spans[i];
    doc.sentences.push_back(make_sentence_record(i, doc.display_text.substr(b, e - b), sw));

    while (first_piece < pieces.size() && pieces[first_piece].end <= b) ++first_piece;
    std::optional<std::int64_t> start, end;
    bool timed = true;
    for (std::size_t p = first_piece; p < pieces.size() && pieces[p].begin < e; ++p) {
      const auto* seg = pieces[p].segment;
      if (!seg->start_ms || !seg->end_ms) {
        timed = false;
        break;
      }
      if (!start) start = seg->start_ms;
      end = end ? std::max(*end, *seg->end_ms) : *seg->end_ms;
    }
    doc.sentence_times.push_back(timed && start && end ? std::optional(std::pair(*start, *end)) : std::nullopt);
  }
  return doc;
}

struct PipelineContext {
  std::shared_ptr<const HttpTransport> transport;  // defaults to plain HTTP
  std::optional<std::string> bearer_token;
  Sleeper sleeper = real_sleep;
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::InputNotFound, "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void require_file(const std::string& path) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) throw Error(Errc::InputNotFound, "no such file '" + path + "'");
}

namespace pipeline_detail {

class StageTimer {
 public:
  explicit StageTimer(std::map<std::string, double>& sink) : sink_(sink) {}

  template <class Fn>
  auto operator()(const std::string& stage, Fn&& fn) -> decltype(fn()) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto record = [&] {
      sink_[stage] = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    };
    try {
      if constexpr (std::is_void_v<decltype(fn())>) {
        fn();
        record();
      } else {
        auto result = fn();
        record();
        return result;
      }
    } catch (const StageError&) {
      throw;
    } catch (const Error& e) {
      if (e.code() == Errc::InputNotFound) throw;
      throw StageError(stage, e.code(), e.detail());
    } catch (const std::exception& e) {
      throw StageError(stage, Errc::PreconditionViolation, e.what());
    }
  }

 private:
  std::map<std::string, double>& sink_;
};

}  // namespace pipeline_detail

/// Runs the whole cascade and writes the report to cfg.output_path ("-" for
/// stdout). Every report field except timings_ms is deterministic.
inline Report run_pipeline(const PipelineConfig& cfg, const PipelineContext& ctx = {}) {
  require_file(cfg.input.path);
  if (cfg.reference_path) require_file(*cfg.reference_path);

  Report report;
  report.config_echo = to_json(cfg);
  pipeline_detail::StageTimer stage(report.timings_ms);

  const auto transport = ctx.transport ? ctx.transport : make_http_transport();
  const InferenceClient client(transport, ctx.bearer_token, ctx.sleeper);

  const auto [stopwords, abbreviations] = stage("resources", [&] {
    return std::pair(cfg.stopwords_path ? StopwordList::load(*cfg.stopwords_path) : default_stopwords(),
                     cfg.abbreviations_path ? AbbreviationList::load(*cfg.abbreviations_path) : default_abbreviations());
  });

  const std::string raw = stage("ingest", [&] { return read_file(cfg.input.path); });
  if (cfg.input.kind == InputKind::Wav) {
    const auto buffer = stage("decode", [&] { return decode_wav(raw); });
    const auto chunks = stage("chunk", [&] { return split_on_silence(buffer, cfg.chunking); });
    report.transcript = stage("transcribe", [&] { return client.transcribe_chunks(chunks, *cfg.stt).transcript; });
  } else {
    report.transcript = stage("parse", [&] {
      switch (cfg.input.kind) {
        case InputKind::Srt: return parse_srt(raw);
        case InputKind::Vtt: return parse_vtt(raw);
        default: return parse_plain(raw);
      }
    });
  }
  report.transcript.source_id = std::filesystem::path(cfg.input.path).filename().string();

  const auto doc = stage("analyze", [&] { return analyze_transcript(report.transcript, stopwords, abbreviations); });
  report.sentence_count = doc.sentences.size();

  const auto table = stage("frequency", [&] { return build_frequency_table(doc.sentences, cfg.norm_mode); });
  const auto scored =
      stage("score", [&] { return score_sentences(doc.sentences, table, cfg.extraction.max_sentence_words); });
  const auto summary = stage("select", [&] { return select_summary(scored, cfg.extraction); });

  std::string extractive_text;
  for (const auto& s : summary.selected) {
    ExtractiveEntry entry{s.record.index, s.record.display_text, s.score, std::nullopt, std::nullopt};
    if (const auto& span = doc.sentence_times[s.record.index]) {
      entry.start_ms = span->first;
      entry.end_ms = span->second;
    }
    report.extractive.push_back(std::move(entry));
    if (!extractive_text.empty()) extractive_text.push_back(' ');
    extractive_text += s.record.display_text;
  }

  if (cfg.abstractive.enabled && !extractive_text.empty()) {
    report.abstractive_summary = stage("abstractive", [&] {
      RetryPolicy policy;
      if (cfg.stt) policy = {cfg.stt->max_retries, cfg.stt->backoff_base_ms};
      return client.abstractive_fuse(extractive_text, cfg.abstractive, policy);
    });
  }

  if (cfg.reference_path) {
    report.metrics = stage("evaluate", [&] { return score_pair(extractive_text, read_file(*cfg.reference_path)); });
  }

  stage("write", [&] {
    const auto bytes = canonical_dump(to_json(report));
    if (cfg.output_path == "-") {
      std::cout << bytes << '\n';
      return;
    }
    std::ofstream out(cfg.output_path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::PreconditionViolation, "cannot write '" + cfg.output_path + "'");
    out << bytes;
  });
  return report;
}

}  // namespace cascadesum
