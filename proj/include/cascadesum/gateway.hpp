#pragma once

// Clients for the external recognition and summarization services.
//
// Wire protocol (JSON over HTTP POST):
//   {endpoint}/v1/transcribe  {"audio_b64", "sample_rate_hz", "language"}
//                          -> {"transcript", "confidence", "words"?}
//   {endpoint}/v1/summarize   {"text", "max_tokens"} -> {"summary"}
//
// 429 and 5xx responses and connection failures are retried with
// exponential backoff; any other non-2xx status is permanent.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "codec.hpp"
#include "error.hpp"
#include "json_io.hpp"
#include "media.hpp"
#include "transcripts.hpp"

namespace cascadesum {

struct SttConfig {
  std::string endpoint_url;
  std::string language_tag = "en-US";
  int max_retries = 3;
  int backoff_base_ms = 500;
  int parallelism = 1;
};

struct AbstractiveConfig {
  std::string endpoint_url;
  int max_summary_tokens = 60;
  bool enabled = false;
};

struct HttpResponse {
  int status = 0;
  std::string body;
};

using HttpHeaders = std::multimap<std::string, std::string>;

/// Sends one POST. Implementations throw GatewayError(TransportError) when
/// no HTTP response was obtained; any HTTP status is returned, not thrown.
class HttpTransport {
 public:
  virtual ~HttpTransport() = default;
  virtual HttpResponse post(const std::string& endpoint_url, const std::string& path, const std::string& body,
                            const HttpHeaders& headers) const = 0;
};

using Sleeper = std::function<void(std::chrono::milliseconds)>;

inline void real_sleep(std::chrono::milliseconds d) { std::this_thread::sleep_for(d); }

struct RetryPolicy {
  int max_retries = 3;
  int backoff_base_ms = 500;

  /// Delay before retry number `attempt` (0-based).
  std::chrono::milliseconds delay(int attempt) const {
    return std::chrono::milliseconds(static_cast<std::int64_t>(backoff_base_ms) << std::min(attempt, 30));
  }
};

struct TranscribeResult {
  Transcript transcript;
  std::size_t retries = 0;  // summed over all chunks
};

inline bool is_retryable_status(int status) { return status == 429 || status >= 500; }

/// Thread-safe once constructed; holds no per-request state.
class InferenceClient {
 public:
  InferenceClient(std::shared_ptr<const HttpTransport> transport, std::optional<std::string> bearer_token = {},
                  Sleeper sleeper = real_sleep)
      : transport_(std::move(transport)), bearer_token_(std::move(bearer_token)), sleeper_(std::move(sleeper)) {}

  /// Transcribes chunks in order, at most cfg.parallelism requests in flight.
  /// Empty recognition results produce no segment. The first chunk (by
  /// index) that fails terminally fails the whole call.
  TranscribeResult transcribe_chunks(const std::vector<AudioChunk>& chunks, const SttConfig& cfg) const {
    if (cfg.max_retries < 0 || cfg.parallelism < 1 || cfg.backoff_base_ms < 0) {
      throw GatewayError(Errc::PreconditionViolation, "invalid stt config");
    }
    const RetryPolicy policy{cfg.max_retries, cfg.backoff_base_ms};
    std::vector<std::string> texts(chunks.size());
    std::vector<std::size_t> retries(chunks.size(), 0);
    std::vector<std::optional<GatewayError>> failures(chunks.size());
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};

    const auto worker = [&] {
      for (std::size_t i = next++; i < chunks.size() && !failed; i = next++) {
        try {
          texts[i] = transcribe_one(chunks[i], cfg, policy, retries[i]);
        } catch (const GatewayError& e) {
          failures[i].emplace(e.code(), e.detail(), i, e.http_status());
          failed = true;
        }
      }
    };
    const auto workers = std::min<std::size_t>(static_cast<std::size_t>(cfg.parallelism), chunks.size());
    if (workers <= 1) {
      worker();
    } else {
      std::vector<std::jthread> pool;
      for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    }
    for (auto& f : failures) {
      if (f) throw *f;
    }

    TranscribeResult result;
    result.transcript.language_tag = cfg.language_tag;
    for (std::size_t i = 0; i < chunks.size(); ++i) {
      result.retries += retries[i];
      auto text = std::string(detail::trim(texts[i]));
      if (text.empty()) continue;
      result.transcript.segments.push_back(
          {result.transcript.segments.size(), std::move(text), chunks[i].start_ms, chunks[i].end_ms});
    }
    return result;
  }

  /// Returns the service's summary verbatim.
  std::string abstractive_fuse(const std::string& text, const AbstractiveConfig& cfg,
                               const RetryPolicy& policy = {}) const {
    if (!cfg.enabled) throw GatewayError(Errc::PreconditionViolation, "abstractive stage is disabled");
    if (detail::trim(text).empty()) throw GatewayError(Errc::PreconditionViolation, "text to fuse is empty");
    if (cfg.max_summary_tokens < 5) throw GatewayError(Errc::PreconditionViolation, "max_summary_tokens must be >= 5");
    const Json request = {{"text", text}, {"max_tokens", cfg.max_summary_tokens}};
    std::size_t retries = 0;
    const Json body = post_json(cfg.endpoint_url, "/v1/summarize", request, policy, retries);
    if (!body.is_object() || !body.contains("summary") || !body["summary"].is_string()) {
      throw GatewayError(Errc::ProtocolError, "summarize response lacks a string 'summary'");
    }
    return body["summary"].get<std::string>();
  }

 private:
  std::string transcribe_one(const AudioChunk& chunk, const SttConfig& cfg, const RetryPolicy& policy,
                             std::size_t& retries) const {
    const Json request = {{"audio_b64", base64_encode(encode_wav(chunk.samples, chunk.sample_rate_hz))},
                          {"sample_rate_hz", chunk.sample_rate_hz},
                          {"language", cfg.language_tag}};
    const Json body = post_json(cfg.endpoint_url, "/v1/transcribe", request, policy, retries);
    if (!body.is_object() || !body.contains("transcript") || !body["transcript"].is_string()) {
      throw GatewayError(Errc::ProtocolError, "transcribe response lacks a string 'transcript'");
    }
    if (body.contains("confidence")) {
      const auto& c = body["confidence"];
      if (!c.is_number() || c.get<double>() < 0.0 || c.get<double>() > 1.0) {
        throw GatewayError(Errc::ProtocolError, "'confidence' must be a number in [0,1]");
      }
    }
    if (body.contains("words") && !body["words"].is_null()) {
      if (!body["words"].is_array()) throw GatewayError(Errc::ProtocolError, "'words' must be an array");
      for (const auto& w : body["words"]) {
        if (!w.is_object() || !w.contains("text") || !w["text"].is_string() || !w.contains("start_ms") ||
            !w["start_ms"].is_number_integer() || !w.contains("end_ms") || !w["end_ms"].is_number_integer()) {
          throw GatewayError(Errc::ProtocolError, "malformed entry in 'words'");
        }
      }
    }
    return body["transcript"].get<std::string>();
  }

  Json post_json(const std::string& endpoint_url, const std::string& path, const Json& request,
                 const RetryPolicy& policy, std::size_t& retries) const {
    HttpHeaders headers{{"Content-Type", "application/json"}};
    if (bearer_token_) headers.emplace("Authorization", "Bearer " + *bearer_token_);
    const std::string payload = canonical_dump(request);

    for (int attempt = 0;; ++attempt) {
      std::string failure;
      std::optional<int> status;
      try {
        const HttpResponse resp = transport_->post(endpoint_url, path, payload, headers);
        if (resp.status >= 200 && resp.status < 300) {
          Json body = Json::parse(resp.body, nullptr, false);
          if (body.is_discarded()) throw GatewayError(Errc::ProtocolError, path + " returned a non-JSON body");
          return body;
        }
        if (!is_retryable_status(resp.status)) {
          throw GatewayError(Errc::ServiceError, path + " returned HTTP " + std::to_string(resp.status), std::nullopt,
                             resp.status);
        }
        status = resp.status;
        failure = "HTTP " + std::to_string(resp.status);
      } catch (const GatewayError& e) {
        if (e.code() != Errc::TransportError) throw;
        failure = e.detail();
      }
      if (attempt >= policy.max_retries) {
        throw GatewayError(Errc::TransportError,
                           path + " failed after " + std::to_string(attempt + 1) + " attempt(s): " + failure,
                           std::nullopt, status);
      }
      sleeper_(policy.delay(attempt));
      ++retries;
    }
  }

  std::shared_ptr<const HttpTransport> transport_;
  std::optional<std::string> bearer_token_;
  Sleeper sleeper_;
};

}  // namespace cascadesum
