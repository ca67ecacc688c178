#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

namespace cascadesum {

enum class Errc {
  MalformedCue,
  EncodingError,
  MissingHeader,
  InvalidTranscript,
  NotRiff,
  UnsupportedEncoding,
  TruncatedData,
  EmptyFrame,
  TransportError,
  ProtocolError,
  ServiceError,
  PreconditionViolation,
  InvalidN,
  NoReferences,
  EmptyCorpus,
  ConfigError,
  InputNotFound,
  StageError,
};

inline const char* to_string(Errc code) {
  switch (code) {
    case Errc::MalformedCue: return "MalformedCue";
    case Errc::EncodingError: return "EncodingError";
    case Errc::MissingHeader: return "MissingHeader";
    case Errc::InvalidTranscript: return "InvalidTranscript";
    case Errc::NotRiff: return "NotRiff";
    case Errc::UnsupportedEncoding: return "UnsupportedEncoding";
    case Errc::TruncatedData: return "TruncatedData";
    case Errc::EmptyFrame: return "EmptyFrame";
    case Errc::TransportError: return "TransportError";
    case Errc::ProtocolError: return "ProtocolError";
    case Errc::ServiceError: return "ServiceError";
    case Errc::PreconditionViolation: return "PreconditionViolation";
    case Errc::InvalidN: return "InvalidN";
    case Errc::NoReferences: return "NoReferences";
    case Errc::EmptyCorpus: return "EmptyCorpus";
    case Errc::ConfigError: return "ConfigError";
    case Errc::InputNotFound: return "InputNotFound";
    case Errc::StageError: return "StageError";
  }
  return "Unknown";
}

/// Base of every error raised by the library. `code()` identifies the
/// failure class; `what()` carries a human-readable detail.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& detail)
      : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code), detail_(detail) {}

  Errc code() const noexcept { return code_; }
  /// The message without the error-code prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  Errc code_;
  std::string detail_;
};

/// Raised by the inference clients. When the failure belongs to one chunk of
/// a batch, `chunk_index()` names it.
class GatewayError : public Error {
 public:
  GatewayError(Errc code, const std::string& detail, std::optional<std::size_t> chunk = std::nullopt,
               std::optional<int> http_status = std::nullopt)
      : Error(code, chunk ? detail + " (chunk " + std::to_string(*chunk) + ")" : detail),
        chunk_index_(chunk),
        http_status_(http_status) {}

  std::optional<std::size_t> chunk_index() const noexcept { return chunk_index_; }
  std::optional<int> http_status() const noexcept { return http_status_; }

 private:
  std::optional<std::size_t> chunk_index_;
  std::optional<int> http_status_;
};

class ConfigError : public Error {
 public:
  ConfigError(std::string key_path, const std::string& reason)
      : Error(Errc::ConfigError, (key_path.empty() ? std::string("<root>") : key_path) + ": " + reason),
        key_path_(std::move(key_path)) {}

  const std::string& key_path() const noexcept { return key_path_; }

 private:
  std::string key_path_;
};

/// A pipeline stage failed; wraps the stage's own error code.
class StageError : public Error {
 public:
  StageError(std::string stage, Errc inner, const std::string& detail)
      : Error(Errc::StageError, "stage '" + stage + "' failed: " + to_string(inner) + ": " + detail),
        stage_(std::move(stage)),
        inner_(inner) {}

  const std::string& stage() const noexcept { return stage_; }
  Errc inner_code() const noexcept { return inner_; }

 private:
  std::string stage_;
  Errc inner_;
};

}  // namespace cascadesum
