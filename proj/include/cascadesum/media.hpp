#pragma once

// 16-bit PCM WAV decoding/encoding and energy-based silence segmentation.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "error.hpp"

namespace cascadesum {

struct AudioBuffer {
  std::vector<float> samples;  // mono, in [-1, 1]
  int sample_rate_hz = 16000;

  std::int64_t duration_ms() const {
    return static_cast<std::int64_t>(samples.size()) * 1000 / sample_rate_hz;
  }
};

struct AudioChunk {
  std::vector<float> samples;
  std::int64_t start_ms = 0;
  std::int64_t end_ms = 0;
  int sample_rate_hz = 16000;

  bool operator==(const AudioChunk&) const = default;
};

struct ChunkParams {
  double silence_threshold_dbfs = -40.0;
  int min_silence_ms = 500;
  int min_chunk_ms = 300;
  int pad_ms = 100;
  int frame_ms = 20;
};

inline constexpr int kMinSampleRate = 8000;
inline constexpr int kMaxSampleRate = 48000;

namespace detail {

inline std::uint32_t read_u32le(std::string_view d, std::size_t at) {
  return static_cast<std::uint32_t>(static_cast<unsigned char>(d[at])) |
         static_cast<std::uint32_t>(static_cast<unsigned char>(d[at + 1])) << 8 |
         static_cast<std::uint32_t>(static_cast<unsigned char>(d[at + 2])) << 16 |
         static_cast<std::uint32_t>(static_cast<unsigned char>(d[at + 3])) << 24;
}

inline std::uint16_t read_u16le(std::string_view d, std::size_t at) {
  return static_cast<std::uint16_t>(static_cast<unsigned char>(d[at]) |
                                    static_cast<unsigned char>(d[at + 1]) << 8);
}

inline void put_u32le(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

inline void put_u16le(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xFF));
  out.push_back(static_cast<char>(v >> 8));
}

}  // namespace detail

/// Decodes a RIFF/WAVE file holding 16-bit integer PCM, mono or stereo.
/// Stereo is downmixed by the per-frame mean; samples are scaled by 1/32768.
inline AudioBuffer decode_wav(std::string_view data) {
  using detail::read_u16le;
  using detail::read_u32le;
  if (data.size() < 12 || data.substr(0, 4) != "RIFF" || data.substr(8, 4) != "WAVE") {
    throw Error(Errc::NotRiff, "missing RIFF/WAVE signature");
  }

  bool have_fmt = false;
  int channels = 0;
  int sample_rate = 0;
  std::size_t pos = 12;
  while (pos + 8 <= data.size()) {
    const auto id = data.substr(pos, 4);
    const std::uint64_t size = read_u32le(data, pos + 4);
    const std::size_t body = pos + 8;

    if (id == "fmt ") {
      if (size < 16 || body + size > data.size()) throw Error(Errc::TruncatedData, "fmt chunk is truncated");
      const auto format = read_u16le(data, body);
      channels = read_u16le(data, body + 2);
      sample_rate = static_cast<int>(read_u32le(data, body + 4));
      const auto bits = read_u16le(data, body + 14);
      if (format != 1) throw Error(Errc::UnsupportedEncoding, "format code " + std::to_string(format) + " is not integer PCM");
      if (bits != 16) throw Error(Errc::UnsupportedEncoding, std::to_string(bits) + "-bit samples are not supported");
      if (channels != 1 && channels != 2) {
        throw Error(Errc::UnsupportedEncoding, std::to_string(channels) + " channels are not supported");
      }
      if (sample_rate < kMinSampleRate || sample_rate > kMaxSampleRate) {
        throw Error(Errc::UnsupportedEncoding, "sample rate " + std::to_string(sample_rate) + " Hz out of range");
      }
      have_fmt = true;
    } else if (id == "data") {
      if (!have_fmt) throw Error(Errc::UnsupportedEncoding, "data chunk precedes fmt chunk");
      const std::size_t frame_bytes = 2 * static_cast<std::size_t>(channels);
      if (body + size > data.size()) throw Error(Errc::TruncatedData, "data chunk extends past end of file");
      if (size % frame_bytes != 0) throw Error(Errc::TruncatedData, "data chunk ends mid-frame");

      AudioBuffer buf;
      buf.sample_rate_hz = sample_rate;
      const std::size_t frames = size / frame_bytes;
      buf.samples.reserve(frames);
      for (std::size_t f = 0; f < frames; ++f) {
        const std::size_t at = body + f * frame_bytes;
        if (channels == 1) {
          buf.samples.push_back(static_cast<std::int16_t>(read_u16le(data, at)) / 32768.0f);
        } else {
          const double left = static_cast<std::int16_t>(read_u16le(data, at)) / 32768.0;
          const double right = static_cast<std::int16_t>(read_u16le(data, at + 2)) / 32768.0;
          buf.samples.push_back(static_cast<float>((left + right) / 2.0));
        }
      }
      return buf;
    }
    pos = body + size + (size & 1);
  }
  if (!have_fmt) throw Error(Errc::TruncatedData, "no fmt chunk");
  throw Error(Errc::TruncatedData, "no data chunk");
}

/// Mono 16-bit PCM WAV. Samples are rounded to the nearest step and clamped,
/// so decode_wav(encode_wav(x)) reproduces any x already on the 1/32768 grid.
inline std::string encode_wav(std::span<const float> samples, int sample_rate_hz) {
  using detail::put_u16le;
  using detail::put_u32le;
  const auto data_bytes = static_cast<std::uint32_t>(samples.size() * 2);
  std::string out;
  out.reserve(44 + data_bytes);
  out += "RIFF";
  put_u32le(out, 36 + data_bytes);
  out += "WAVEfmt ";
  put_u32le(out, 16);
  put_u16le(out, 1);
  put_u16le(out, 1);
  put_u32le(out, static_cast<std::uint32_t>(sample_rate_hz));
  put_u32le(out, static_cast<std::uint32_t>(sample_rate_hz * 2));
  put_u16le(out, 2);
  put_u16le(out, 16);
  out += "data";
  put_u32le(out, data_bytes);
  for (float s : samples) {
    const double scaled = std::round(static_cast<double>(s) * 32768.0);
    const auto v = static_cast<std::int16_t>(std::clamp(scaled, -32768.0, 32767.0));
    put_u16le(out, static_cast<std::uint16_t>(v));
  }
  return out;
}

/// Sentinel returned for digital silence; compares below any threshold.
inline constexpr double kSilenceDbfs = -std::numeric_limits<double>::infinity();

/// Frame energy in dB relative to full scale: 20*log10(RMS).
inline double frame_dbfs(std::span<const float> frame) {
  if (frame.empty()) throw Error(Errc::EmptyFrame, "frame has no samples");
  double sum_sq = 0.0;
  for (float s : frame) sum_sq += static_cast<double>(s) * s;
  if (sum_sq == 0.0) return kSilenceDbfs;
  return 20.0 * std::log10(std::sqrt(sum_sq / static_cast<double>(frame.size())));
}

inline void validate(const ChunkParams& p, int sample_rate_hz) {
  if (p.frame_ms <= 0 || p.min_silence_ms <= 0 || p.min_chunk_ms <= 0 || p.pad_ms < 0) {
    throw std::invalid_argument("chunk durations must be positive");
  }
  if (p.silence_threshold_dbfs > 0.0) throw std::invalid_argument("silence threshold must be <= 0 dBFS");
  if (static_cast<std::int64_t>(sample_rate_hz) * p.frame_ms % 1000 != 0) {
    throw std::invalid_argument("frame_ms must span a whole number of samples at " + std::to_string(sample_rate_hz) +
                                " Hz");
  }
}

/// Splits a buffer into voiced chunks.
///
/// Frames (frame_ms long; a trailing partial frame counts) are silent when
/// their dBFS is below the threshold. Maximal voiced runs separated by less
/// than min_silence_ms are merged, each run is padded by pad_ms on both sides
/// (never past the buffer, and never past the midpoint of a gap shared with a
/// neighbour), and chunks shorter than min_chunk_ms after padding are dropped.
/// Boundaries fall on frame edges except at the end of the buffer.
inline std::vector<AudioChunk> split_on_silence(const AudioBuffer& buf, const ChunkParams& p) {
  validate(p, buf.sample_rate_hz);
  std::vector<AudioChunk> chunks;
  if (buf.samples.empty()) return chunks;

  const std::size_t frame_len = static_cast<std::size_t>(buf.sample_rate_hz) * p.frame_ms / 1000;
  const std::size_t n = buf.samples.size();
  const std::size_t frame_count = (n + frame_len - 1) / frame_len;
  const std::span<const float> all(buf.samples);

  struct Run {
    std::size_t begin;  // frames, half-open
    std::size_t end;
  };
  std::vector<Run> runs;
  for (std::size_t f = 0; f < frame_count; ++f) {
    const std::size_t lo = f * frame_len;
    const bool voiced = frame_dbfs(all.subspan(lo, std::min(frame_len, n - lo))) >= p.silence_threshold_dbfs;
    if (!voiced) continue;
    if (!runs.empty() && runs.back().end == f) {
      runs.back().end = f + 1;
    } else {
      runs.push_back({f, f + 1});
    }
  }
  if (runs.empty()) return chunks;

  std::vector<Run> merged;
  for (const auto& r : runs) {
    const auto gap_ms = merged.empty() ? 0 : static_cast<std::int64_t>(r.begin - merged.back().end) * p.frame_ms;
    if (!merged.empty() && gap_ms < p.min_silence_ms) {
      merged.back().end = r.end;
    } else {
      merged.push_back(r);
    }
  }

  const auto pad = static_cast<std::size_t>((p.pad_ms + p.frame_ms / 2) / p.frame_ms);
  std::vector<Run> padded(merged.size());
  for (std::size_t i = 0; i < merged.size(); ++i) {
    std::size_t lo = merged[i].begin >= pad ? merged[i].begin - pad : 0;
    std::size_t hi = std::min(merged[i].end + pad, frame_count);
    if (i > 0) {
      const std::size_t mid = merged[i - 1].end + (merged[i].begin - merged[i - 1].end) / 2;
      lo = std::max(lo, mid);
    }
    if (i + 1 < merged.size()) {
      const std::size_t mid = merged[i].end + (merged[i + 1].begin - merged[i].end) / 2;
      hi = std::min(hi, mid);
    }
    padded[i] = {lo, hi};
  }

  for (const auto& r : padded) {
    const std::size_t first = r.begin * frame_len;
    const std::size_t last = std::min(r.end * frame_len, n);
    AudioChunk c;
    c.sample_rate_hz = buf.sample_rate_hz;
    c.start_ms = static_cast<std::int64_t>(r.begin) * p.frame_ms;
    c.end_ms = static_cast<std::int64_t>(last) * 1000 / buf.sample_rate_hz;
    if (c.end_ms - c.start_ms < p.min_chunk_ms) continue;
    c.samples.assign(buf.samples.begin() + static_cast<std::ptrdiff_t>(first),
                     buf.samples.begin() + static_cast<std::ptrdiff_t>(last));
    chunks.push_back(std::move(c));
  }
  return chunks;
}

}  // namespace cascadesum
