#pragma once

// Shared helpers for tests that run the full cascade against the mock
// server. Paths are relative to the test working directory, which holds a
// copy of tests/fixtures.

#include <fstream>
#include <sstream>
#include <string>

#include "cascadesum/json_io.hpp"
#include "cascadesum/pipeline.hpp"

namespace cascadesum::testing {

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void replace_all(std::string& s, const std::string& from, const std::string& to) {
  for (auto pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size())) {
    s.replace(pos, from.size(), to);
  }
}

/// fixtures/config_wav.json with the mock endpoint filled in.
inline Json wav_config_json(const std::string& endpoint, const std::string& output_path = "out/report_wav.json") {
  auto raw = slurp("fixtures/config_wav.json");
  replace_all(raw, "@ENDPOINT@", endpoint);
  auto j = Json::parse(raw);
  j["output_path"] = output_path;
  return j;
}

/// Drops the parts of a report that legitimately vary between runs: stage
/// timings and the (ephemeral) service endpoints echoed from the config.
inline Json normalize_report(Json report) {
  report = mask_timings(std::move(report));
  auto& echo = report["config_echo"];
  if (echo.contains("stt") && echo["stt"].is_object()) echo["stt"]["endpoint_url"] = "<endpoint>";
  if (echo.contains("abstractive") && !echo["abstractive"]["endpoint_url"].get<std::string>().empty()) {
    echo["abstractive"]["endpoint_url"] = "<endpoint>";
  }
  echo["output_path"] = "<output>";
  return report;
}

}  // namespace cascadesum::testing
