#pragma once

// Deterministic stand-in for the recognition and summarization services.
//
// Responses come from tables keyed on content_hash() of the request payload
// (the decoded WAV bytes for /v1/transcribe, the text for /v1/summarize).
// A scenario file configures the tables, latency and injected faults:
//
//   {
//     "latency_ms": 0,
//     "transcripts": {"<hash>": "text", ...},
//     "default_transcript": "",
//     "summaries": {"<hash>": "text", ...},
//     "summary_fallback": "first_sentence" | "echo" | "empty",
//     "faults": [{"route": "transcribe" | "summarize", "status": 429,
//                 "times": 1, "body": "..."}]
//   }
//
// Faults on a route are consumed in order; "times": -1 never runs out.

#include <httplib.h>

#include <chrono>
#include <deque>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "codec.hpp"
#include "json_io.hpp"
#include "text_prep.hpp"

namespace cascadesum {

enum class SummaryFallback { FirstSentence, Echo, Empty };

struct InjectedFault {
  std::string route;
  int status = 500;
  int times = 1;
  std::string body = R"({"error":"injected"})";
};

struct MockScenario {
  int latency_ms = 0;
  std::map<std::string, std::string> transcripts;
  std::string default_transcript;
  std::map<std::string, std::string> summaries;
  SummaryFallback summary_fallback = SummaryFallback::FirstSentence;
  std::vector<InjectedFault> faults;

  static MockScenario from_json(const Json& j) {
    const auto fail = [](const std::string& why) { return std::invalid_argument("mock scenario: " + why); };
    if (!j.is_object()) throw fail("must be a JSON object");
    MockScenario s;
    for (const auto& [key, value] : j.items()) {
      if (key == "latency_ms") {
        s.latency_ms = value.get<int>();
      } else if (key == "transcripts") {
        s.transcripts = value.get<std::map<std::string, std::string>>();
      } else if (key == "default_transcript") {
        s.default_transcript = value.get<std::string>();
      } else if (key == "summaries") {
        s.summaries = value.get<std::map<std::string, std::string>>();
      } else if (key == "summary_fallback") {
        const auto mode = value.get<std::string>();
        if (mode == "first_sentence") {
          s.summary_fallback = SummaryFallback::FirstSentence;
        } else if (mode == "echo") {
          s.summary_fallback = SummaryFallback::Echo;
        } else if (mode == "empty") {
          s.summary_fallback = SummaryFallback::Empty;
        } else {
          throw fail("unknown summary_fallback '" + mode + "'");
        }
      } else if (key == "faults") {
        for (const auto& f : value) {
          InjectedFault fault;
          fault.route = f.at("route").get<std::string>();
          if (fault.route != "transcribe" && fault.route != "summarize") throw fail("unknown route '" + fault.route + "'");
          fault.status = f.value("status", 500);
          fault.times = f.value("times", 1);
          fault.body = f.value("body", fault.body);
          s.faults.push_back(std::move(fault));
        }
      } else {
        throw fail("unknown key '" + key + "'");
      }
    }
    return s;
  }

  static MockScenario load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("mock scenario: cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_json(Json::parse(ss.str()));
  }
};

class MockInferenceServer {
 public:
  explicit MockInferenceServer(MockScenario scenario) : scenario_(std::move(scenario)) {
    for (const auto& f : scenario_.faults) pending_faults_[f.route].push_back(f);
    server_.Post("/v1/transcribe", [this](const httplib::Request& req, httplib::Response& res) {
      handle(req, res, "transcribe");
    });
    server_.Post("/v1/summarize", [this](const httplib::Request& req, httplib::Response& res) {
      handle(req, res, "summarize");
    });
  }

  MockInferenceServer(const MockInferenceServer&) = delete;
  MockInferenceServer& operator=(const MockInferenceServer&) = delete;

  ~MockInferenceServer() { stop(); }

  /// Binds (port 0 picks a free one) and serves on a background thread.
  int start(const std::string& host = "127.0.0.1", int port = 0) {
    port_ = port == 0 ? server_.bind_to_any_port(host) : (server_.bind_to_port(host, port) ? port : -1);
    if (port_ < 0) throw std::runtime_error("mock server: cannot bind " + host + ":" + std::to_string(port));
    host_ = host;
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
    return port_;
  }

  /// Asks the listener to exit without waiting for it.
  void request_stop() { server_.stop(); }

  /// Blocks until the listener exits.
  void wait() {
    if (thread_.joinable()) thread_.join();
  }

  void stop() {
    request_stop();
    wait();
  }

  std::string url() const { return "http://" + host_ + ":" + std::to_string(port_); }

  std::size_t request_count(const std::string& route) const {
    std::lock_guard lock(mutex_);
    const auto it = request_counts_.find(route);
    return it == request_counts_.end() ? 0 : it->second;
  }

  /// Content hashes seen on a route, in arrival order.
  std::vector<std::string> seen_hashes(const std::string& route) const {
    std::lock_guard lock(mutex_);
    const auto it = seen_.find(route);
    return it == seen_.end() ? std::vector<std::string>{} : it->second;
  }

 private:
  void handle(const httplib::Request& req, httplib::Response& res, const std::string& route) {
    if (scenario_.latency_ms > 0) std::this_thread::sleep_for(std::chrono::milliseconds(scenario_.latency_ms));
    {
      std::lock_guard lock(mutex_);
      ++request_counts_[route];
      auto& queue = pending_faults_[route];
      if (!queue.empty()) {
        auto& fault = queue.front();
        res.status = fault.status;
        res.set_content(fault.body, "application/json");
        if (fault.times > 0 && --fault.times == 0) queue.pop_front();
        return;
      }
    }

    const Json body = Json::parse(req.body, nullptr, false);
    const auto reject = [&](const std::string& why) {
      res.status = 400;
      res.set_content(canonical_dump({{"error", why}}), "application/json");
    };
    if (!body.is_object()) return reject("body must be a JSON object");

    if (route == "transcribe") {
      if (!body.contains("audio_b64") || !body["audio_b64"].is_string()) return reject("missing audio_b64");
      const auto audio = base64_decode(body["audio_b64"].get<std::string>());
      if (!audio) return reject("audio_b64 is not valid base64");
      const auto hash = content_hash(*audio);
      record(route, hash);
      const auto it = scenario_.transcripts.find(hash);
      const auto& text = it == scenario_.transcripts.end() ? scenario_.default_transcript : it->second;
      res.set_content(canonical_dump({{"transcript", text}, {"confidence", 1.0}}), "application/json");
      return;
    }

    if (!body.contains("text") || !body["text"].is_string()) return reject("missing text");
    const auto text = body["text"].get<std::string>();
    const auto hash = content_hash(text);
    record(route, hash);
    std::string summary;
    if (const auto it = scenario_.summaries.find(hash); it != scenario_.summaries.end()) {
      summary = it->second;
    } else if (scenario_.summary_fallback == SummaryFallback::Echo) {
      summary = text;
    } else if (scenario_.summary_fallback == SummaryFallback::FirstSentence) {
      const auto sentences = segment_sentences(clean_for_display(text));
      if (!sentences.empty()) summary = sentences.front();
    }
    res.set_content(canonical_dump({{"summary", summary}}), "application/json");
  }

  void record(const std::string& route, const std::string& hash) {
    std::lock_guard lock(mutex_);
    seen_[route].push_back(hash);
  }

  MockScenario scenario_;
  httplib::Server server_;
  std::thread thread_;
  std::string host_ = "127.0.0.1";
  int port_ = -1;

  mutable std::mutex mutex_;
  std::map<std::string, std::deque<InjectedFault>> pending_faults_;
  std::map<std::string, std::size_t> request_counts_;
  std::map<std::string, std::vector<std::string>> seen_;
};

}  // namespace cascadesum
