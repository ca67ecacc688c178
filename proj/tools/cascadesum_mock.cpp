// cascadesum-mock: deterministic recognition/summarization server for tests
// and offline demos, plus helpers for writing scenario tables.

#include <CLI11.hpp>

#include <csignal>
#include <iostream>
#include <string>

#include "cascadesum/cascadesum.hpp"
#include "cascadesum/mock_server.hpp"

namespace {

cascadesum::MockInferenceServer* g_server = nullptr;

void handle_signal(int) {
  if (g_server) g_server->request_stop();
}

}  // namespace

int main(int argc, char** argv) {
  using namespace cascadesum;
  CLI::App app{"Deterministic mock inference server", "cascadesum-mock"};
  app.require_subcommand(1);

  std::string scenario_path, host = "127.0.0.1", input;
  int port = 8089;
  ChunkParams chunking;

  auto* serve = app.add_subcommand("serve", "Serve /v1/transcribe and /v1/summarize");
  serve->add_option("--scenario", scenario_path, "Scenario JSON file")->required();
  serve->add_option("--host", host, "Bind address");
  serve->add_option("--port", port, "Port (0 picks a free one)");

  auto* chunk_hashes = app.add_subcommand("chunk-hashes", "Print the table keys for each chunk of a WAV file");
  chunk_hashes->add_option("--input", input, "16-bit PCM WAV file")->required();
  chunk_hashes->add_option("--threshold-dbfs", chunking.silence_threshold_dbfs);
  chunk_hashes->add_option("--min-silence-ms", chunking.min_silence_ms);
  chunk_hashes->add_option("--min-chunk-ms", chunking.min_chunk_ms);
  chunk_hashes->add_option("--pad-ms", chunking.pad_ms);
  chunk_hashes->add_option("--frame-ms", chunking.frame_ms);

  auto* text_hash = app.add_subcommand("text-hash", "Print the table key for a text file's contents");
  text_hash->add_option("--input", input, "Text file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (serve->parsed()) {
      MockInferenceServer server(MockScenario::load(scenario_path));
      g_server = &server;
      std::signal(SIGINT, handle_signal);
      std::signal(SIGTERM, handle_signal);
      port = server.start(host, port);
      std::cout << "listening on " << server.url() << std::endl;
      server.wait();
      g_server = nullptr;
      return 0;
    }
    if (chunk_hashes->parsed()) {
      const auto chunks = split_on_silence(decode_wav(read_file(input)), chunking);
      Json out = Json::array();
      for (const auto& c : chunks) {
        out.push_back({{"start_ms", c.start_ms},
                       {"end_ms", c.end_ms},
                       {"hash", content_hash(encode_wav(c.samples, c.sample_rate_hz))}});
      }
      std::cout << canonical_dump(out) << '\n';
      return 0;
    }
    if (text_hash->parsed()) {
      std::cout << content_hash(read_file(input)) << '\n';
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "cascadesum-mock: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
