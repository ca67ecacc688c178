// cascadesum: command-line front end for the summarization cascade.
//
// Exit status: 0 success, 1 a stage failed, 2 usage or configuration error.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "cascadesum/cascadesum.hpp"

namespace {

using namespace cascadesum;

constexpr int kExitOk = 0;
constexpr int kExitStage = 1;
constexpr int kExitUsage = 2;

std::optional<std::string> env_token() {
  if (const char* t = std::getenv("CASCADESUM_TOKEN"); t && *t) return std::string(t);
  return std::nullopt;
}

void write_output(const std::string& path, const std::string& bytes) {
  if (path.empty() || path == "-") {
    std::cout << bytes << '\n';
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::PreconditionViolation, "cannot write '" + path + "'");
  out << bytes;
}

Json load_config_json(const std::string& path) {
  if (path.empty()) return Json::object();
  const auto raw = read_file(path);
  Json j = Json::parse(raw, nullptr, false);
  if (j.is_discarded()) throw ConfigError("", "'" + path + "' is not valid JSON");
  if (!j.is_object()) throw ConfigError("", "config must be a JSON object");
  return j;
}

std::optional<InputKind> kind_from_extension(const std::string& path) {
  auto ext = std::filesystem::path(path).extension().string();
  for (auto& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (ext == ".srt") return InputKind::Srt;
  if (ext == ".vtt") return InputKind::Vtt;
  if (ext == ".wav") return InputKind::Wav;
  if (ext == ".txt" || ext == ".text" || ext.empty()) return InputKind::Plain;
  return std::nullopt;
}

struct Options {
  std::string config;
  std::string input;
  std::string output;
  std::string kind;
  std::string endpoint;
  std::string candidate;
  std::string reference;
  std::string batch;
  bool no_abstractive = false;
};

int cmd_run(const Options& o, bool extractive_only) {
  Json raw = load_config_json(o.config);
  if (!o.input.empty()) {
    if (!raw.contains("input") || !raw["input"].is_object()) raw["input"] = Json::object();
    raw["input"]["path"] = o.input;
  }
  if (!o.kind.empty()) {
    raw["input"]["kind"] = o.kind;
  } else if (raw.contains("input") && raw["input"].is_object() && !raw["input"].contains("kind") &&
             raw["input"].contains("path") && raw["input"]["path"].is_string()) {
    const auto kind = kind_from_extension(raw["input"]["path"].get<std::string>());
    if (!kind) throw ConfigError("input.kind", "cannot infer from file extension; pass --kind");
    raw["input"]["kind"] = to_string(*kind);
  }
  if (!o.output.empty()) raw["output_path"] = o.output;
  if (!raw.contains("output_path")) raw["output_path"] = "-";
  if (o.no_abstractive || extractive_only) {
    if (raw.contains("abstractive") && raw["abstractive"].is_object()) raw["abstractive"]["enabled"] = false;
  }

  auto cfg = config_from_json(raw);
  if (extractive_only && cfg.input.kind == InputKind::Wav) {
    throw ConfigError("input.kind", "summarize takes text or caption input; use run for wav");
  }
  PipelineContext ctx;
  ctx.bearer_token = env_token();
  run_pipeline(cfg, ctx);
  return kExitOk;
}

int cmd_transcribe(const Options& o) {
  Json raw = load_config_json(o.config);
  ChunkParams chunking;
  SttConfig stt;
  if (raw.contains("chunking") || raw.contains("stt")) {
    Json probe = {{"input", {{"kind", "wav"}, {"path", o.input}}}, {"output_path", "-"}};
    if (raw.contains("chunking")) probe["chunking"] = raw["chunking"];
    if (raw.contains("stt")) probe["stt"] = raw["stt"];
    if (!o.endpoint.empty()) probe["stt"]["endpoint_url"] = o.endpoint;
    const auto cfg = config_from_json(probe);
    chunking = cfg.chunking;
    stt = *cfg.stt;
  } else {
    if (o.endpoint.empty()) throw ConfigError("stt.endpoint_url", "pass --endpoint or a config with an stt section");
    stt.endpoint_url = o.endpoint;
  }
  require_file(o.input);
  const auto raw_wav = read_file(o.input);

  Transcript transcript;
  try {
    const auto chunks = split_on_silence(decode_wav(raw_wav), chunking);
    const InferenceClient client(make_http_transport(), env_token());
    transcript = client.transcribe_chunks(chunks, stt).transcript;
  } catch (const Error& e) {
    throw StageError("transcribe", e.code(), e.detail());
  }
  transcript.source_id = std::filesystem::path(o.input).filename().string();
  write_output(o.output, serialize_canonical(transcript));
  return kExitOk;
}

std::vector<Json> read_jsonl(const std::string& path) {
  require_file(path);
  std::ifstream in(path, std::ios::binary);
  std::vector<Json> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    Json row = Json::parse(line, nullptr, false);
    if (row.is_discarded() || !row.is_object()) {
      throw Error(Errc::PreconditionViolation, path + ":" + std::to_string(line_no) + ": not a JSON object");
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string string_field(const Json& row, const char* key, const std::string& where) {
  if (!row.contains(key) || !row[key].is_string()) {
    throw Error(Errc::PreconditionViolation, where + ": missing string field '" + key + "'");
  }
  return row[key].get<std::string>();
}

int cmd_evaluate(const Options& o) {
  if (!o.batch.empty()) {
    Json out = Json::array();
    const auto rows = read_jsonl(o.batch);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto where = o.batch + " row " + std::to_string(i);
      out.push_back(to_json(score_pair(string_field(rows[i], "candidate", where), string_field(rows[i], "reference", where))));
    }
    write_output(o.output, canonical_dump(out));
    return kExitOk;
  }
  if (o.candidate.empty() || o.reference.empty()) {
    throw ConfigError("", "evaluate needs --candidate and --reference, or --batch");
  }
  require_file(o.candidate);
  require_file(o.reference);
  write_output(o.output, canonical_dump(to_json(score_pair(read_file(o.candidate), read_file(o.reference)))));
  return kExitOk;
}

int cmd_stats(const Options& o) {
  std::vector<CorpusPair> pairs;
  const auto rows = read_jsonl(o.input);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto where = o.input + " row " + std::to_string(i);
    pairs.push_back({string_field(rows[i], "article", where), string_field(rows[i], "summary", where)});
  }
  write_output(o.output, canonical_dump(to_json(corpus_stats(pairs))));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Speech/caption summarization cascade with ROUGE/BLEU evaluation", "cascadesum"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);
  Options o;

  auto* run = app.add_subcommand("run", "Run the full cascade described by a config file");
  run->add_option("--config", o.config, "Pipeline config (JSON)")->required();
  run->add_option("--input", o.input, "Override input.path");
  run->add_option("--output", o.output, "Override output_path ('-' for stdout)");
  run->add_flag("--no-abstractive", o.no_abstractive, "Skip the abstractive fusion stage");

  auto* summarize = app.add_subcommand("summarize", "Extractive summary of a text or caption file");
  summarize->add_option("--input", o.input, "Plain text, .srt or .vtt file")->required();
  summarize->add_option("--kind", o.kind, "Input kind (plain, srt, vtt); inferred from the extension by default");
  summarize->add_option("--config", o.config, "Optional pipeline config for extraction settings");
  summarize->add_option("--output", o.output, "Report path ('-' for stdout)");

  auto* transcribe = app.add_subcommand("transcribe", "Transcribe a WAV file into canonical transcript JSON");
  transcribe->add_option("--input", o.input, "16-bit PCM WAV file")->required();
  transcribe->add_option("--config", o.config, "Config supplying chunking and stt sections");
  transcribe->add_option("--endpoint", o.endpoint, "Recognition endpoint URL (overrides stt.endpoint_url)");
  transcribe->add_option("--output", o.output, "Transcript path ('-' for stdout)");

  auto* evaluate = app.add_subcommand("evaluate", "ROUGE-1/2/L and BLEU of a candidate against a reference");
  evaluate->add_option("--candidate", o.candidate, "Candidate summary text file");
  evaluate->add_option("--reference", o.reference, "Reference summary text file");
  evaluate->add_option("--batch", o.batch, "JSON Lines of {candidate, reference}");
  evaluate->add_option("--output", o.output, "Output path ('-' for stdout)");

  auto* stats = app.add_subcommand("stats", "Length and vocabulary statistics of a JSONL corpus");
  stats->add_option("--input", o.input, "JSON Lines of {article, summary}")->required();
  stats->add_option("--output", o.output, "Output path ('-' for stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (run->parsed()) return cmd_run(o, false);
    if (summarize->parsed()) return cmd_run(o, true);
    if (transcribe->parsed()) return cmd_transcribe(o);
    if (evaluate->parsed()) return cmd_evaluate(o);
    if (stats->parsed()) return cmd_stats(o);
  } catch (const Error& e) {
    std::cerr << "cascadesum: " << e.what() << '\n';
    return e.code() == Errc::ConfigError || e.code() == Errc::InputNotFound ? kExitUsage : kExitStage;
  } catch (const std::exception& e) {
    std::cerr << "cascadesum: " << e.what() << '\n';
    return kExitStage;
  }
  return kExitUsage;
}
