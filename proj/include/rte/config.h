#ifndef RTE_CONFIG_H_
#define RTE_CONFIG_H_

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rte/normalize.h"
#include "rte/relation.h"

namespace rte {

enum class TaggerMode { kBuiltin, kRemote };
enum class LLMMode { kReplay, kRecord, kLive };
enum class SimilarityBackend { kTrigram, kExact, kEmbedding };

std::string_view tagger_mode_name(TaggerMode m);
std::string_view llm_mode_name(LLMMode m);
std::string_view similarity_backend_name(SimilarityBackend b);
TaggerMode parse_tagger_mode(std::string_view s);
LLMMode parse_llm_mode(std::string_view s);
SimilarityBackend parse_similarity_backend(std::string_view s);

struct TaggerSettings {
  TaggerMode mode = TaggerMode::kBuiltin;
  std::string endpoint = "http://127.0.0.1:8765";
  // Remote mode only: fall back to the builtin tagger with a warning.
  bool fallback = true;
  int timeout_ms = 10000;

  bool operator==(const TaggerSettings &) const = default;
};

struct LLMSettings {
  LLMMode mode = LLMMode::kReplay;
  std::string endpoint = "http://127.0.0.1:8000/v1/chat/completions";
  std::string cassette = "cassette.jsonl";
  int timeout_ms = 60000;
  RelationConfig relation;
  // Secret; read from the environment only, never serialized.
  std::string api_key;

  bool operator==(const LLMSettings &) const = default;
};

struct EmbeddingSettings {
  std::string endpoint = "http://127.0.0.1:8001/embeddings";
  std::string model = "all-MiniLM-L6-v2";
  // Replay file for the embedding backend; empty means call the endpoint.
  std::string cassette;
  int timeout_ms = 30000;
  std::string api_key;

  bool operator==(const EmbeddingSettings &) const = default;
};

struct AlignmentSettings {
  double threshold = 0.85;
  SimilarityBackend backend = SimilarityBackend::kTrigram;

  bool operator==(const AlignmentSettings &) const = default;
};

struct EvaluationSettings {
  SimilarityBackend backend = SimilarityBackend::kTrigram;
  std::vector<double> taus;  // empty means the default sweep

  bool operator==(const EvaluationSettings &) const = default;
};

struct RunConfig {
  std::string document;
  std::string out_dir = "out";
  TaggerSettings tagger;
  LLMSettings llm;
  ValidationPolicy policy = ValidationPolicy::kLenient;
  AlignmentSettings alignment;
  EmbeddingSettings embedding;
  EvaluationSettings evaluation;

  bool operator==(const RunConfig &) const = default;

  // Throws ConfigError naming the first out-of-range field.
  void validate() const;
};

// Snapshot without secrets. from_json(to_json(c)) == c for any validated
// config with empty secrets.
nlohmann::ordered_json to_json(const RunConfig &c);

// Missing keys take defaults; unknown keys and out-of-range values throw
// ConfigError.
RunConfig run_config_from_json(const nlohmann::json &j);
RunConfig load_run_config(const std::filesystem::path &path);

using EnvLookup = std::function<std::optional<std::string>(const char *)>;

// RTE_LLM_ENDPOINT, RTE_LLM_API_KEY, RTE_TAGGER_ENDPOINT,
// RTE_EMBEDDING_ENDPOINT, RTE_EMBEDDING_API_KEY.
void apply_env_overrides(RunConfig &c, const EnvLookup &env);
std::optional<std::string> process_env(const char *name);

}  // namespace rte

#endif  // RTE_CONFIG_H_
