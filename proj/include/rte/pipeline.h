#ifndef RTE_PIPELINE_H_
#define RTE_PIPELINE_H_

#include <cstddef>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rte/config.h"
#include "rte/corpus.h"
#include "rte/graph.h"
#include "rte/llm.h"
#include "rte/normalize.h"
#include "rte/relation.h"
#include "rte/similarity.h"
#include "rte/tagger.h"

namespace rte {

struct StageCounts {
  std::size_t sentences = 0;
  std::size_t gated_skips = 0;
  std::size_t orphans = 0;
  std::map<std::string, std::size_t> orphans_by_reason;
  std::size_t sentences_with_batches = 0;
  std::size_t llm_attempts = 0;
  int max_attempts_used = 0;
  std::size_t triples_raw = 0;
  std::size_t triples_validated = 0;
  std::size_t triples_rejected = 0;
  std::size_t orphan_nodes_inserted = 0;
  std::size_t nodes = 0;
  std::size_t edges = 0;
  std::size_t islands = 0;

  // sentences == gated_skips + orphans + sentences_with_batches.
  bool reconciles() const;
};

nlohmann::ordered_json to_json(const StageCounts &c);

struct ExtractResult {
  SegmentedDocument document;
  std::vector<SentenceOutcome> outcomes;  // point into `document`
  ScaffoldGraph graph;
  std::vector<Rejection> rejections;
  StageCounts counts;
};

// ingest -> mine -> infer -> validate -> assemble -> insert orphans.
ExtractResult run_extract(std::string_view source, const std::string &doc_id,
                          const Tagger &tagger, LLMClient &client,
                          const RelationConfig &relation,
                          ValidationPolicy policy);

// One JSON Lines record per sentence: gate, outcome, candidates, attempts.
std::string sentence_log(const ExtractResult &result);

struct ManifestInfo {
  std::string input_path;
  std::string input_sha256;
  std::optional<std::string> cassette_sha256;
  std::string tagger;
  std::string started_at;
  std::string finished_at;
};

nlohmann::ordered_json build_manifest(const RunConfig &config,
                                      const ManifestInfo &info,
                                      const StageCounts &counts);

// ISO 8601 UTC. Uses SOURCE_DATE_EPOCH when set so that replayed runs write
// identical manifests.
std::string timestamp_now(const EnvLookup &env);

// Writes graph.json, document.json, rejections.jsonl, sentences.jsonl and
// manifest.json under `out_dir`.
void write_extract_artifacts(const ExtractResult &result,
                             const nlohmann::ordered_json &manifest,
                             const std::filesystem::path &out_dir);

std::unique_ptr<Tagger> make_tagger(const TaggerSettings &settings,
                                    FallbackTagger::WarnFn warn);

// Replay loads the cassette; record wraps a live client and appends to it;
// live talks to the endpoint directly.
std::unique_ptr<LLMClient> make_llm_client(const LLMSettings &settings);

std::unique_ptr<SimilarityProvider> make_similarity(
    SimilarityBackend backend, const EmbeddingSettings &embedding);

}  // namespace rte

#endif  // RTE_PIPELINE_H_
