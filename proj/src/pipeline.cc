#include "rte/pipeline.h"

#include <chrono>
#include <ctime>
#include <sstream>
#include <unordered_map>

#include "rte/errors.h"
#include "rte/io.h"
#include "rte/terms.h"

namespace rte {

namespace {

std::string_view gate_name(GateDecision g) {
  switch (g) {
    case GateDecision::kProceed: return "proceed";
    case GateDecision::kSkip: return "skip";
    case GateDecision::kOrphan: return "orphan";
  }
  return "skip";
}

std::string iso8601(std::time_t t) {
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

bool StageCounts::reconciles() const {
  return sentences == gated_skips + orphans + sentences_with_batches;
}

nlohmann::ordered_json to_json(const StageCounts &c) {
  nlohmann::ordered_json by_reason = nlohmann::ordered_json::object();
  for (OrphanReason r : {OrphanReason::kNoVerbs, OrphanReason::kEmptyResult,
                         OrphanReason::kParseFailure}) {
    const std::string name(orphan_reason_name(r));
    auto it = c.orphans_by_reason.find(name);
    by_reason[name] = it == c.orphans_by_reason.end() ? 0 : it->second;
  }
  return {{"sentences", c.sentences},
          {"gated_skips", c.gated_skips},
          {"orphans", c.orphans},
          {"orphans_by_reason", by_reason},
          {"sentences_with_batches", c.sentences_with_batches},
          {"llm_attempts", c.llm_attempts},
          {"max_attempts_used", c.max_attempts_used},
          {"triples_raw", c.triples_raw},
          {"triples_validated", c.triples_validated},
          {"triples_rejected", c.triples_rejected},
          {"orphan_nodes_inserted", c.orphan_nodes_inserted},
          {"nodes", c.nodes},
          {"edges", c.edges},
          {"islands", c.islands}};
}

ExtractResult run_extract(std::string_view source, const std::string &doc_id,
                          const Tagger &tagger, LLMClient &client,
                          const RelationConfig &relation,
                          ValidationPolicy policy) {
  ExtractResult r;
  r.document = load_document(source, doc_id);

  std::vector<CandidateSet> candidates;
  std::unordered_map<std::string, std::optional<std::string>> sections;
  for (const auto &p : r.document.paragraphs) {
    for (const auto &s : p.sentences) {
      candidates.push_back(mine_candidates(s, tagger));
      sections.emplace(s.sentence_id, p.section_label);
    }
  }

  r.outcomes = run_relation_stage(r.document, candidates, client, relation);

  StageCounts &c = r.counts;
  std::vector<OrphanInput> orphans;
  for (const auto &o : r.outcomes) {
    ++c.sentences;
    if (const auto *batch = std::get_if<RawTripleBatch>(&o.result)) {
      ++c.sentences_with_batches;
      c.llm_attempts += batch->attempts_used;
      c.max_attempts_used = std::max(c.max_attempts_used, batch->attempts_used);
      for (const auto &raw : batch->triples) {
        ++c.triples_raw;
        auto v = validate_triple(raw, o.candidates, policy,
                                 sections.at(o.sentence->sentence_id));
        if (auto *t = std::get_if<ValidatedTriple>(&v)) {
          ++c.triples_validated;
          r.graph.add_triple(*t);
        } else {
          ++c.triples_rejected;
          r.rejections.push_back(std::get<Rejection>(std::move(v)));
        }
      }
    } else if (const auto *orphan = std::get_if<OrphanMark>(&o.result)) {
      ++c.orphans;
      ++c.orphans_by_reason[std::string(orphan_reason_name(orphan->reason))];
      c.llm_attempts += orphan->attempts_used;
      c.max_attempts_used = std::max(c.max_attempts_used, orphan->attempts_used);
      orphans.push_back({orphan->sentence_id, orphan->text});
    } else {
      ++c.gated_skips;
    }
  }
  c.orphan_nodes_inserted = r.graph.insert_orphans(orphans);
  const GraphStats gs = stats(r.graph);
  c.nodes = gs.node_count;
  c.edges = gs.triple_count;
  c.islands = gs.island_count;
  return r;
}

std::string sentence_log(const ExtractResult &result) {
  std::ostringstream out;
  for (const auto &o : result.outcomes) {
    nlohmann::ordered_json j;
    j["sentence_id"] = o.sentence->sentence_id;
    j["gate"] = gate_name(o.gate);
    j["terms"] = o.candidates.terms;
    j["verbs"] = o.candidates.verbs;
    if (const auto *b = std::get_if<RawTripleBatch>(&o.result)) {
      j["outcome"] = "batch";
      j["attempts_used"] = b->attempts_used;
      j["triples"] = b->triples.size();
    } else if (const auto *m = std::get_if<OrphanMark>(&o.result)) {
      j["outcome"] = "orphan";
      j["reason"] = orphan_reason_name(m->reason);
      j["attempts_used"] = m->attempts_used;
    } else {
      j["outcome"] = "skipped";
    }
    out << j.dump() << '\n';
  }
  return out.str();
}

nlohmann::ordered_json build_manifest(const RunConfig &config,
                                      const ManifestInfo &info,
                                      const StageCounts &counts) {
  nlohmann::ordered_json j;
  j["config"] = to_json(config);
  j["input"] = {{"path", info.input_path}, {"sha256", info.input_sha256}};
  j["cassette_sha256"] = info.cassette_sha256
                             ? nlohmann::ordered_json(*info.cassette_sha256)
                             : nlohmann::ordered_json();
  j["tagger"] = info.tagger;
  j["counts"] = to_json(counts);
  j["started_at"] = info.started_at;
  j["finished_at"] = info.finished_at;
  return j;
}

std::string timestamp_now(const EnvLookup &env) {
  if (auto v = env("SOURCE_DATE_EPOCH")) {
    try {
      std::size_t used = 0;
      const long long secs = std::stoll(*v, &used);
      if (used == v->size() && secs >= 0) {
        return iso8601(static_cast<std::time_t>(secs));
      }
    } catch (const std::exception &) {
    }
    throw ConfigError("SOURCE_DATE_EPOCH is not a non-negative integer: " + *v);
  }
  return iso8601(std::chrono::system_clock::to_time_t(
      std::chrono::system_clock::now()));
}

void write_extract_artifacts(const ExtractResult &result,
                             const nlohmann::ordered_json &manifest,
                             const std::filesystem::path &out_dir) {
  io::write_file(out_dir / "graph.json",
                 export_graph(result.graph, ExportFormat::kJson));
  io::write_file(out_dir / "document.json",
                 to_json(result.document).dump(2) + "\n");
  std::string rejections;
  for (const auto &r : result.rejections) rejections += to_json(r).dump() + "\n";
  io::write_file(out_dir / "rejections.jsonl", rejections);
  io::write_file(out_dir / "sentences.jsonl", sentence_log(result));
  io::write_file(out_dir / "manifest.json", manifest.dump(2) + "\n");
}

std::unique_ptr<Tagger> make_tagger(const TaggerSettings &settings,
                                    FallbackTagger::WarnFn warn) {
  if (settings.mode == TaggerMode::kBuiltin) {
    return std::make_unique<BuiltinTagger>();
  }
  auto remote = std::make_unique<RemoteTagger>(
      settings.endpoint, std::chrono::milliseconds(settings.timeout_ms));
  if (!settings.fallback) return remote;
  return std::make_unique<FallbackTagger>(
      std::move(remote), std::make_unique<BuiltinTagger>(), std::move(warn));
}

std::unique_ptr<LLMClient> make_llm_client(const LLMSettings &settings) {
  const auto timeout = std::chrono::milliseconds(settings.timeout_ms);
  switch (settings.mode) {
    case LLMMode::kReplay:
      return std::make_unique<ReplayClient>(Cassette::load(settings.cassette));
    case LLMMode::kRecord:
      return std::make_unique<RecordingClient>(
          std::make_unique<ChatCompletionsClient>(settings.endpoint,
                                                  settings.api_key, timeout),
          settings.cassette);
    case LLMMode::kLive:
      return std::make_unique<ChatCompletionsClient>(settings.endpoint,
                                                     settings.api_key, timeout);
  }
  throw ConfigError("unknown LLM mode");
}

std::unique_ptr<SimilarityProvider> make_similarity(
    SimilarityBackend backend, const EmbeddingSettings &embedding) {
  switch (backend) {
    case SimilarityBackend::kTrigram:
      return std::make_unique<TrigramSimilarity>();
    case SimilarityBackend::kExact:
      return std::make_unique<ExactSimilarity>();
    case SimilarityBackend::kEmbedding: {
      std::unique_ptr<EmbeddingSource> source;
      if (!embedding.cassette.empty()) {
        source = std::make_unique<EmbeddingCassette>(
            EmbeddingCassette::load(embedding.cassette));
      } else {
        source = std::make_unique<RemoteEmbeddingSource>(
            embedding.endpoint, embedding.model, embedding.api_key,
            std::chrono::milliseconds(embedding.timeout_ms));
      }
      return std::make_unique<EmbeddingSimilarity>(std::move(source));
    }
  }
  throw ConfigError("unknown similarity backend");
}

}  // namespace rte
