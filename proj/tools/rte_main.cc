// rte: extract an ontology scaffold from a standards document and evaluate
// it against gold sets.

#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "rte/align.h"
#include "rte/config.h"
#include "rte/errors.h"
#include "rte/eval.h"
#include "rte/graph.h"
#include "rte/io.h"
#include "rte/pipeline.h"
#include "rte/text.h"

namespace fs = std::filesystem;

namespace {

std::string_view stage_of(rte::ExitCode code) {
  using rte::ExitCode;
  switch (code) {
    case ExitCode::kConfig: return "config";
    case ExitCode::kInputEncoding:
    case ExitCode::kEmptyDocument: return "ingest";
    case ExitCode::kTaggerUnavailable: return "mine";
    case ExitCode::kLLMUnavailable:
    case ExitCode::kCassetteMiss: return "infer";
    case ExitCode::kSimilarityUnavailable: return "similarity";
    case ExitCode::kFormat: return "load";
    case ExitCode::kIO: return "io";
    default: return "internal";
  }
}

// Flags shared by the commands that take a run configuration.
struct CommonOptions {
  std::string config_path;
  std::string out;
};

rte::RunConfig base_config(const CommonOptions &opts) {
  rte::RunConfig c;
  if (!opts.config_path.empty()) c = rte::load_run_config(opts.config_path);
  rte::apply_env_overrides(c, rte::process_env);
  if (!opts.out.empty()) c.out_dir = opts.out;
  return c;
}

struct ExtractOptions {
  std::string document;
  std::string replay;
  std::string record;
  bool live = false;
  std::string endpoint;
  std::string model;
  std::string policy;
  std::string tagger;
  std::string tagger_endpoint;
  bool no_tagger_fallback = false;
  std::optional<int> max_in_flight;
};

int cmd_extract(const CommonOptions &common, const ExtractOptions &opts) {
  rte::RunConfig c = base_config(common);
  if (!opts.document.empty()) c.document = opts.document;
  if (c.document.empty()) throw rte::ConfigError("no --document given");
  if (!opts.replay.empty()) {
    c.llm.mode = rte::LLMMode::kReplay;
    c.llm.cassette = opts.replay;
  } else if (!opts.record.empty()) {
    c.llm.mode = rte::LLMMode::kRecord;
    c.llm.cassette = opts.record;
  } else if (opts.live) {
    c.llm.mode = rte::LLMMode::kLive;
  }
  if (!opts.endpoint.empty()) c.llm.endpoint = opts.endpoint;
  if (!opts.model.empty()) c.llm.relation.model_name = opts.model;
  if (!opts.policy.empty()) c.policy = rte::parse_policy(opts.policy);
  if (!opts.tagger.empty()) c.tagger.mode = rte::parse_tagger_mode(opts.tagger);
  if (!opts.tagger_endpoint.empty()) c.tagger.endpoint = opts.tagger_endpoint;
  if (opts.no_tagger_fallback) c.tagger.fallback = false;
  if (opts.max_in_flight) c.llm.relation.max_in_flight = *opts.max_in_flight;
  c.validate();

  if (c.llm.mode == rte::LLMMode::kRecord && fs::exists(c.llm.cassette)) {
    throw rte::ConfigError("refusing to record into existing cassette " +
                           c.llm.cassette);
  }

  const std::string started = rte::timestamp_now(rte::process_env);
  const std::string source = rte::io::read_file(c.document);
  auto tagger = rte::make_tagger(c.tagger, [](const std::string &msg) {
    spdlog::warn("tagger: {}", msg);
  });
  auto client = rte::make_llm_client(c.llm);
  spdlog::info("extract: {} (tagger {}, llm {})", c.document, tagger->name(),
               rte::llm_mode_name(c.llm.mode));

  const rte::ExtractResult result =
      rte::run_extract(source, fs::path(c.document).stem().string(), *tagger,
                       *client, c.llm.relation, c.policy);

  rte::ManifestInfo info;
  info.input_path = c.document;
  info.input_sha256 = rte::text::sha256_hex(source);
  if (c.llm.mode == rte::LLMMode::kReplay) {
    info.cassette_sha256 =
        rte::text::sha256_hex(rte::io::read_file(c.llm.cassette));
  }
  info.tagger = tagger->name();
  info.started_at = started;
  info.finished_at = rte::timestamp_now(rte::process_env);
  const auto manifest = rte::build_manifest(c, info, result.counts);
  rte::write_extract_artifacts(result, manifest, c.out_dir);

  const auto &n = result.counts;
  spdlog::info(
      "sentences {} = skipped {} + orphaned {} + with triples {}; triples "
      "raw {} validated {} rejected {}",
      n.sentences, n.gated_skips, n.orphans, n.sentences_with_batches,
      n.triples_raw, n.triples_validated, n.triples_rejected);
  spdlog::info("graph: {} nodes, {} edges, {} islands -> {}", n.nodes, n.edges,
               n.islands, (fs::path(c.out_dir) / "graph.json").string());
  return 0;
}

rte::ScaffoldGraph read_graph(const std::string &path) {
  const auto j =
      nlohmann::json::parse(rte::io::read_file(path), nullptr, false);
  if (j.is_discarded()) throw rte::FormatError(path + ": invalid JSON");
  return rte::graph_from_json(j);
}

struct SimilarityOptions {
  std::string backend;
  std::string embedding_cassette;
  std::string embedding_endpoint;
  std::string embedding_model;
};

void apply_similarity_options(rte::EmbeddingSettings &e,
                              const SimilarityOptions &opts) {
  if (!opts.embedding_cassette.empty()) e.cassette = opts.embedding_cassette;
  if (!opts.embedding_endpoint.empty()) e.endpoint = opts.embedding_endpoint;
  if (!opts.embedding_model.empty()) e.model = opts.embedding_model;
}

struct AlignOptions {
  std::string graph;
  std::optional<double> threshold;
  SimilarityOptions sim;
};

int cmd_align(const CommonOptions &common, const AlignOptions &opts) {
  rte::RunConfig c = base_config(common);
  if (opts.threshold) c.alignment.threshold = *opts.threshold;
  if (!opts.sim.backend.empty()) {
    c.alignment.backend = rte::parse_similarity_backend(opts.sim.backend);
  }
  apply_similarity_options(c.embedding, opts.sim);
  c.validate();

  const rte::ScaffoldGraph graph = read_graph(opts.graph);
  auto sim = rte::make_similarity(c.alignment.backend, c.embedding);
  spdlog::info("align: threshold {} backend {}", c.alignment.threshold,
               sim->id());
  const auto result = rte::align_nodes(graph, *sim, c.alignment.threshold);
  const fs::path out = c.out_dir;
  rte::io::write_file(out / "aligned_graph.json",
                      rte::export_graph(result.graph, rte::ExportFormat::kJson));
  rte::io::write_file(out / "merge_map.json",
                      rte::to_json(result.merge_map).dump(2) + "\n");
  spdlog::info("align: {} -> {} nodes", graph.nodes().size(),
               result.graph.nodes().size());
  return 0;
}

struct EvalOptions {
  std::string pred;
  std::vector<std::string> golds;
  std::vector<double> taus;
  bool charts = false;
  SimilarityOptions sim;
};

std::string slug(std::string_view s) {
  std::string out;
  for (unsigned char ch : s) {
    out.push_back(std::isalnum(ch) || ch == '-' || ch == '_' ? ch : '_');
  }
  return out;
}

int cmd_eval(const CommonOptions &common, const EvalOptions &opts,
             bool out_given) {
  rte::RunConfig c = base_config(common);
  if (!opts.sim.backend.empty()) {
    c.evaluation.backend = rte::parse_similarity_backend(opts.sim.backend);
  }
  if (!opts.taus.empty()) c.evaluation.taus = opts.taus;
  apply_similarity_options(c.embedding, opts.sim);
  c.validate();
  if (opts.charts && !out_given) {
    throw rte::ConfigError("--charts needs --out");
  }

  const rte::PredictionSet pred = rte::load_prediction(opts.pred);
  std::vector<rte::GoldSet> golds;
  for (const auto &g : opts.golds) golds.push_back(rte::load_gold(g));
  auto sim = rte::make_similarity(c.evaluation.backend, c.embedding);
  const auto taus =
      c.evaluation.taus.empty() ? rte::default_taus() : c.evaluation.taus;
  const rte::SweepResult result = rte::sweep(pred, golds, *sim, taus);
  const std::string csv = rte::to_csv(result);

  if (!out_given) {
    std::cout << csv;
    return 0;
  }
  const fs::path out = c.out_dir;
  rte::io::write_file(out / "sweep.csv", csv);
  if (opts.charts) {
    for (rte::Level level : {rte::Level::kNode, rte::Level::kTriple}) {
      for (const auto &g : golds) {
        std::vector<rte::SweepRow> rows;
        for (const auto &r : result.rows) {
          if (r.level == level && r.gold == g.name) rows.push_back(r);
        }
        const std::string name =
            std::string(rte::level_name(level)) + "_" + slug(g.name);
        rte::io::write_file(out / "charts" / (name + ".svg"),
                            rte::render_svg(rows, name + " (" + sim->id() + ")"));
      }
    }
  }
  spdlog::info("eval: {} rows -> {}", result.rows.size(),
               (out / "sweep.csv").string());
  return 0;
}

struct StatsOptions {
  std::vector<std::string> graphs;
  bool table = false;
};

int cmd_stats(const StatsOptions &opts) {
  if (!opts.table) {
    if (opts.graphs.size() != 1) {
      throw rte::ConfigError("stats takes one graph unless --table is given");
    }
    std::cout << rte::to_json(rte::stats(read_graph(opts.graphs.front())))
                     .dump()
              << '\n';
    return 0;
  }
  std::cout << "| Graph | #Nodes | #Triples | #Islands |\n"
            << "|---|---:|---:|---:|\n";
  for (const auto &path : opts.graphs) {
    const auto s = rte::stats(read_graph(path));
    std::cout << "| " << fs::path(path).stem().string() << " | "
              << s.node_count << " | " << s.triple_count << " | "
              << s.island_count << " |\n";
  }
  return 0;
}

struct ExportOptions {
  std::string graph;
  std::string format = "json";
};

int cmd_export(const ExportOptions &opts, const std::string &out) {
  const auto format = rte::parse_export_format(opts.format);
  const std::string data = rte::export_graph(read_graph(opts.graph), format);
  if (out.empty()) {
    std::cout << data;
  } else {
    rte::io::write_file(fs::path(out) / ("graph." + opts.format), data);
  }
  return 0;
}

}  // namespace

int main(int argc, char **argv) {
  auto logger = spdlog::stderr_color_mt("rte");
  logger->set_pattern("%^%l%$: %v");
  spdlog::set_default_logger(logger);

  CLI::App app{"Relation triple extraction and ontology scaffold evaluation"};
  app.require_subcommand(1);
  bool quiet = false;
  app.add_flag("-q,--quiet", quiet, "Only log warnings and errors");

  CommonOptions common;
  auto add_common = [&](CLI::App *cmd) {
    cmd->add_option("--config", common.config_path, "Run configuration JSON")
        ->check(CLI::ExistingFile);
    cmd->add_option("--out", common.out, "Output directory");
  };

  ExtractOptions ex;
  auto *extract = app.add_subcommand("extract", "Build a scaffold graph");
  add_common(extract);
  extract->add_option("--document", ex.document, "Input text document");
  auto *replay =
      extract->add_option("--replay", ex.replay, "Replay LLM cassette");
  auto *record =
      extract->add_option("--record", ex.record, "Record LLM cassette");
  auto *live = extract->add_flag("--live", ex.live, "Call the LLM directly");
  replay->excludes(record)->excludes(live);
  record->excludes(live);
  extract->add_option("--endpoint", ex.endpoint, "Chat-completions URL");
  extract->add_option("--model", ex.model, "Model name");
  extract->add_option("--policy", ex.policy, "strict or lenient");
  extract->add_option("--tagger", ex.tagger, "builtin or remote");
  extract->add_option("--tagger-endpoint", ex.tagger_endpoint,
                      "Tagger service base URL");
  extract->add_flag("--no-tagger-fallback", ex.no_tagger_fallback,
                    "Fail instead of using the builtin tagger");
  extract->add_option("--max-in-flight", ex.max_in_flight,
                      "Concurrent LLM calls");

  auto add_similarity = [](CLI::App *cmd, SimilarityOptions &s) {
    cmd->add_option("--backend", s.backend, "trigram, exact or embedding");
    cmd->add_option("--embedding-cassette", s.embedding_cassette,
                    "Recorded embeddings (JSON Lines)");
    cmd->add_option("--embedding-endpoint", s.embedding_endpoint,
                    "Embedding service URL");
    cmd->add_option("--embedding-model", s.embedding_model,
                    "Embedding model name");
  };

  AlignOptions al;
  auto *align = app.add_subcommand("align", "Merge near-duplicate term nodes");
  add_common(align);
  align->add_option("--graph", al.graph, "Graph JSON")
      ->required()
      ->check(CLI::ExistingFile);
  align->add_option("--threshold", al.threshold, "Merge threshold in (0, 1]");
  add_similarity(align, al.sim);

  EvalOptions ev;
  auto *eval = app.add_subcommand("eval", "Threshold sweep against gold sets");
  add_common(eval);
  eval->add_option("--pred", ev.pred, "Graph JSON or triples JSON Lines")
      ->required();
  eval->add_option("--gold", ev.golds, "Gold set JSON (repeatable)")
      ->required();
  eval->add_option("--taus", ev.taus, "Thresholds, ascending")->delimiter(',');
  eval->add_flag("--charts", ev.charts, "Write SVG charts under --out");
  add_similarity(eval, ev.sim);

  StatsOptions st;
  auto *stats_cmd = app.add_subcommand("stats", "Node, triple, island counts");
  stats_cmd->add_option("--graph", st.graphs, "Graph JSON (repeatable)")
      ->required();
  stats_cmd->add_flag("--table", st.table, "Print a Markdown table");

  ExportOptions xp;
  std::string export_out;
  auto *export_cmd = app.add_subcommand("export", "Convert a graph");
  export_cmd->add_option("--graph", xp.graph, "Graph JSON")->required();
  export_cmd->add_option("--format", xp.format, "json, dot or csv");
  export_cmd->add_option("--out", export_out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : static_cast<int>(rte::ExitCode::kConfig);
  }
  if (quiet) spdlog::set_level(spdlog::level::warn);

  try {
    if (extract->parsed()) return cmd_extract(common, ex);
    if (align->parsed()) return cmd_align(common, al);
    if (eval->parsed()) return cmd_eval(common, ev, !common.out.empty());
    if (stats_cmd->parsed()) return cmd_stats(st);
    if (export_cmd->parsed()) return cmd_export(xp, export_out);
  } catch (const rte::Error &e) {
    spdlog::error("[{}] {}", stage_of(e.code()), e.what());
    return static_cast<int>(e.code());
  } catch (const std::exception &e) {
    spdlog::error("[internal] {}", e.what());
    return static_cast<int>(rte::ExitCode::kInternal);
  }
  return static_cast<int>(rte::ExitCode::kInternal);
}
