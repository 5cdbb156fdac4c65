#ifndef RTE_EVAL_H_
#define RTE_EVAL_H_

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rte/graph.h"
#include "rte/relation.h"
#include "rte/similarity.h"

namespace rte {

// subject + " " + predicate + " " + object. Not injective when fields
// contain spaces.
std::string triple_string(const RawTriple &t);

using SimilarityMatrix = std::vector<std::vector<double>>;

// m[i][j] = similarity(pred[i], gold[j]).
SimilarityMatrix similarity_matrix(const std::vector<std::string> &pred,
                                   const std::vector<std::string> &gold,
                                   SimilarityProvider &provider);

struct Match {
  std::size_t pred = 0;
  std::size_t gold = 0;
  double similarity = 0.0;

  bool operator==(const Match &) const = default;
};

// Greedy one-to-one alignment: repeatedly take the highest-similarity pair
// of unmatched items with similarity >= tau, ties by lower pred index then
// lower gold index. Matches are returned in selection order. Throws
// ConfigError unless tau is in (0, 1].
std::vector<Match> greedy_align(const SimilarityMatrix &sim, double tau);
std::vector<Match> greedy_align(const std::vector<std::string> &pred,
                                const std::vector<std::string> &gold,
                                SimilarityProvider &provider, double tau);

enum class Level { kNode, kTriple };

std::string_view level_name(Level l);

struct Scores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// P = matched/pred, R = matched/gold, F1 = 2PR/(P+R); each 0 when its
// denominator is 0.
Scores score(std::size_t matched, std::size_t pred_count,
             std::size_t gold_count);

struct SweepRow {
  Level level = Level::kNode;
  std::string gold;
  double tau = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t matched = 0;
  std::size_t pred_count = 0;
  std::size_t gold_count = 0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
};

struct PredictionSet {
  std::vector<std::string> nodes;
  std::vector<RawTriple> triples;

  std::vector<std::string> items(Level level) const;
};

// Nodes are every node label (orphans included); triples are the edges.
PredictionSet prediction_from_graph(const ScaffoldGraph &graph);
// Nodes are the distinct endpoint labels in first-seen order.
PredictionSet prediction_from_triples(const std::vector<RawTriple> &triples);

struct GoldSet {
  std::string name;
  std::vector<RawTriple> triples;
  std::vector<std::string> extra_nodes;

  // extra_nodes followed by triple endpoints, exact duplicates removed.
  std::vector<std::string> nodes() const;
  std::vector<std::string> items(Level level) const;
};

SweepRow evaluate_level(const PredictionSet &pred, const GoldSet &gold,
                        Level level, SimilarityProvider &provider, double tau);

// 0.10, 0.15, ..., 0.90.
std::vector<double> default_taus();

// Rows ordered by level (node, triple), then gold, then tau. Throws
// ConfigError unless taus are strictly increasing and each in (0, 1].
SweepResult sweep(const PredictionSet &pred, const std::vector<GoldSet> &golds,
                  SimilarityProvider &provider,
                  const std::vector<double> &taus = default_taus());

// Header level,gold,tau,precision,recall,f1,matched,pred_count,gold_count.
std::string to_csv(const SweepResult &result);

// Line chart of P, R and F1 against tau for the rows of one (level, gold).
std::string render_svg(const std::vector<SweepRow> &rows,
                       const std::string &title);

// JSON Lines of {"subject","predicate","object"} with optional
// "sentence_id" and "section". Throws FormatError naming the line.
std::vector<RawTriple> load_triples(const std::filesystem::path &path);
GoldSet load_gold(const std::filesystem::path &path);
// Graph JSON or triples JSON Lines, detected from content.
PredictionSet load_prediction(const std::filesystem::path &path);

}  // namespace rte

#endif  // RTE_EVAL_H_
