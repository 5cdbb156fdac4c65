#ifndef RTE_ALIGN_H_
#define RTE_ALIGN_H_

#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rte/graph.h"
#include "rte/similarity.h"

namespace rte {

// Original term label -> canonical label. Canonical labels map to
// themselves.
struct MergeMap {
  std::map<std::string, std::string> mapping;
  double threshold = 0.0;
  std::string backend;

  bool operator==(const MergeMap &) const = default;
};

nlohmann::ordered_json to_json(const MergeMap &m);
MergeMap merge_map_from_json(const nlohmann::json &j);

// Label with the most provenance entries; ties go to the shorter label
// (in code points), then the lexicographically smaller one.
std::string canonical_label(const std::vector<const Node *> &cluster);

struct AlignResult {
  ScaffoldGraph graph;
  MergeMap merge_map;
};

// Single-link clustering of term nodes: every pair with similarity >=
// threshold is joined. Orphan-sentence nodes are left alone. Throws
// ConfigError unless threshold is in (0, 1].
AlignResult align_nodes(const ScaffoldGraph &graph,
                        SimilarityProvider &similarity, double threshold);

// Relabels nodes and edge endpoints, merging nodes that land on the same
// label and edges that become identical. Labels absent from the map are
// kept.
ScaffoldGraph apply_merge_map(const ScaffoldGraph &graph, const MergeMap &m);

}  // namespace rte

#endif  // RTE_ALIGN_H_
