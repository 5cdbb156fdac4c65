#ifndef RTE_GRAPH_H_
#define RTE_GRAPH_H_

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "rte/normalize.h"
#include "rte/relation.h"

namespace rte {

enum class NodeKind { kTerm, kOrphanSentence };

std::string_view node_kind_name(NodeKind k);

struct Node {
  std::string label;
  NodeKind kind = NodeKind::kTerm;
  // One entry per mention; repeats are kept.
  std::vector<std::string> provenance;

  bool operator==(const Node &) const = default;
};

struct Edge {
  std::string subject;
  std::string predicate;
  std::string object;
  std::vector<Provenance> provenance;
  std::set<std::string> flags;

  bool operator==(const Edge &) const = default;
};

struct GraphStats {
  std::size_t node_count = 0;
  std::size_t triple_count = 0;
  std::size_t island_count = 0;

  bool operator==(const GraphStats &) const = default;
};

nlohmann::ordered_json to_json(const GraphStats &s);

// An orphan sentence as handed to insert_orphans.
struct OrphanInput {
  std::string sentence_id;
  std::string text;
};

// Ontology scaffold G = (V, E). Nodes are unique by case-folded label; edges
// keep insertion order and exact duplicates (same subject, predicate,
// object) merge their provenance.
class ScaffoldGraph {
 public:
  void add_triple(const ValidatedTriple &t);

  // Adds each orphan whose normalized text is not already a node label as
  // an isolated orphan_sentence node. Returns the number of nodes added.
  std::size_t insert_orphans(const std::vector<OrphanInput> &orphans);

  // Low-level insertion used by import and alignment. Merges provenance when
  // the label exists.
  void add_node(const Node &node);
  void add_edge(const Edge &edge);
  void mark_orphan(const std::string &sentence_id);

  const std::vector<Node> &nodes() const { return nodes_; }
  const std::vector<Edge> &edges() const { return edges_; }
  const std::set<std::string> &orphan_ids() const { return orphan_ids_; }

  const Node *find_node(std::string_view label) const;
  bool has_node(std::string_view label) const { return find_node(label); }

  // Number of add_triple calls, before duplicate merging.
  std::size_t raw_assertion_count() const { return raw_assertions_; }

  // Equality under the data model: same node set (with kinds and
  // provenance), same edge sequence, same orphan ids.
  bool operator==(const ScaffoldGraph &other) const;

 private:
  Node &upsert_node(const std::string &label, NodeKind kind);

  std::vector<Node> nodes_;
  std::unordered_map<std::string, std::size_t> node_index_;
  std::vector<Edge> edges_;
  std::map<std::tuple<std::string, std::string, std::string>, std::size_t>
      edge_index_;
  std::set<std::string> orphan_ids_;
  std::size_t raw_assertions_ = 0;
};

// Connected components of the undirected view.
std::size_t island_count(const ScaffoldGraph &graph);

GraphStats stats(const ScaffoldGraph &graph);

enum class ExportFormat { kJson, kDot, kCsv };

// Throws ConfigError for anything but json, dot or csv.
ExportFormat parse_export_format(std::string_view name);

// json: canonical (nodes sorted by label, edges in document order).
// dot: directed graph, predicates as edge labels, isolated nodes listed.
// csv: header plus one row per edge (subject,predicate,object,sentence_id).
std::string export_graph(const ScaffoldGraph &graph, ExportFormat format);

nlohmann::ordered_json to_json(const ScaffoldGraph &graph);

// Inverse of the json export. Throws FormatError.
ScaffoldGraph graph_from_json(const nlohmann::json &j);

}  // namespace rte

#endif  // RTE_GRAPH_H_
