#include "rte/graph.h"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "rte/errors.h"
#include "rte/text.h"

namespace rte {

namespace {

// Path-halving union-find over node indices.
class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent_[std::max(a, b)] = std::min(a, b);
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
};

std::string dot_quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') {
      out.push_back('\\');
      out.push_back(c);
    } else if (c == '\n') {
      out += "\\n";
    } else {
      out.push_back(c);
    }
  }
  out.push_back('"');
  return out;
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) {
    return std::string(s);
  }
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::vector<const Node *> sorted_nodes(const ScaffoldGraph &g) {
  std::vector<const Node *> out;
  for (const auto &n : g.nodes()) out.push_back(&n);
  std::sort(out.begin(), out.end(),
            [](const Node *a, const Node *b) { return a->label < b->label; });
  return out;
}

}  // namespace

std::string_view node_kind_name(NodeKind k) {
  return k == NodeKind::kTerm ? "term" : "orphan_sentence";
}

nlohmann::ordered_json to_json(const GraphStats &s) {
  return {{"nodes", s.node_count},
          {"triples", s.triple_count},
          {"islands", s.island_count}};
}

Node &ScaffoldGraph::upsert_node(const std::string &label, NodeKind kind) {
  const std::string key = text::case_fold(label);
  auto it = node_index_.find(key);
  if (it != node_index_.end()) return nodes_[it->second];
  node_index_.emplace(key, nodes_.size());
  nodes_.push_back({label, kind, {}});
  return nodes_.back();
}

void ScaffoldGraph::add_triple(const ValidatedTriple &t) {
  ++raw_assertions_;
  upsert_node(t.subject, NodeKind::kTerm)
      .provenance.push_back(t.provenance.sentence_id);
  if (text::case_fold(t.object) != text::case_fold(t.subject)) {
    upsert_node(t.object, NodeKind::kTerm)
        .provenance.push_back(t.provenance.sentence_id);
  }
  add_edge({t.subject, t.predicate, t.object, {t.provenance}, t.flags});
}

void ScaffoldGraph::add_node(const Node &node) {
  Node &n = upsert_node(node.label, node.kind);
  n.provenance.insert(n.provenance.end(), node.provenance.begin(),
                      node.provenance.end());
}

void ScaffoldGraph::add_edge(const Edge &edge) {
  upsert_node(edge.subject, NodeKind::kTerm);
  upsert_node(edge.object, NodeKind::kTerm);
  auto key = std::make_tuple(edge.subject, edge.predicate, edge.object);
  auto it = edge_index_.find(key);
  if (it != edge_index_.end()) {
    Edge &e = edges_[it->second];
    e.provenance.insert(e.provenance.end(), edge.provenance.begin(),
                        edge.provenance.end());
    e.flags.insert(edge.flags.begin(), edge.flags.end());
    return;
  }
  edge_index_.emplace(std::move(key), edges_.size());
  edges_.push_back(edge);
}

void ScaffoldGraph::mark_orphan(const std::string &sentence_id) {
  orphan_ids_.insert(sentence_id);
}

std::size_t ScaffoldGraph::insert_orphans(
    const std::vector<OrphanInput> &orphans) {
  std::size_t added = 0;
  for (const auto &o : orphans) {
    const std::string label = normalize_term(o.text);
    if (label.empty() || has_node(label)) continue;
    upsert_node(label, NodeKind::kOrphanSentence)
        .provenance.push_back(o.sentence_id);
    orphan_ids_.insert(o.sentence_id);
    ++added;
  }
  return added;
}

const Node *ScaffoldGraph::find_node(std::string_view label) const {
  auto it = node_index_.find(text::case_fold(label));
  return it == node_index_.end() ? nullptr : &nodes_[it->second];
}

bool ScaffoldGraph::operator==(const ScaffoldGraph &other) const {
  if (nodes_.size() != other.nodes_.size() || edges_ != other.edges_ ||
      orphan_ids_ != other.orphan_ids_) {
    return false;
  }
  auto a = sorted_nodes(*this);
  auto b = sorted_nodes(other);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!(*a[i] == *b[i])) return false;
  }
  return true;
}

std::size_t island_count(const ScaffoldGraph &graph) {
  const auto &nodes = graph.nodes();
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    index.emplace(text::case_fold(nodes[i].label), i);
  }
  DisjointSets sets(nodes.size());
  std::size_t components = nodes.size();
  for (const auto &e : graph.edges()) {
    if (sets.unite(index.at(text::case_fold(e.subject)),
                   index.at(text::case_fold(e.object)))) {
      --components;
    }
  }
  return components;
}

GraphStats stats(const ScaffoldGraph &graph) {
  return {graph.nodes().size(), graph.edges().size(), island_count(graph)};
}

ExportFormat parse_export_format(std::string_view name) {
  if (name == "json") return ExportFormat::kJson;
  if (name == "dot") return ExportFormat::kDot;
  if (name == "csv") return ExportFormat::kCsv;
  throw ConfigError("unknown export format: " + std::string(name));
}

nlohmann::ordered_json to_json(const ScaffoldGraph &graph) {
  nlohmann::ordered_json nodes = nlohmann::ordered_json::array();
  for (const Node *n : sorted_nodes(graph)) {
    nodes.push_back({{"label", n->label},
                     {"kind", node_kind_name(n->kind)},
                     {"provenance", n->provenance}});
  }
  nlohmann::ordered_json edges = nlohmann::ordered_json::array();
  for (const auto &e : graph.edges()) {
    nlohmann::ordered_json prov = nlohmann::ordered_json::array();
    for (const auto &p : e.provenance) {
      prov.push_back(
          {{"sentence_id", p.sentence_id},
           {"section", p.section_label ? nlohmann::ordered_json(*p.section_label)
                                       : nlohmann::ordered_json()}});
    }
    edges.push_back({{"subject", e.subject},
                     {"predicate", e.predicate},
                     {"object", e.object},
                     {"provenance", prov},
                     {"flags", e.flags}});
  }
  nlohmann::ordered_json out;
  out["nodes"] = std::move(nodes);
  out["edges"] = std::move(edges);
  out["orphan_ids"] = graph.orphan_ids();
  return out;
}

ScaffoldGraph graph_from_json(const nlohmann::json &j) {
  ScaffoldGraph g;
  try {
    for (const auto &n : j.at("nodes")) {
      Node node;
      node.label = n.at("label").get<std::string>();
      const std::string kind = n.value("kind", "term");
      if (kind == "term") {
        node.kind = NodeKind::kTerm;
      } else if (kind == "orphan_sentence") {
        node.kind = NodeKind::kOrphanSentence;
      } else {
        throw FormatError("unknown node kind: " + kind);
      }
      if (n.contains("provenance")) {
        node.provenance = n.at("provenance").get<std::vector<std::string>>();
      }
      if (g.has_node(node.label)) {
        throw FormatError("duplicate node label: " + node.label);
      }
      g.add_node(node);
    }
    for (const auto &e : j.at("edges")) {
      Edge edge;
      edge.subject = e.at("subject").get<std::string>();
      edge.predicate = e.at("predicate").get<std::string>();
      edge.object = e.at("object").get<std::string>();
      if (!g.has_node(edge.subject) || !g.has_node(edge.object)) {
        throw FormatError("edge endpoint missing from nodes: " + edge.subject +
                          " -> " + edge.object);
      }
      if (e.contains("provenance")) {
        for (const auto &p : e.at("provenance")) {
          Provenance prov;
          prov.sentence_id = p.at("sentence_id").get<std::string>();
          if (p.contains("section") && !p.at("section").is_null()) {
            prov.section_label = p.at("section").get<std::string>();
          }
          edge.provenance.push_back(std::move(prov));
        }
      }
      if (e.contains("flags")) {
        edge.flags = e.at("flags").get<std::set<std::string>>();
      }
      g.add_edge(edge);
    }
    if (j.contains("orphan_ids")) {
      for (const auto &id : j.at("orphan_ids")) {
        g.mark_orphan(id.get<std::string>());
      }
    }
  } catch (const nlohmann::json::exception &e) {
    throw FormatError(std::string("malformed graph JSON: ") + e.what());
  }
  return g;
}

std::string export_graph(const ScaffoldGraph &graph, ExportFormat format) {
  std::ostringstream out;
  switch (format) {
    case ExportFormat::kJson:
      out << to_json(graph).dump(2) << '\n';
      break;
    case ExportFormat::kDot:
      out << "digraph scaffold {\n";
      for (const Node *n : sorted_nodes(graph)) {
        out << "  " << dot_quote(n->label);
        if (n->kind == NodeKind::kOrphanSentence) out << " [style=dashed]";
        out << ";\n";
      }
      for (const auto &e : graph.edges()) {
        out << "  " << dot_quote(e.subject) << " -> " << dot_quote(e.object)
            << " [label=" << dot_quote(e.predicate) << "];\n";
      }
      out << "}\n";
      break;
    case ExportFormat::kCsv:
      out << "subject,predicate,object,sentence_id\n";
      for (const auto &e : graph.edges()) {
        out << csv_field(e.subject) << ',' << csv_field(e.predicate) << ','
            << csv_field(e.object) << ','
            << csv_field(e.provenance.empty() ? ""
                                              : e.provenance.front().sentence_id)
            << '\n';
      }
      break;
  }
  return out.str();
}

}  // namespace rte
