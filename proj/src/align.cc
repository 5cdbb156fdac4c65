#include "rte/align.h"

#include <algorithm>
#include <numeric>

#include "rte/errors.h"
#include "rte/text.h"

namespace rte {

namespace {

std::size_t find_root(std::vector<std::size_t> &parent, std::size_t x) {
  while (parent[x] != x) {
    parent[x] = parent[parent[x]];
    x = parent[x];
  }
  return x;
}

const std::string &mapped(const MergeMap &m, const std::string &label) {
  auto it = m.mapping.find(label);
  return it == m.mapping.end() ? label : it->second;
}

}  // namespace

nlohmann::ordered_json to_json(const MergeMap &m) {
  nlohmann::ordered_json mapping = nlohmann::ordered_json::object();
  for (const auto &[from, to] : m.mapping) mapping[from] = to;
  return {{"threshold", m.threshold},
          {"backend", m.backend},
          {"mapping", std::move(mapping)}};
}

MergeMap merge_map_from_json(const nlohmann::json &j) {
  MergeMap m;
  try {
    m.threshold = j.at("threshold").get<double>();
    m.backend = j.at("backend").get<std::string>();
    m.mapping = j.at("mapping").get<std::map<std::string, std::string>>();
  } catch (const nlohmann::json::exception &e) {
    throw FormatError(std::string("malformed merge map: ") + e.what());
  }
  return m;
}

std::string canonical_label(const std::vector<const Node *> &cluster) {
  if (cluster.empty()) throw ConfigError("canonical_label of empty cluster");
  const Node *best = cluster.front();
  auto key = [](const Node *n) {
    return std::make_tuple(-static_cast<long long>(n->provenance.size()),
                           text::to_u32(n->label).size(), n->label);
  };
  for (const Node *n : cluster) {
    if (key(n) < key(best)) best = n;
  }
  return best->label;
}

AlignResult align_nodes(const ScaffoldGraph &graph,
                        SimilarityProvider &similarity, double threshold) {
  if (!(threshold > 0.0 && threshold <= 1.0)) {
    throw ConfigError("merge threshold must be in (0, 1], got " +
                      std::to_string(threshold));
  }
  std::vector<const Node *> terms;
  for (const auto &n : graph.nodes()) {
    if (n.kind == NodeKind::kTerm) terms.push_back(&n);
  }
  std::vector<std::string> labels;
  for (const Node *n : terms) labels.push_back(n->label);
  similarity.prepare(labels);

  std::vector<std::size_t> parent(terms.size());
  std::iota(parent.begin(), parent.end(), 0);
  for (std::size_t i = 0; i < terms.size(); ++i) {
    for (std::size_t j = i + 1; j < terms.size(); ++j) {
      if (similarity.similarity(labels[i], labels[j]) >= threshold) {
        const std::size_t a = find_root(parent, i);
        const std::size_t b = find_root(parent, j);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
      }
    }
  }

  std::map<std::size_t, std::vector<const Node *>> clusters;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    clusters[find_root(parent, i)].push_back(terms[i]);
  }
  MergeMap m;
  m.threshold = threshold;
  m.backend = similarity.id();
  for (const auto &[root, members] : clusters) {
    const std::string canon = canonical_label(members);
    for (const Node *n : members) m.mapping[n->label] = canon;
  }
  return {apply_merge_map(graph, m), std::move(m)};
}

ScaffoldGraph apply_merge_map(const ScaffoldGraph &graph, const MergeMap &m) {
  ScaffoldGraph out;
  for (const auto &n : graph.nodes()) {
    Node copy = n;
    if (n.kind == NodeKind::kTerm) copy.label = mapped(m, n.label);
    out.add_node(copy);
  }
  for (const auto &e : graph.edges()) {
    Edge copy = e;
    copy.subject = mapped(m, e.subject);
    copy.object = mapped(m, e.object);
    out.add_edge(copy);
  }
  for (const auto &id : graph.orphan_ids()) out.mark_orphan(id);
  return out;
}

}  // namespace rte
