#include "rte/eval.h"

#include <algorithm>
#include <cstdio>
#include <sstream>
#include <unordered_set>

#include "rte/errors.h"
#include "rte/io.h"
#include "rte/text.h"

namespace rte {

namespace {

void check_tau(double tau) {
  if (!(tau > 0.0 && tau <= 1.0)) {
    throw ConfigError("tau must be in (0, 1], got " + std::to_string(tau));
  }
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
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

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

void push_unique(std::vector<std::string> &out,
                 std::unordered_set<std::string> &seen, const std::string &s) {
  if (seen.insert(s).second) out.push_back(s);
}

RawTriple triple_from_json(const nlohmann::json &j) {
  if (!j.is_object()) throw std::invalid_argument("expected an object");
  RawTriple t;
  for (auto [key, field] : {std::pair{"subject", &t.subject},
                            std::pair{"predicate", &t.predicate},
                            std::pair{"object", &t.object}}) {
    if (!j.contains(key) || !j.at(key).is_string()) {
      throw std::invalid_argument(std::string("missing string field \"") +
                                  key + "\"");
    }
    *field = j.at(key).get<std::string>();
  }
  return t;
}

std::vector<RawTriple> parse_triples_jsonl(std::string_view data,
                                           const std::string &name) {
  std::vector<RawTriple> out;
  std::size_t lineno = 0;
  std::size_t pos = 0;
  while (pos < data.size()) {
    std::size_t nl = data.find('\n', pos);
    if (nl == std::string_view::npos) nl = data.size();
    const std::string_view line = data.substr(pos, nl - pos);
    pos = nl + 1;
    ++lineno;
    if (text::trim(line).empty()) continue;
    try {
      out.push_back(triple_from_json(nlohmann::json::parse(line)));
    } catch (const std::exception &e) {
      throw FormatError(name + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace

std::string triple_string(const RawTriple &t) {
  return t.subject + " " + t.predicate + " " + t.object;
}

SimilarityMatrix similarity_matrix(const std::vector<std::string> &pred,
                                   const std::vector<std::string> &gold,
                                   SimilarityProvider &provider) {
  std::vector<std::string> all = pred;
  all.insert(all.end(), gold.begin(), gold.end());
  provider.prepare(all);
  SimilarityMatrix m(pred.size(), std::vector<double>(gold.size()));
  for (std::size_t i = 0; i < pred.size(); ++i) {
    for (std::size_t j = 0; j < gold.size(); ++j) {
      m[i][j] = provider.similarity(pred[i], gold[j]);
    }
  }
  return m;
}

std::vector<Match> greedy_align(const SimilarityMatrix &sim, double tau) {
  check_tau(tau);
  std::vector<Match> pairs;
  std::size_t n_gold = 0;
  for (std::size_t i = 0; i < sim.size(); ++i) {
    n_gold = std::max(n_gold, sim[i].size());
    for (std::size_t j = 0; j < sim[i].size(); ++j) {
      if (sim[i][j] >= tau) pairs.push_back({i, j, sim[i][j]});
    }
  }
  std::sort(pairs.begin(), pairs.end(), [](const Match &a, const Match &b) {
    if (a.similarity != b.similarity) return a.similarity > b.similarity;
    if (a.pred != b.pred) return a.pred < b.pred;
    return a.gold < b.gold;
  });
  std::vector<bool> pred_used(sim.size());
  std::vector<bool> gold_used(n_gold);
  std::vector<Match> out;
  for (const Match &m : pairs) {
    if (pred_used[m.pred] || gold_used[m.gold]) continue;
    pred_used[m.pred] = true;
    gold_used[m.gold] = true;
    out.push_back(m);
  }
  return out;
}

std::vector<Match> greedy_align(const std::vector<std::string> &pred,
                                const std::vector<std::string> &gold,
                                SimilarityProvider &provider, double tau) {
  check_tau(tau);
  return greedy_align(similarity_matrix(pred, gold, provider), tau);
}

std::string_view level_name(Level l) {
  return l == Level::kNode ? "node" : "triple";
}

Scores score(std::size_t matched, std::size_t pred_count,
             std::size_t gold_count) {
  Scores s;
  if (pred_count > 0) s.precision = static_cast<double>(matched) / pred_count;
  if (gold_count > 0) s.recall = static_cast<double>(matched) / gold_count;
  if (s.precision + s.recall > 0.0) {
    s.f1 = 2.0 * s.precision * s.recall / (s.precision + s.recall);
  }
  return s;
}

std::vector<std::string> PredictionSet::items(Level level) const {
  if (level == Level::kNode) return nodes;
  std::vector<std::string> out;
  out.reserve(triples.size());
  for (const auto &t : triples) out.push_back(triple_string(t));
  return out;
}

PredictionSet prediction_from_graph(const ScaffoldGraph &graph) {
  PredictionSet p;
  for (const auto &n : graph.nodes()) p.nodes.push_back(n.label);
  for (const auto &e : graph.edges()) {
    p.triples.push_back({e.subject, e.predicate, e.object});
  }
  return p;
}

PredictionSet prediction_from_triples(const std::vector<RawTriple> &triples) {
  PredictionSet p;
  p.triples = triples;
  std::unordered_set<std::string> seen;
  for (const auto &t : triples) {
    push_unique(p.nodes, seen, t.subject);
    push_unique(p.nodes, seen, t.object);
  }
  return p;
}

std::vector<std::string> GoldSet::nodes() const {
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  for (const auto &n : extra_nodes) push_unique(out, seen, n);
  for (const auto &t : triples) {
    push_unique(out, seen, t.subject);
    push_unique(out, seen, t.object);
  }
  return out;
}

std::vector<std::string> GoldSet::items(Level level) const {
  if (level == Level::kNode) return nodes();
  std::vector<std::string> out;
  out.reserve(triples.size());
  for (const auto &t : triples) out.push_back(triple_string(t));
  return out;
}

SweepRow evaluate_level(const PredictionSet &pred, const GoldSet &gold,
                        Level level, SimilarityProvider &provider,
                        double tau) {
  const auto p = pred.items(level);
  const auto g = gold.items(level);
  const std::size_t matched = greedy_align(p, g, provider, tau).size();
  const Scores s = score(matched, p.size(), g.size());
  return {level,       gold.name, tau,     s.precision, s.recall,
          s.f1,        matched,   p.size(), g.size()};
}

std::vector<double> default_taus() {
  std::vector<double> taus;
  for (int i = 0; i <= 16; ++i) taus.push_back((10 + 5 * i) / 100.0);
  return taus;
}

SweepResult sweep(const PredictionSet &pred, const std::vector<GoldSet> &golds,
                  SimilarityProvider &provider,
                  const std::vector<double> &taus) {
  for (std::size_t i = 0; i < taus.size(); ++i) {
    check_tau(taus[i]);
    if (i > 0 && !(taus[i] > taus[i - 1])) {
      throw ConfigError("taus must be strictly increasing");
    }
  }
  SweepResult result;
  for (Level level : {Level::kNode, Level::kTriple}) {
    const auto p = pred.items(level);
    for (const auto &gold : golds) {
      const auto g = gold.items(level);
      const SimilarityMatrix sim = similarity_matrix(p, g, provider);
      for (double tau : taus) {
        const std::size_t matched = greedy_align(sim, tau).size();
        const Scores s = score(matched, p.size(), g.size());
        result.rows.push_back({level, gold.name, tau, s.precision, s.recall,
                               s.f1, matched, p.size(), g.size()});
      }
    }
  }
  return result;
}

std::string to_csv(const SweepResult &result) {
  std::ostringstream out;
  out << "level,gold,tau,precision,recall,f1,matched,pred_count,gold_count\n";
  for (const auto &r : result.rows) {
    out << level_name(r.level) << ',' << csv_field(r.gold) << ','
        << fixed(r.tau, 2) << ',' << fixed(r.precision, 12) << ','
        << fixed(r.recall, 12) << ',' << fixed(r.f1, 12) << ',' << r.matched
        << ',' << r.pred_count << ',' << r.gold_count << '\n';
  }
  return out.str();
}

std::string render_svg(const std::vector<SweepRow> &rows,
                       const std::string &title) {
  constexpr double kWidth = 480, kHeight = 320;
  constexpr double kLeft = 50, kRight = 20, kTop = 36, kBottom = 40;
  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  auto x_of = [&](double tau) { return kLeft + tau * pw; };
  auto y_of = [&](double v) { return kTop + (1.0 - v) * ph; };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" font-family=\"sans-serif\" "
      << "font-size=\"11\">\n";
  out << "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "  <text x=\"" << kWidth / 2 << "\" y=\"20\" text-anchor=\"middle\" "
      << "font-size=\"13\">" << xml_escape(title) << "</text>\n";
  out << "  <line x1=\"" << kLeft << "\" y1=\"" << y_of(0) << "\" x2=\""
      << x_of(1) << "\" y2=\"" << y_of(0) << "\" stroke=\"black\"/>\n";
  out << "  <line x1=\"" << kLeft << "\" y1=\"" << y_of(0) << "\" x2=\""
      << kLeft << "\" y2=\"" << y_of(1) << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 10; i += 2) {
    const double v = i / 10.0;
    out << "  <text x=\"" << fixed(x_of(v), 1) << "\" y=\""
        << fixed(y_of(0) + 16, 1) << "\" text-anchor=\"middle\">"
        << fixed(v, 1) << "</text>\n";
    out << "  <text x=\"" << fixed(kLeft - 6, 1) << "\" y=\""
        << fixed(y_of(v) + 4, 1) << "\" text-anchor=\"end\">" << fixed(v, 1)
        << "</text>\n";
  }
  out << "  <text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 6
      << "\" text-anchor=\"middle\">tau</text>\n";

  struct Series {
    const char *name;
    const char *color;
    double SweepRow::*field;
  };
  const Series series[] = {{"precision", "#1f77b4", &SweepRow::precision},
                           {"recall", "#d62728", &SweepRow::recall},
                           {"f1", "#2ca02c", &SweepRow::f1}};
  int legend = 0;
  for (const auto &s : series) {
    out << "  <polyline fill=\"none\" stroke=\"" << s.color
        << "\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i) out << ' ';
      out << fixed(x_of(rows[i].tau), 2) << ','
          << fixed(y_of(rows[i].*s.field), 2);
    }
    out << "\"/>\n";
    const double ly = kTop + 12 + 14 * legend++;
    out << "  <text x=\"" << fixed(x_of(1) - 60, 1) << "\" y=\""
        << fixed(ly, 1) << "\" fill=\"" << s.color << "\">" << s.name
        << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

std::vector<RawTriple> load_triples(const std::filesystem::path &path) {
  return parse_triples_jsonl(io::read_file(path), path.string());
}

GoldSet load_gold(const std::filesystem::path &path) {
  const std::string data = io::read_file(path);
  GoldSet g;
  try {
    const auto j = nlohmann::json::parse(data);
    g.name = j.at("name").get<std::string>();
    for (const auto &t : j.at("triples")) g.triples.push_back(triple_from_json(t));
    if (j.contains("extra_nodes")) {
      g.extra_nodes = j.at("extra_nodes").get<std::vector<std::string>>();
    }
  } catch (const std::exception &e) {
    throw FormatError(path.string() + ": malformed gold set: " + e.what());
  }
  return g;
}

PredictionSet load_prediction(const std::filesystem::path &path) {
  const std::string data = io::read_file(path);
  const auto whole = nlohmann::json::parse(data, nullptr, false);
  if (!whole.is_discarded() && whole.is_object() && whole.contains("nodes")) {
    return prediction_from_graph(graph_from_json(whole));
  }
  return prediction_from_triples(parse_triples_jsonl(data, path.string()));
}

}  // namespace rte
