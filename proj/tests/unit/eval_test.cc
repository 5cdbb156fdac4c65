#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.h"
#include "rte/errors.h"
#include "rte/eval.h"
#include "rte/similarity.h"
#include "test_util.h"

using namespace rte;
using rte::testing::TempDir;

namespace {

// Looks up similarities in a fixed table keyed by item text.
class TableSimilarity : public SimilarityProvider {
 public:
  explicit TableSimilarity(std::map<std::pair<std::string, std::string>, double> t)
      : t_(std::move(t)) {}
  double similarity(std::string_view a, std::string_view b) const override {
    auto it = t_.find({std::string(a), std::string(b)});
    if (it != t_.end()) return it->second;
    it = t_.find({std::string(b), std::string(a)});
    return it != t_.end() ? it->second : (a == b ? 1.0 : 0.0);
  }
  std::string id() const override { return "table"; }

 private:
  std::map<std::pair<std::string, std::string>, double> t_;
};

SimilarityMatrix random_matrix(std::mt19937 &rng, std::size_t r, std::size_t c) {
  std::uniform_int_distribution<int> d(0, 20);
  SimilarityMatrix m(r, std::vector<double>(c));
  for (auto &row : m) {
    for (auto &v : row) v = d(rng) / 20.0;
  }
  return m;
}

void write(const std::filesystem::path &p, const std::string &s) {
  std::ofstream(p, std::ios::binary) << s;
}

}  // namespace

TEST_SUITE("similarity") {
  TEST_CASE("trigram identities") {
    TrigramSimilarity t;
    CHECK(t.similarity("x", "x") == 1.0);
    CHECK(t.similarity("abc", "xyz") == 0.0);
    CHECK(t.similarity("Public  Interest", "public interest") == 1.0);
  }

  TEST_CASE("trigram regression constant") {
    // 16 / sqrt(17 * 21), from an independent trigram count.
    TrigramSimilarity t;
    CHECK(t.similarity("public interest", "the public interest") ==
          doctest::Approx(0.846809798439941).epsilon(1e-12));
  }

  TEST_CASE("trigram counts use two-space padding") {
    const auto c = trigram_counts("ab");
    CHECK(c.size() == 4);
    CHECK(c.at(U"  a") == 1);
    CHECK(c.at(U"b  ") == 1);
  }

  TEST_CASE("symmetry and range") {
    TrigramSimilarity t;
    std::mt19937 rng(11);
    const std::string alphabet = "abcde fgh";
    for (int i = 0; i < 200; ++i) {
      std::string a, b;
      for (int k = 0; k < 1 + static_cast<int>(rng() % 12); ++k) a += alphabet[rng() % alphabet.size()];
      for (int k = 0; k < 1 + static_cast<int>(rng() % 12); ++k) b += alphabet[rng() % alphabet.size()];
      const double ab = t.similarity(a, b);
      CHECK(ab == t.similarity(b, a));
      CHECK(ab >= 0.0);
      CHECK(ab <= 1.0);
    }
  }

  TEST_CASE("exact backend") {
    ExactSimilarity e;
    CHECK(e.similarity("A  b", "a b") == 1.0);
    CHECK(e.similarity("a", "b") == 0.0);
  }

  TEST_CASE("clamped cosine") {
    CHECK(clamped_cosine({1, 0}, {-1, 0}) == 0.0);
    CHECK(clamped_cosine({1, 1}, {2, 2}) == doctest::Approx(1.0));
    CHECK(clamped_cosine({0, 0}, {1, 0}) == 0.0);
    CHECK_THROWS_AS(clamped_cosine({1}, {1, 0}), SimilarityUnavailableError);
  }

  TEST_CASE("embedding similarity from a cassette") {
    auto cassette = std::make_unique<EmbeddingCassette>();
    cassette->add("a", {1, 0});
    cassette->add("b", {0.6, 0.8});
    EmbeddingSimilarity s(std::move(cassette));
    CHECK(s.similarity("a", "b") == doctest::Approx(0.6));
    CHECK(s.similarity("zzz", "zzz") == 1.0);
    CHECK_THROWS_AS(s.similarity("a", "missing"), SimilarityUnavailableError);
  }
}

TEST_SUITE("eval") {
  TEST_CASE("triple_string") {
    CHECK(triple_string({"a", "b", "c"}) == "a b c");
    CHECK(triple_string({"a  b", "c", "d"}) == "a  b c d");
    CHECK(triple_string({"a b", "c", "d"}) == triple_string({"a", "b c", "d"}));
  }

  TEST_CASE("score arithmetic") {
    const auto s = score(2, 3, 4);
    CHECK(s.precision == doctest::Approx(2.0 / 3.0));
    CHECK(s.recall == doctest::Approx(0.5));
    CHECK(s.f1 == doctest::Approx(4.0 / 7.0));
  }

  TEST_CASE("zero conventions") {
    const auto empty = score(0, 0, 5);
    CHECK(empty.precision == 0.0);
    CHECK(empty.recall == 0.0);
    CHECK(empty.f1 == 0.0);
    CHECK(score(0, 0, 0).f1 == 0.0);
    CHECK(score(0, 3, 3).f1 == 0.0);
    CHECK(score(3, 3, 3).f1 == 1.0);
  }

  TEST_CASE("greedy examples") {
    ExactSimilarity e;
    CHECK(greedy_align({"x"}, {"x"}, e, 1.0).size() == 1);
    CHECK(greedy_align({"x"}, {"x"}, e, 0.1).size() == 1);
    CHECK(greedy_align({"a", "b"}, {"a", "b"}, e, 0.5).size() == 2);
  }

  TEST_CASE("greedy picks highest first with index tie-breaks") {
    const SimilarityMatrix m = {{0.9, 0.8}, {0.9, 0.1}};
    const auto g = greedy_align(m, 0.05);
    REQUIRE(g.size() == 2);
    CHECK(g[0] == Match{0, 0, 0.9});
    CHECK(g[1] == Match{1, 1, 0.1});
  }

  TEST_CASE("greedy rejects bad tau") {
    CHECK_THROWS_AS(greedy_align(SimilarityMatrix{}, 0.0), ConfigError);
    CHECK_THROWS_AS(greedy_align(SimilarityMatrix{}, 1.5), ConfigError);
    CHECK(greedy_align(SimilarityMatrix{}, 0.5).empty());
  }

  TEST_CASE("greedy against brute force on 3x3") {
    std::mt19937 rng(5);
    for (int trial = 0; trial < 100; ++trial) {
      const auto m = random_matrix(rng, 3, 3);
      const double tau = 0.05 + (rng() % 19) * 0.05;
      const auto g = greedy_align(m, tau);
      std::set<std::size_t> ps, gs;
      for (const auto &x : g) {
        CHECK(ps.insert(x.pred).second);
        CHECK(gs.insert(x.gold).second);
        CHECK(x.similarity >= tau);
        CHECK(m[x.pred][x.gold] == x.similarity);
      }
      CHECK(g.size() <= rte::testing::brute_force_max_alignment(m, tau));
    }
  }

  TEST_CASE("matched counts non-increasing in tau") {
    std::mt19937 rng(9);
    for (int trial = 0; trial < 20; ++trial) {
      const auto m = random_matrix(rng, 1 + rng() % 8, 1 + rng() % 8);
      std::size_t prev = SIZE_MAX;
      for (double tau : default_taus()) {
        const auto n = greedy_align(m, tau).size();
        CHECK(n <= prev);
        prev = n;
      }
    }
  }

  TEST_CASE("default taus") {
    const auto t = default_taus();
    REQUIRE(t.size() == 17);
    CHECK(t.front() == doctest::Approx(0.10));
    CHECK(t.back() == doctest::Approx(0.90));
    CHECK(t[1] == doctest::Approx(0.15));
  }

  TEST_CASE("self evaluation is perfect") {
    PredictionSet p = prediction_from_triples(
        {{"a", "uses", "b"}, {"b", "owns", "c"}, {"c", "uses", "a"}});
    GoldSet g{"self", {{"a", "uses", "b"}, {"b", "owns", "c"}, {"c", "uses", "a"}}, {}};
    TrigramSimilarity t;
    const auto r = sweep(p, {g}, t);
    CHECK(r.rows.size() == 34);
    for (const auto &row : r.rows) {
      CHECK(row.precision == 1.0);
      CHECK(row.recall == 1.0);
      CHECK(row.f1 == 1.0);
    }
  }

  TEST_CASE("empty prediction scores zero") {
    GoldSet g{"g", {{"a", "b", "c"}}, {}};
    TrigramSimilarity t;
    const auto row = evaluate_level(PredictionSet{}, g, Level::kTriple, t, 0.5);
    CHECK(row.precision == 0.0);
    CHECK(row.recall == 0.0);
    CHECK(row.f1 == 0.0);
    CHECK(row.gold_count == 1);
  }

  TEST_CASE("swapping pred and gold swaps precision and recall") {
    const std::vector<RawTriple> a = {{"engineer", "maintain", "integrity"},
                                      {"client", "trust", "engineer"},
                                      {"product", "meet", "standard"}};
    const std::vector<RawTriple> b = {{"engineers", "maintain", "integrity"},
                                      {"employer", "pay", "engineer"}};
    TrigramSimilarity t;
    for (double tau : {0.3, 0.6, 0.9}) {
      const auto ab = evaluate_level(prediction_from_triples(a), {"b", b, {}},
                                     Level::kTriple, t, tau);
      const auto ba = evaluate_level(prediction_from_triples(b), {"a", a, {}},
                                     Level::kTriple, t, tau);
      CHECK(ab.precision == ba.recall);
      CHECK(ab.recall == ba.precision);
      CHECK(ab.f1 == ba.f1);
    }
  }

  TEST_CASE("table provider drives evaluate_level") {
    TableSimilarity s({{{"a", "x"}, 0.7}, {{"b", "x"}, 0.9}});
    PredictionSet p{{"a", "b"}, {}};
    GoldSet g{"g", {}, {"x"}};
    const auto row = evaluate_level(p, g, Level::kNode, s, 0.6);
    CHECK(row.matched == 1);
    CHECK(row.precision == 0.5);
    CHECK(row.recall == 1.0);
  }

  TEST_CASE("sweep rejects unordered taus") {
    TrigramSimilarity t;
    CHECK_THROWS_AS(sweep({}, {}, t, {0.5, 0.4}), ConfigError);
    CHECK_THROWS_AS(sweep({}, {}, t, {0.0, 0.4}), ConfigError);
    CHECK_THROWS_AS(sweep({}, {}, t, {0.5, 0.5}), ConfigError);
  }

  TEST_CASE("csv layout") {
    SweepResult r;
    r.rows.push_back({Level::kTriple, "g", 0.1, 2.0 / 3.0, 0.5, 4.0 / 7.0, 2, 3, 4});
    CHECK(to_csv(r) ==
          "level,gold,tau,precision,recall,f1,matched,pred_count,gold_count\n"
          "triple,g,0.10,0.666666666667,0.500000000000,0.571428571429,2,3,4\n");
  }

  TEST_CASE("svg chart") {
    std::vector<SweepRow> rows;
    for (double tau : default_taus()) {
      rows.push_back({Level::kNode, "g", tau, 1 - tau, tau, 0.5, 1, 1, 1});
    }
    const auto svg = render_svg(rows, "node vs g");
    CHECK(svg.starts_with("<svg"));
    CHECK(svg.find("node vs g") != std::string::npos);
    CHECK(svg.find("</svg>") != std::string::npos);
  }

  TEST_CASE("load_triples reads three lines") {
    TempDir d;
    write(d / "t.jsonl",
          R"({"subject":"a","predicate":"p","object":"b"})"
          "\n"
          R"({"subject":"b","predicate":"q","object":"c","sentence_id":"s1"})"
          "\n\n"
          R"({"subject":"c","predicate":"r","object":"a"})"
          "\n");
    const auto t = load_triples(d / "t.jsonl");
    REQUIRE(t.size() == 3);
    CHECK(t[1] == RawTriple{"b", "q", "c"});
  }

  TEST_CASE("missing object names the line") {
    TempDir d;
    write(d / "t.jsonl",
          R"({"subject":"a","predicate":"p","object":"b"})"
          "\n"
          R"({"subject":"a","predicate":"p"})"
          "\n");
    try {
      load_triples(d / "t.jsonl");
      FAIL("expected FormatError");
    } catch (const FormatError &e) {
      const std::string msg = e.what();
      CHECK(msg.find("t.jsonl:2:") != std::string::npos);
      CHECK(msg.find("object") != std::string::npos);
    }
  }

  TEST_CASE("gold node set") {
    TempDir d;
    write(d / "g.json", R"({"name":"g","triples":[
        {"subject":"a","predicate":"p","object":"b"},
        {"subject":"c","predicate":"q","object":"d"}],
        "extra_nodes":["e"]})");
    const auto g = load_gold(d / "g.json");
    CHECK(g.name == "g");
    CHECK(g.nodes().size() == 5);
    CHECK(g.nodes().front() == "e");
    CHECK(g.items(Level::kTriple).size() == 2);
  }

  TEST_CASE("malformed gold") {
    TempDir d;
    write(d / "g.json", R"({"name":"g","triples":[{"subject":"a"}]})");
    CHECK_THROWS_AS(load_gold(d / "g.json"), FormatError);
    write(d / "h.json", "not json");
    CHECK_THROWS_AS(load_gold(d / "h.json"), FormatError);
    CHECK_THROWS_AS(load_gold(d / "missing.json"), IOError);
  }

  TEST_CASE("prediction format detection") {
    TempDir d;
    write(d / "p.jsonl", R"({"subject":"a","predicate":"p","object":"b"})" "\n");
    const auto jl = load_prediction(d / "p.jsonl");
    CHECK(jl.triples.size() == 1);
    CHECK(jl.nodes == std::vector<std::string>{"a", "b"});
    const auto g = load_prediction(rte::testing::fixture("secepp_graph.json"));
    CHECK(g.nodes.size() == 30);
    CHECK(g.triples.size() == 26);
  }
}
