#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>

#include <nlohmann/json.hpp>

#include "test_util.h"

using rte::testing::fixture;
using rte::testing::slurp;
using rte::testing::TempDir;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

// Runs the CLI with stderr discarded and captures stdout.
Run cli(const std::string &args) {
  const std::string cmd =
      std::string("\"") + RTE_CLI_PATH + "\" -q " + args + " 2>/dev/null";
  Run r;
  FILE *p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string q(const std::filesystem::path &p) { return "\"" + p.string() + "\""; }

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("extract replay writes artifacts") {
    TempDir d;
    const auto r = cli("extract --document " + q(fixture("secepp_short.txt")) +
                       " --replay " + q(fixture("secepp_cassette.jsonl")) +
                       " --out " + q(d / "out"));
    CHECK(r.code == 0);
    CHECK(slurp(d / "out" / "graph.json") == slurp(fixture("secepp_graph.json")));
    const auto m = nlohmann::json::parse(slurp(d / "out" / "manifest.json"));
    CHECK(m["counts"]["sentences"] == 20);
    CHECK(m["cassette_sha256"].is_string());
  }

  TEST_CASE("cassette miss exits 8") {
    TempDir d;
    std::ofstream(d / "empty.jsonl") << "";
    const auto r = cli("extract --document " + q(fixture("secepp_short.txt")) +
                       " --replay " + q(d / "empty.jsonl") + " --out " +
                       q(d / "out"));
    CHECK(r.code == 8);
  }

  TEST_CASE("empty document exits 4 and bad encoding exits 3") {
    TempDir d;
    std::ofstream(d / "empty.txt") << "\n\n";
    std::ofstream(d / "bad.txt") << "bad \xff\n";
    const std::string tail =
        " --replay " + q(fixture("secepp_cassette.jsonl")) + " --out " + q(d / "o");
    CHECK(cli("extract --document " + q(d / "empty.txt") + tail).code == 4);
    CHECK(cli("extract --document " + q(d / "bad.txt") + tail).code == 3);
  }

  TEST_CASE("record refuses an existing cassette") {
    const auto r = cli("extract --document " + q(fixture("secepp_short.txt")) +
                       " --record " + q(fixture("secepp_cassette.jsonl")));
    CHECK(r.code == 2);
  }

  TEST_CASE("unreachable llm exits 7") {
    TempDir d;
    const auto r = cli("extract --document " + q(fixture("secepp_short.txt")) +
                       " --live --endpoint http://127.0.0.1:9/v1 --out " +
                       q(d / "o"));
    CHECK(r.code == 7);
  }

  TEST_CASE("align: bad threshold exits 2, identity at 1.0 exact") {
    TempDir d;
    CHECK(cli("align --graph " + q(fixture("secepp_graph.json")) +
              " --threshold 0 --out " + q(d / "o"))
              .code == 2);
    CHECK(cli("align --graph " + q(fixture("secepp_graph.json")) +
              " --threshold 1.0 --backend exact --out " + q(d / "o"))
              .code == 0);
    CHECK(slurp(d / "o" / "aligned_graph.json") ==
          slurp(fixture("secepp_graph.json")));
    const auto m = nlohmann::json::parse(slurp(d / "o" / "merge_map.json"));
    for (const auto &[k, v] : m["mapping"].items()) CHECK(k == v.get<std::string>());
  }

  TEST_CASE("eval: golden sweep, missing and malformed gold") {
    const auto r = cli("eval --pred " + q(fixture("secepp_graph.json")) +
                       " --gold " + q(fixture("gold_mini.json")));
    CHECK(r.code == 0);
    CHECK(r.out == slurp(fixture("sweep_golden.csv")));

    TempDir d;
    CHECK(cli("eval --pred " + q(fixture("secepp_graph.json")) + " --gold " +
              q(d / "none.json"))
              .code == 10);
    std::ofstream(d / "bad.json") << R"({"name":"x","triples":[{"subject":"a"}]})";
    CHECK(cli("eval --pred " + q(fixture("secepp_graph.json")) + " --gold " +
              q(d / "bad.json"))
              .code == 5);
    CHECK(cli("eval --pred " + q(fixture("secepp_graph.json")) + " --gold " +
              q(fixture("gold_mini.json")) + " --taus 0.5,0.4")
              .code == 2);
  }

  TEST_CASE("eval writes csv and charts") {
    TempDir d;
    const auto r = cli("eval --pred " + q(fixture("secepp_graph.json")) +
                       " --gold " + q(fixture("gold_mini.json")) +
                       " --taus 0.3,0.6 --charts --out " + q(d / "o"));
    CHECK(r.code == 0);
    const auto csv = slurp(d / "o" / "sweep.csv");
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);
    CHECK(std::filesystem::exists(d / "o" / "charts" / "node_gold-mini.svg"));
    CHECK(std::filesystem::exists(d / "o" / "charts" / "triple_gold-mini.svg"));
  }

  TEST_CASE("eval with replayed embeddings") {
    const auto r = cli("eval --pred " + q(fixture("secepp_graph.json")) +
                       " --gold " + q(fixture("gold_mini.json")) +
                       " --backend embedding --embedding-cassette " +
                       q(fixture("secepp_embeddings.jsonl")));
    CHECK(r.code == 0);
    CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 35);
  }

  TEST_CASE("stats json and table") {
    const auto r = cli("stats --graph " + q(fixture("secepp_graph.json")));
    CHECK(r.code == 0);
    CHECK(r.out == "{\"nodes\":30,\"triples\":26,\"islands\":5}\n");
    const auto t = cli("stats --table --graph " + q(fixture("secepp_graph.json")));
    CHECK(t.out ==
          "| Graph | #Nodes | #Triples | #Islands |\n|---|---:|---:|---:|\n"
          "| secepp_graph | 30 | 26 | 5 |\n");
  }

  TEST_CASE("stats on an empty graph") {
    TempDir d;
    std::ofstream(d / "g.json") << R"({"nodes":[],"edges":[],"orphan_ids":[]})";
    CHECK(cli("stats --graph " + q(d / "g.json")).out ==
          "{\"nodes\":0,\"triples\":0,\"islands\":0}\n");
  }

  TEST_CASE("export formats") {
    const auto g = q(fixture("secepp_graph.json"));
    const auto csv = cli("export --graph " + g + " --format csv");
    CHECK(csv.code == 0);
    CHECK(std::count(csv.out.begin(), csv.out.end(), '\n') == 27);
    const auto dot = cli("export --graph " + g + " --format dot");
    CHECK(dot.out.starts_with("digraph"));
    CHECK(cli("export --graph " + g + " --format json").out ==
          slurp(fixture("secepp_graph.json")));
    CHECK(cli("export --graph " + g + " --format ttl").code == 2);
  }

  TEST_CASE("usage errors") {
    CHECK(cli("").code == 2);
    CHECK(cli("frobnicate").code == 2);
    CHECK(cli("--help").code == 0);
    CHECK(cli("extract --replay a --live --document x").code == 2);
  }
}
