#include <doctest.h>

#include "rte/errors.h"
#include "rte/pipeline.h"
#include "test_util.h"

using namespace rte;
using rte::testing::fixture;
using rte::testing::slurp;

namespace {

ExtractResult run_fixture() {
  BuiltinTagger tagger;
  ReplayClient client(Cassette::load(fixture("secepp_cassette.jsonl")));
  return run_extract(slurp(fixture("secepp_short.txt")), "secepp_short",
                     tagger, client, RelationConfig{},
                     ValidationPolicy::kLenient);
}

}  // namespace

TEST_SUITE("pipeline") {
  TEST_CASE("fixture counts reconcile with the hand count") {
    const auto r = run_fixture();
    const auto &c = r.counts;
    CHECK(c.reconciles());
    CHECK(c.sentences == 20);
    CHECK(c.gated_skips == 1);
    CHECK(c.orphans == 3);
    CHECK(c.orphans_by_reason.at("no_verbs") == 1);
    CHECK(c.orphans_by_reason.at("empty_result") == 1);
    CHECK(c.orphans_by_reason.at("parse_failure") == 1);
    CHECK(c.sentences_with_batches == 16);
    CHECK(c.llm_attempts == 23);
    CHECK(c.max_attempts_used == 3);
    CHECK(c.triples_raw == 29);
    CHECK(c.triples_validated == 27);
    CHECK(c.triples_rejected == 2);
    CHECK(r.rejections.size() == 2);
    CHECK(c.nodes == 30);
    CHECK(c.edges == 26);
    CHECK(c.islands == 5);
  }

  TEST_CASE("fixture graph matches the frozen export") {
    const auto r = run_fixture();
    CHECK(export_graph(r.graph, ExportFormat::kJson) ==
          slurp(fixture("secepp_graph.json")));
  }

  TEST_CASE("every orphan is a node") {
    const auto r = run_fixture();
    for (const auto &o : r.outcomes) {
      if (const auto *m = std::get_if<OrphanMark>(&o.result)) {
        CHECK(r.graph.has_node(normalize_term(m->text)));
      }
    }
  }

  TEST_CASE("sentence log has one line per sentence") {
    const auto r = run_fixture();
    const auto log = sentence_log(r);
    CHECK(std::count(log.begin(), log.end(), '\n') == 20);
    CHECK(log.find(R"("outcome":"skipped")") != std::string::npos);
  }

  TEST_CASE("cassette miss propagates") {
    BuiltinTagger tagger;
    ReplayClient client{Cassette{}};
    CHECK_THROWS_AS(run_extract("Engineers act in the public interest.", "d",
                                tagger, client, RelationConfig{},
                                ValidationPolicy::kLenient),
                    CassetteMissError);
  }

  TEST_CASE("source date epoch") {
    auto env = [](const char *v) {
      return [v](const char *name) -> std::optional<std::string> {
        if (std::string(name) == "SOURCE_DATE_EPOCH") return std::string(v);
        return std::nullopt;
      };
    };
    CHECK(timestamp_now(env("0")) == "1970-01-01T00:00:00Z");
    CHECK(timestamp_now(env("1700000000")) == "2023-11-14T22:13:20Z");
    CHECK_THROWS_AS(timestamp_now(env("soon")), ConfigError);
    CHECK(timestamp_now([](const char *) { return std::nullopt; }).size() == 20);
  }

  TEST_CASE("manifest layout") {
    const auto r = run_fixture();
    ManifestInfo info{"doc.txt", "abc", std::nullopt, "builtin", "t0", "t1"};
    const auto m = build_manifest(RunConfig{}, info, r.counts);
    CHECK(m["cassette_sha256"].is_null());
    CHECK(m["counts"]["sentences"] == 20);
    CHECK(m["input"]["sha256"] == "abc");
    CHECK(m["config"]["llm"]["model"] == RelationConfig{}.model_name);
  }

  TEST_CASE("artifacts are written") {
    rte::testing::TempDir dir;
    const auto r = run_fixture();
    write_extract_artifacts(r, build_manifest(RunConfig{}, {}, r.counts),
                            dir / "out");
    for (const char *f : {"graph.json", "document.json", "rejections.jsonl",
                          "sentences.jsonl", "manifest.json"}) {
      CHECK(std::filesystem::exists(dir / "out" / f));
    }
  }
}
