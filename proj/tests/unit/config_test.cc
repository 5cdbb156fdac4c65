#include <doctest.h>

#include <map>

#include "rte/config.h"
#include "rte/errors.h"
#include "test_util.h"

using namespace rte;

namespace {

RunConfig from(const std::string &json) {
  return run_config_from_json(nlohmann::json::parse(json));
}

}  // namespace

TEST_SUITE("config") {
  TEST_CASE("defaults") {
    const RunConfig c = from("{}");
    CHECK(c == RunConfig{});
    CHECK(c.llm.relation.temperature == 0.2);
    CHECK(c.llm.relation.retries == 3);
    CHECK(c.llm.relation.token_lo == 256);
    CHECK(c.llm.relation.token_hi == 1024);
    CHECK(c.alignment.threshold == 0.85);
    CHECK(c.policy == ValidationPolicy::kLenient);
  }

  TEST_CASE("round-trip") {
    RunConfig c;
    c.document = "doc.txt";
    c.out_dir = "o";
    c.tagger.mode = TaggerMode::kRemote;
    c.tagger.fallback = false;
    c.llm.mode = LLMMode::kRecord;
    c.llm.relation.temperature = 0.1;
    c.llm.relation.retries = 5;
    c.llm.relation.max_in_flight = 2;
    c.policy = ValidationPolicy::kStrict;
    c.alignment = {0.7, SimilarityBackend::kEmbedding};
    c.embedding.cassette = "emb.jsonl";
    c.evaluation = {SimilarityBackend::kExact, {0.2, 0.4}};
    const auto text = to_json(c).dump(2);
    CHECK(from(text) == c);
    CHECK(to_json(from(text)).dump(2) == text);
  }

  TEST_CASE("secrets are never serialized") {
    RunConfig c;
    c.llm.api_key = "sk-secret";
    c.embedding.api_key = "emb-secret";
    const auto text = to_json(c).dump();
    CHECK(text.find("secret") == std::string::npos);
    CHECK(text.find("api_key") == std::string::npos);
  }

  TEST_CASE("unknown keys") {
    CHECK_THROWS_AS(from(R"({"bogus":1})"), ConfigError);
    CHECK_THROWS_AS(from(R"({"llm":{"temprature":0.2}})"), ConfigError);
    CHECK_THROWS_AS(from(R"({"embedding":{"api_key":"x"}})"), ConfigError);
  }

  TEST_CASE("wrong types and enum values") {
    CHECK_THROWS_AS(from(R"({"llm":{"retries":"three"}})"), ConfigError);
    CHECK_THROWS_AS(from(R"({"llm":{"mode":"dream"}})"), ConfigError);
    CHECK_THROWS_AS(from(R"({"tagger":[]})"), ConfigError);
    CHECK_THROWS_AS(from(R"([])"), ConfigError);
  }

  TEST_CASE("ranges") {
    CHECK_THROWS_AS(from(R"({"llm":{"temperature":1.5}})"), ConfigError);
    CHECK_THROWS_AS(from(R"({"llm":{"retries":0}})"), ConfigError);
    CHECK_THROWS_AS(from(R"({"llm":{"token_lo":600,"token_hi":500}})"), ConfigError);
    CHECK_THROWS_AS(from(R"({"llm":{"max_in_flight":0}})"), ConfigError);
    CHECK_THROWS_AS(from(R"({"alignment":{"threshold":0}})"), ConfigError);
    CHECK_THROWS_AS(from(R"({"alignment":{"threshold":1.2}})"), ConfigError);
    CHECK_THROWS_AS(from(R"({"evaluation":{"taus":[0.5,0.3]}})"), ConfigError);
    CHECK_THROWS_AS(from(R"({"tagger":{"timeout_ms":0}})"), ConfigError);
    CHECK_NOTHROW(from(R"({"llm":{"temperature":0,"retries":10}})"));
  }

  TEST_CASE("environment overrides") {
    std::map<std::string, std::string> env = {
        {"RTE_LLM_ENDPOINT", "http://llm"},
        {"RTE_LLM_API_KEY", "k1"},
        {"RTE_TAGGER_ENDPOINT", "http://tagger"},
        {"RTE_EMBEDDING_ENDPOINT", "http://emb"},
        {"RTE_EMBEDDING_API_KEY", "k2"}};
    RunConfig c;
    apply_env_overrides(c, [&](const char *name) -> std::optional<std::string> {
      auto it = env.find(name);
      if (it == env.end()) return std::nullopt;
      return it->second;
    });
    CHECK(c.llm.endpoint == "http://llm");
    CHECK(c.llm.api_key == "k1");
    CHECK(c.tagger.endpoint == "http://tagger");
    CHECK(c.embedding.endpoint == "http://emb");
    CHECK(c.embedding.api_key == "k2");

    RunConfig d;
    apply_env_overrides(d, [](const char *) { return std::nullopt; });
    CHECK(d == RunConfig{});
  }

  TEST_CASE("load from file") {
    rte::testing::TempDir dir;
    std::ofstream(dir / "c.json") << R"({"out_dir":"x"})";
    CHECK(load_run_config(dir / "c.json").out_dir == "x");
    std::ofstream(dir / "bad.json") << "{";
    CHECK_THROWS_AS(load_run_config(dir / "bad.json"), ConfigError);
    CHECK_THROWS_AS(load_run_config(dir / "none.json"), IOError);
  }
}
