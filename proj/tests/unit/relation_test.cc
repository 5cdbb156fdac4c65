#include <doctest.h>

#include <atomic>
#include <map>
#include <mutex>
#include <thread>

#include "rte/errors.h"
#include "rte/llm.h"
#include "rte/relation.h"
#include "test_util.h"

using namespace rte;

namespace {

using Script = std::map<std::string, std::vector<std::string>>;

// Answers from a per-sentence script; attempt n gets entry n-1 (the last
// entry repeats). Records every call.
class ScriptedClient : public LLMClient {
 public:
  explicit ScriptedClient(Script s)
      : script_(std::move(s)) {}

  std::string complete(const PromptRequest &r, int attempt) override {
    {
      std::lock_guard<std::mutex> lock(mu_);
      calls_.push_back({r.sentence_id, attempt});
      max_tokens_ = r.max_new_tokens;
      temperature_ = r.temperature;
    }
    const auto &v = script_.at(r.sentence_id);
    const auto idx = std::min<std::size_t>(attempt - 1, v.size() - 1);
    if (v[idx] == "!down") throw LLMUnavailableError("down");
    return v[idx];
  }

  std::vector<std::pair<std::string, int>> calls_;
  int max_tokens_ = 0;
  double temperature_ = 0.0;

 private:
  Script script_;
  std::mutex mu_;
};

// Sleeps longer for earlier sentences so completion order is reversed.
class SlowFirstClient : public LLMClient {
 public:
  std::string complete(const PromptRequest &r, int) override {
    const int n = std::stoi(r.sentence_id.substr(r.sentence_id.rfind('s') + 1));
    const int running = ++in_flight_;
    int seen = max_seen_.load();
    while (running > seen && !max_seen_.compare_exchange_weak(seen, running)) {
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(40 - 4 * n));
    --in_flight_;
    return R"([{"subject":"a","predicate":"p","object":")" +
           std::to_string(n) + "\"}]";
  }
  std::atomic<int> in_flight_{0};
  std::atomic<int> max_seen_{0};
};

const Sentence kSentence{"d:p0:s0", "Engineers act in the public interest.",
                         {0, 37}};
const CandidateSet kCandidates{"d:p0:s0", {"Engineers", "public interest"},
                               {"act"}};
const std::string kGood =
    R"([{"subject":"Engineers","predicate":"act in","object":"public interest"}])";

bool contains(const std::string &hay, const std::string &needle) {
  return hay.find(needle) != std::string::npos;
}

}  // namespace

TEST_SUITE("relation") {
  TEST_CASE("dynamic_max_tokens examples") {
    CHECK(dynamic_max_tokens(0, 2, 256, 1024) == 256);
    CHECK(dynamic_max_tokens(1000, 2, 256, 1024) == 1024);
    CHECK(dynamic_max_tokens(8, 2, 256, 1024, 24) == 384);
    CHECK(dynamic_max_tokens(5, 2, 256, 1024, 24) == 256);
    CHECK(dynamic_max_tokens(SIZE_MAX, 2, 256, 1024) == 1024);
  }

  TEST_CASE("dynamic_max_tokens rejects lo > hi") {
    CHECK_THROWS_AS(dynamic_max_tokens(3, 2, 1024, 256), ConfigError);
  }

  TEST_CASE("prompt holds the five blocks in order") {
    const std::string s = "Software engineers shall act in the public interest.";
    const auto p = compose_constrained_prompt(
        s, {"software engineer", "public interest"}, {"act"});
    const auto only = p.find("ONLY a JSON array");
    const auto sent = p.find(s);
    const auto terms = p.find("1. software engineer\n2. public interest");
    const auto verbs = p.find("prefer predicates based on these verbs");
    const auto empty = p.find("output [].");
    REQUIRE(only != std::string::npos);
    REQUIRE(sent != std::string::npos);
    REQUIRE(terms != std::string::npos);
    REQUIRE(verbs != std::string::npos);
    REQUIRE(empty != std::string::npos);
    CHECK(only < sent);
    CHECK(sent < terms);
    CHECK(terms < verbs);
    CHECK(verbs < empty);
    CHECK(contains(p, "\"subject\""));
    CHECK(contains(p, "MUST be one of these terms"));
    CHECK(contains(p, "1. act"));
  }

  TEST_CASE("prompt without verbs allows free predicates") {
    const auto p = compose_constrained_prompt("X uses Y.", {"X", "Y"}, {});
    CHECK_FALSE(contains(p, "Candidate verbs"));
    CHECK(contains(p, "Predicates may be any short verb phrase"));
  }

  TEST_CASE("prompt is injective in the sentence") {
    CHECK(compose_constrained_prompt("A uses B.", {"A", "B"}, {"use"}) !=
          compose_constrained_prompt("A uses C.", {"A", "B"}, {"use"}));
  }

  TEST_CASE("parse well-formed array") {
    auto r = parse_valid_json(R"([{"subject":"x","predicate":"y","object":"z"}])");
    REQUIRE(std::holds_alternative<std::vector<RawTriple>>(r));
    const auto &v = std::get<std::vector<RawTriple>>(r);
    REQUIRE(v.size() == 1);
    CHECK(v[0] == RawTriple{"x", "y", "z"});
  }

  TEST_CASE("parse tolerates surrounding prose") {
    auto r = parse_valid_json(
        R"(Sure! Here are the triples: [{"subject":"a","predicate":"b","object":"c"}] Hope this helps.)");
    REQUIRE(std::holds_alternative<std::vector<RawTriple>>(r));
    const auto &v = std::get<std::vector<RawTriple>>(r);
    REQUIRE(v.size() == 1);
    CHECK(v[0] == RawTriple{"a", "b", "c"});
  }

  TEST_CASE("parse ignores brackets inside strings") {
    auto r = parse_valid_json(
        R"(note: [{"subject":"a ]","predicate":"b","object":"c"}])");
    REQUIRE(std::holds_alternative<std::vector<RawTriple>>(r));
    CHECK(std::get<std::vector<RawTriple>>(r)[0].subject == "a ]");
  }

  TEST_CASE("parse error variants") {
    auto shape = parse_valid_json(R"([{"subject":"x"}])");
    REQUIRE(std::holds_alternative<ParseError>(shape));
    CHECK(std::get<ParseError>(shape).kind == ParseError::Kind::kWrongShape);

    auto blank = parse_valid_json(
        R"([{"subject":" ","predicate":"y","object":"z"}])");
    REQUIRE(std::holds_alternative<ParseError>(blank));
    CHECK(std::get<ParseError>(blank).kind == ParseError::Kind::kWrongShape);

    auto none = parse_valid_json("no relations here");
    REQUIRE(std::holds_alternative<ParseError>(none));
    CHECK(std::get<ParseError>(none).kind == ParseError::Kind::kNoArray);

    auto bad = parse_valid_json(R"([{"subject":"x",}])");
    REQUIRE(std::holds_alternative<ParseError>(bad));
    CHECK(std::get<ParseError>(bad).kind == ParseError::Kind::kMalformed);

    auto empty = parse_valid_json("[]");
    REQUIRE(std::holds_alternative<std::vector<RawTriple>>(empty));
    CHECK(std::get<std::vector<RawTriple>>(empty).empty());
  }

  TEST_CASE("candidate gate") {
    CHECK(candidate_gate({"s", {}, {}}) == GateDecision::kSkip);
    CHECK(candidate_gate({"s", {}, {"act"}}) == GateDecision::kSkip);
    CHECK(candidate_gate({"s", {"x"}, {}}) == GateDecision::kOrphan);
    CHECK(candidate_gate({"s", {"x"}, {}}, false) == GateDecision::kProceed);
    CHECK(candidate_gate({"s", {"x"}, {"act"}}) == GateDecision::kProceed);
  }

  TEST_CASE("success on second attempt") {
    ScriptedClient c(Script{{"d:p0:s0", {"garbage", kGood}}});
    auto r = extract_sentence_triples(kSentence, kCandidates, c, {});
    REQUIRE(std::holds_alternative<RawTripleBatch>(r));
    const auto &b = std::get<RawTripleBatch>(r);
    CHECK(b.attempts_used == 2);
    CHECK(b.triples.size() == 1);
    CHECK(b.raw_response == kGood);
    CHECK(c.calls_.size() == 2);
  }

  TEST_CASE("three parse failures orphan the sentence") {
    ScriptedClient c(Script{{"d:p0:s0", {"nope"}}});
    auto r = extract_sentence_triples(kSentence, kCandidates, c, {});
    REQUIRE(std::holds_alternative<OrphanMark>(r));
    const auto &o = std::get<OrphanMark>(r);
    CHECK(o.reason == OrphanReason::kParseFailure);
    CHECK(o.attempts_used == 3);
    CHECK(o.text == kSentence.text);
    CHECK(c.calls_.size() == 3);
  }

  TEST_CASE("empty array on first attempt orphans the sentence") {
    ScriptedClient c(Script{{"d:p0:s0", {"[]", kGood}}});
    auto r = extract_sentence_triples(kSentence, kCandidates, c, {});
    REQUIRE(std::holds_alternative<OrphanMark>(r));
    CHECK(std::get<OrphanMark>(r).reason == OrphanReason::kEmptyResult);
    CHECK(std::get<OrphanMark>(r).attempts_used == 1);
    CHECK(c.calls_.size() == 1);
  }

  TEST_CASE("request carries temperature and token budget") {
    ScriptedClient c(Script{{"d:p0:s0", {kGood}}});
    extract_sentence_triples(kSentence, kCandidates, c, {});
    CHECK(c.temperature_ == doctest::Approx(0.2));
    CHECK(c.max_tokens_ == 256);
  }

  TEST_CASE("transport errors are retried then rethrown") {
    ScriptedClient flaky(Script{{"d:p0:s0", {"!down", kGood}}});
    auto r = extract_sentence_triples(kSentence, kCandidates, flaky, {});
    CHECK(std::get<RawTripleBatch>(r).attempts_used == 2);

    ScriptedClient down(Script{{"d:p0:s0", {"!down"}}});
    CHECK_THROWS_AS(extract_sentence_triples(kSentence, kCandidates, down, {}),
                    LLMUnavailableError);
    CHECK(down.calls_.size() == 3);
  }

  TEST_CASE("cassette miss is not retried") {
    ReplayClient c{Cassette{}};
    CHECK_THROWS_AS(extract_sentence_triples(kSentence, kCandidates, c, {}),
                    CassetteMissError);
  }

  TEST_CASE("custom retry cap") {
    ScriptedClient c(Script{{"d:p0:s0", {"nope"}}});
    RelationConfig cfg;
    cfg.retries = 5;
    auto r = extract_sentence_triples(kSentence, kCandidates, c, cfg);
    CHECK(std::get<OrphanMark>(r).attempts_used == 5);
  }

  TEST_CASE("stage output follows document order under concurrency") {
    SegmentedDocument doc;
    doc.doc_id = "d";
    Paragraph p;
    std::vector<CandidateSet> cands;
    for (int i = 0; i < 8; ++i) {
      const std::string id = "d:p0:s" + std::to_string(i);
      p.sentences.push_back({id, "Sentence " + std::to_string(i) + ".", {}});
      cands.push_back({id, {"a", "b"}, {"p"}});
    }
    cands[3].verbs.clear();
    cands[5].terms.clear();
    doc.paragraphs.push_back(p);
    SlowFirstClient c;
    RelationConfig cfg;
    cfg.max_in_flight = 3;
    const auto out = run_relation_stage(doc, cands, c, cfg);
    REQUIRE(out.size() == 8);
    CHECK(c.max_seen_.load() <= 3);
    CHECK(c.max_seen_.load() >= 2);
    for (int i = 0; i < 8; ++i) {
      CHECK(out[i].sentence->sentence_id == "d:p0:s" + std::to_string(i));
    }
    CHECK(out[3].gate == GateDecision::kOrphan);
    CHECK(std::get<OrphanMark>(out[3].result).reason == OrphanReason::kNoVerbs);
    CHECK(std::get<OrphanMark>(out[3].result).attempts_used == 0);
    CHECK(out[5].gate == GateDecision::kSkip);
    CHECK(std::holds_alternative<Skipped>(out[5].result));
    CHECK(std::get<RawTripleBatch>(out[7].result).triples[0].object == "7");
  }
}

TEST_SUITE("llm") {
  TEST_CASE("fingerprint covers every prompt input but the sentence id") {
    PromptRequest a{"s1", "prompt", 0.2, 256, "m"};
    PromptRequest b = a;
    b.sentence_id = "s2";
    CHECK(fingerprint(a) == fingerprint(b));
    CHECK(fingerprint(a).size() == 64);
    for (int i = 0; i < 4; ++i) {
      PromptRequest c = a;
      if (i == 0) c.prompt_text += " ";
      if (i == 1) c.temperature = 0.3;
      if (i == 2) c.max_new_tokens = 257;
      if (i == 3) c.model_name = "n";
      CHECK(fingerprint(c) != fingerprint(a));
    }
  }

  TEST_CASE("cassette serves attempts in order and repeats the last") {
    Cassette c;
    c.add("f", "one");
    c.add("f", "two");
    CHECK(c.lookup("f", 1) == "one");
    CHECK(c.lookup("f", 2) == "two");
    CHECK(c.lookup("f", 3) == "two");
    CHECK(c.size() == 2);
    CHECK(c.contains("f"));
    try {
      c.lookup("g", 1);
      FAIL("expected a miss");
    } catch (const CassetteMissError &e) {
      CHECK(e.fingerprint() == "g");
      CHECK(std::string(e.what()).find("g") != std::string::npos);
    }
  }

  TEST_CASE("record then replay is byte-identical") {
    rte::testing::TempDir dir;
    const auto path = dir / "sub" / "cassette.jsonl";
    PromptRequest r{"s", "prompt with \"quotes\"\nand lines", 0.2, 300, "m"};
    {
      auto inner = std::make_unique<ScriptedClient>(
          std::map<std::string, std::vector<std::string>>{
              {"s", {"first", "second é"}}});
      RecordingClient rec(std::move(inner), path);
      CHECK(rec.complete(r, 1) == "first");
      CHECK(rec.complete(r, 2) == "second é");
    }
    ReplayClient replay(Cassette::load(path));
    CHECK(replay.complete(r, 1) == "first");
    CHECK(replay.complete(r, 2) == "second é");
    PromptRequest other = r;
    other.prompt_text = "different";
    CHECK_THROWS_AS(replay.complete(other, 1), CassetteMissError);
  }

  TEST_CASE("malformed cassette line names the line") {
    rte::testing::TempDir dir;
    const auto path = dir / "c.jsonl";
    std::ofstream(path) << R"({"fingerprint":"a","response":"x"})" << "\n"
                        << "{broken\n";
    try {
      Cassette::load(path);
      FAIL("expected FormatError");
    } catch (const FormatError &e) {
      CHECK(std::string(e.what()).find(":2:") != std::string::npos);
    }
    CHECK_THROWS_AS(Cassette::load(dir / "missing.jsonl"), IOError);
  }
}
