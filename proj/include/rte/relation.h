#ifndef RTE_RELATION_H_
#define RTE_RELATION_H_

#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "rte/corpus.h"
#include "rte/llm.h"
#include "rte/terms.h"

namespace rte {

struct RawTriple {
  std::string subject;
  std::string predicate;
  std::string object;

  bool operator==(const RawTriple &) const = default;
};

nlohmann::ordered_json to_json(const RawTriple &t);

struct RelationConfig {
  std::string model_name = "mistral-7b-instruct-v0.1";
  double temperature = 0.2;
  int retries = 3;            // k
  int token_lo = 256;
  int token_hi = 1024;
  int multiplier = 2;         // expected triples per term
  int tokens_per_triple = 24;
  int max_in_flight = 4;
  // P non-empty but Vb empty: orphan without calling the LLM.
  bool orphan_on_empty_verbs = true;

  bool operator==(const RelationConfig &) const = default;
};

// M = min(hi, max(lo, n_terms * k * c)). Throws ConfigError if lo > hi or
// any factor is non-positive.
int dynamic_max_tokens(std::size_t n_terms, int k, int lo, int hi,
                       int tokens_per_triple = 24);

// Builds the constrained extraction prompt. With an empty verb list the verb
// block is left out and free predicates are allowed.
std::string compose_constrained_prompt(const std::string &sentence,
                                       const std::vector<std::string> &terms,
                                       const std::vector<std::string> &verbs);

struct ParseError {
  enum class Kind { kNoArray, kMalformed, kWrongShape };
  Kind kind;
  std::string detail;
};

std::string_view parse_error_name(ParseError::Kind kind);

// Finds the first balanced top-level JSON array in `raw` (prose around it is
// ignored), parses it and checks that every element is an object with
// non-empty string subject/predicate/object.
std::variant<std::vector<RawTriple>, ParseError> parse_valid_json(
    std::string_view raw);

struct RawTripleBatch {
  std::string sentence_id;
  std::vector<RawTriple> triples;
  std::string raw_response;
  int attempts_used = 0;
};

enum class OrphanReason { kNoVerbs, kEmptyResult, kParseFailure };
std::string_view orphan_reason_name(OrphanReason r);

struct OrphanMark {
  std::string sentence_id;
  std::string text;
  OrphanReason reason = OrphanReason::kParseFailure;
  int attempts_used = 0;
};

enum class GateDecision { kProceed, kSkip, kOrphan };

// P empty: skip. P non-empty, Vb empty: orphan (or proceed when the
// orphan-on-empty-verbs policy is off). Otherwise proceed.
GateDecision candidate_gate(const CandidateSet &c,
                            bool orphan_on_empty_verbs = true);

using SentenceResult = std::variant<RawTripleBatch, OrphanMark>;

// Up to `config.retries` attempts of infer + parse_valid_json. An empty array
// or exhausted retries become an OrphanMark. Transport errors are retried
// and rethrown after the last attempt; cassette misses are not retried.
SentenceResult extract_sentence_triples(const Sentence &sentence,
                                        const CandidateSet &candidates,
                                        LLMClient &client,
                                        const RelationConfig &config);

struct Skipped {};

struct SentenceOutcome {
  const Sentence *sentence = nullptr;
  CandidateSet candidates;
  GateDecision gate = GateDecision::kSkip;
  std::variant<Skipped, RawTripleBatch, OrphanMark> result;
};

// Runs the gate and extraction for every sentence of the document with at
// most `config.max_in_flight` concurrent LLM calls. Output order is document
// order regardless of completion order. The first error in document order is
// rethrown after all workers finish.
std::vector<SentenceOutcome> run_relation_stage(
    const SegmentedDocument &doc, const std::vector<CandidateSet> &candidates,
    LLMClient &client, const RelationConfig &config);

}  // namespace rte

#endif  // RTE_RELATION_H_
