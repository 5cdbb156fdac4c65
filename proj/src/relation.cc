#include "rte/relation.h"

#include <algorithm>
#include <atomic>
#include <exception>
#include <sstream>
#include <thread>

#include "rte/errors.h"
#include "rte/text.h"

namespace rte {

nlohmann::ordered_json to_json(const RawTriple &t) {
  return {{"subject", t.subject},
          {"predicate", t.predicate},
          {"object", t.object}};
}

int dynamic_max_tokens(std::size_t n_terms, int k, int lo, int hi,
                       int tokens_per_triple) {
  if (lo > hi) {
    throw ConfigError("token clamp lo (" + std::to_string(lo) +
                      ") exceeds hi (" + std::to_string(hi) + ")");
  }
  if (lo <= 0 || k <= 0 || tokens_per_triple <= 0) {
    throw ConfigError("token budget factors must be positive");
  }
  // Saturate instead of overflowing for absurd term counts.
  const unsigned long long per_term =
      static_cast<unsigned long long>(k) *
      static_cast<unsigned long long>(tokens_per_triple);
  const unsigned long long want =
      n_terms > static_cast<unsigned long long>(hi) / per_term + 1
          ? static_cast<unsigned long long>(hi)
          : n_terms * per_term;
  return static_cast<int>(std::clamp<unsigned long long>(
      want, static_cast<unsigned long long>(lo),
      static_cast<unsigned long long>(hi)));
}

std::string compose_constrained_prompt(const std::string &sentence,
                                       const std::vector<std::string> &terms,
                                       const std::vector<std::string> &verbs) {
  std::ostringstream p;
  p << "Extract relation triples from the sentence below.\n"
    << "Output ONLY a JSON array of objects, each with the string keys "
       "\"subject\", \"predicate\" and \"object\". Do not write anything "
       "before or after the array.\n\n";
  p << "Sentence: " << sentence << "\n\n";
  p << "Candidate terms (every subject and every object MUST be one of these "
       "terms):\n";
  for (std::size_t i = 0; i < terms.size(); ++i) {
    p << i + 1 << ". " << terms[i] << "\n";
  }
  p << "\n";
  if (!verbs.empty()) {
    p << "Candidate verbs (prefer predicates based on these verbs):\n";
    for (std::size_t i = 0; i < verbs.size(); ++i) {
      p << i + 1 << ". " << verbs[i] << "\n";
    }
  } else {
    p << "Predicates may be any short verb phrase taken from the sentence.\n";
  }
  p << "\nIf the sentence states no relation between the candidate terms, "
       "output [].\n";
  return p.str();
}

std::string_view parse_error_name(ParseError::Kind kind) {
  switch (kind) {
    case ParseError::Kind::kNoArray:
      return "no_array";
    case ParseError::Kind::kMalformed:
      return "malformed";
    case ParseError::Kind::kWrongShape:
      return "wrong_shape";
  }
  return "unknown";
}

namespace {

// End (exclusive) of the balanced bracket structure starting at `open`, or
// npos. Brackets inside JSON strings are ignored.
std::size_t balanced_end(std::string_view s, std::size_t open) {
  int depth = 0;
  bool in_string = false;
  for (std::size_t i = open; i < s.size(); ++i) {
    const char c = s[i];
    if (in_string) {
      if (c == '\\') {
        ++i;
      } else if (c == '"') {
        in_string = false;
      }
      continue;
    }
    if (c == '"') {
      in_string = true;
    } else if (c == '[' || c == '{') {
      ++depth;
    } else if (c == ']' || c == '}') {
      if (--depth == 0) return i + 1;
      if (depth < 0) return std::string_view::npos;
    }
  }
  return std::string_view::npos;
}

std::optional<std::string> field(const nlohmann::json &obj, const char *key) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_string()) return std::nullopt;
  std::string v(text::trim(it->get<std::string>()));
  if (v.empty()) return std::nullopt;
  return v;
}

}  // namespace

std::variant<std::vector<RawTriple>, ParseError> parse_valid_json(
    std::string_view raw) {
  bool saw_balanced = false;
  std::string last_error;
  for (std::size_t open = raw.find('['); open != std::string_view::npos;
       open = raw.find('[', open + 1)) {
    const std::size_t end = balanced_end(raw, open);
    if (end == std::string_view::npos) continue;
    saw_balanced = true;
    nlohmann::json arr;
    try {
      arr = nlohmann::json::parse(raw.substr(open, end - open));
    } catch (const nlohmann::json::exception &e) {
      last_error = e.what();
      continue;
    }
    if (!arr.is_array()) continue;
    std::vector<RawTriple> out;
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const auto &el = arr[i];
      if (!el.is_object()) {
        return ParseError{ParseError::Kind::kWrongShape,
                          "element " + std::to_string(i) + " is not an object"};
      }
      auto s = field(el, "subject");
      auto p = field(el, "predicate");
      auto o = field(el, "object");
      if (!s || !p || !o) {
        return ParseError{ParseError::Kind::kWrongShape,
                          "element " + std::to_string(i) +
                              " lacks a non-empty subject/predicate/object"};
      }
      out.push_back({*s, *p, *o});
    }
    return out;
  }
  if (saw_balanced) {
    return ParseError{ParseError::Kind::kMalformed, last_error};
  }
  return ParseError{ParseError::Kind::kNoArray, "no JSON array in response"};
}

std::string_view orphan_reason_name(OrphanReason r) {
  switch (r) {
    case OrphanReason::kNoVerbs:
      return "no_verbs";
    case OrphanReason::kEmptyResult:
      return "empty_result";
    case OrphanReason::kParseFailure:
      return "parse_failure";
  }
  return "unknown";
}

GateDecision candidate_gate(const CandidateSet &c, bool orphan_on_empty_verbs) {
  if (c.terms.empty()) return GateDecision::kSkip;
  if (c.verbs.empty() && orphan_on_empty_verbs) return GateDecision::kOrphan;
  return GateDecision::kProceed;
}

SentenceResult extract_sentence_triples(const Sentence &sentence,
                                        const CandidateSet &candidates,
                                        LLMClient &client,
                                        const RelationConfig &config) {
  if (config.retries < 1) throw ConfigError("retries must be at least 1");
  if (config.temperature < 0.0 || config.temperature > 1.0) {
    throw ConfigError("temperature must lie in [0, 1]");
  }
  PromptRequest request;
  request.sentence_id = sentence.sentence_id;
  request.prompt_text = compose_constrained_prompt(
      sentence.text, candidates.terms, candidates.verbs);
  request.temperature = config.temperature;
  request.max_new_tokens =
      dynamic_max_tokens(candidates.terms.size(), config.multiplier,
                         config.token_lo, config.token_hi,
                         config.tokens_per_triple);
  request.model_name = config.model_name;

  for (int attempt = 1; attempt <= config.retries; ++attempt) {
    std::string raw;
    try {
      raw = infer(request, client, attempt);
    } catch (const LLMUnavailableError &) {
      if (attempt == config.retries) throw;
      continue;
    }
    auto parsed = parse_valid_json(raw);
    if (auto *triples = std::get_if<std::vector<RawTriple>>(&parsed)) {
      if (triples->empty()) {
        return OrphanMark{sentence.sentence_id, sentence.text,
                          OrphanReason::kEmptyResult, attempt};
      }
      return RawTripleBatch{sentence.sentence_id, std::move(*triples),
                            std::move(raw), attempt};
    }
  }
  return OrphanMark{sentence.sentence_id, sentence.text,
                    OrphanReason::kParseFailure, config.retries};
}

std::vector<SentenceOutcome> run_relation_stage(
    const SegmentedDocument &doc, const std::vector<CandidateSet> &candidates,
    LLMClient &client, const RelationConfig &config) {
  std::vector<SentenceOutcome> outcomes;
  for (const auto &p : doc.paragraphs) {
    for (const auto &s : p.sentences) {
      SentenceOutcome o;
      o.sentence = &s;
      outcomes.push_back(std::move(o));
    }
  }
  if (candidates.size() != outcomes.size()) {
    throw ConfigError("candidate sets do not match the document's sentences");
  }

  std::vector<std::size_t> pending;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    auto &o = outcomes[i];
    o.candidates = candidates[i];
    o.gate = candidate_gate(o.candidates, config.orphan_on_empty_verbs);
    if (o.gate == GateDecision::kOrphan) {
      o.result = OrphanMark{o.sentence->sentence_id, o.sentence->text,
                            OrphanReason::kNoVerbs, 0};
    } else if (o.gate == GateDecision::kProceed) {
      pending.push_back(i);
    }
  }

  std::vector<std::exception_ptr> errors(outcomes.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t k = next++; k < pending.size(); k = next++) {
      auto &o = outcomes[pending[k]];
      try {
        auto r = extract_sentence_triples(*o.sentence, o.candidates, client,
                                          config);
        std::visit([&](auto &&v) { o.result = std::move(v); }, r);
      } catch (...) {
        errors[pending[k]] = std::current_exception();
      }
    }
  };
  const std::size_t workers = std::min<std::size_t>(
      static_cast<std::size_t>(std::max(config.max_in_flight, 1)),
      pending.size());
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  for (const auto &e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return outcomes;
}

}  // namespace rte
