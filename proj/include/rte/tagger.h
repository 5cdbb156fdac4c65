#ifndef RTE_TAGGER_H_
#define RTE_TAGGER_H_

#include <chrono>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace rte {

// Coarse part-of-speech tag set shared with the remote tagger service.
enum class PosTag { kNoun, kPropn, kAdj, kVerb, kAux, kDet, kPron, kOther };

std::string_view pos_name(PosTag tag);
// Unknown names map to kOther.
PosTag parse_pos(std::string_view name);

struct TaggedToken {
  std::string text;
  std::string lemma;
  PosTag pos = PosTag::kOther;
  std::size_t index = 0;

  bool operator==(const TaggedToken &) const = default;
};

// Token index range [start, end).
struct TokenRange {
  std::size_t start = 0;
  std::size_t end = 0;

  bool operator==(const TokenRange &) const = default;
};

struct TagResult {
  std::vector<TaggedToken> tokens;
  std::vector<TokenRange> noun_chunks;

  bool operator==(const TagResult &) const = default;
};

// Wire form of TagResult: {"tokens":[{"text","lemma","pos","index"}],
// "noun_chunks":[{"start","end"}]}.
nlohmann::json to_json(const TagResult &result);
// Throws FormatError if the payload breaks the contract (missing fields,
// non-contiguous indices, overlapping or out-of-range chunks).
TagResult tag_result_from_json(const nlohmann::json &j);

// Splits text into word and punctuation tokens. Words keep internal hyphens,
// apostrophes and periods ("well-founded", "public's", "e.g").
std::vector<std::string> tokenize(std::string_view text);

class Tagger {
 public:
  virtual ~Tagger() = default;

  // Tags one sentence. Text must be non-empty.
  virtual TagResult tag(std::string_view sentence) const = 0;

  virtual std::string name() const = 0;
};

// Deterministic rule and lexicon tagger. Noun chunks are an optional
// determiner/possessive prefix plus a maximal ADJ/NOUN/PROPN run ending in a
// NOUN or PROPN.
class BuiltinTagger : public Tagger {
 public:
  TagResult tag(std::string_view sentence) const override;
  std::string name() const override { return "builtin"; }
};

// Client for the POST /tag protocol. Safe to share across threads.
class RemoteTagger : public Tagger {
 public:
  RemoteTagger(std::string endpoint, std::chrono::milliseconds timeout);

  // Throws TaggerUnavailableError when the endpoint cannot be reached or
  // answers with anything but a valid 200 response.
  TagResult tag(std::string_view sentence) const override;
  std::string name() const override { return "remote"; }

 private:
  std::string endpoint_;
  std::chrono::milliseconds timeout_;
};

// Tries `primary`; on TaggerUnavailableError reports through `warn` and
// answers with `fallback`.
class FallbackTagger : public Tagger {
 public:
  using WarnFn = std::function<void(const std::string &)>;

  FallbackTagger(std::unique_ptr<Tagger> primary,
                 std::unique_ptr<Tagger> fallback, WarnFn warn);

  TagResult tag(std::string_view sentence) const override;
  std::string name() const override;

 private:
  std::unique_ptr<Tagger> primary_;
  std::unique_ptr<Tagger> fallback_;
  WarnFn warn_;
};

}  // namespace rte

#endif  // RTE_TAGGER_H_
