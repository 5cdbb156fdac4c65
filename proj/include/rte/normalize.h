#ifndef RTE_NORMALIZE_H_
#define RTE_NORMALIZE_H_

#include <optional>
#include <set>
#include <string>
#include <variant>

#include <nlohmann/json.hpp>

#include "rte/relation.h"
#include "rte/terms.h"

namespace rte {

// Canonical form of a term: trimmed, whitespace-collapsed, case-folded,
// leading determiners and enclosing quotes removed, final token singularized.
// Idempotent.
std::string normalize_term(std::string_view s);

enum class ValidationPolicy { kStrict, kLenient };

ValidationPolicy parse_policy(std::string_view name);
std::string_view policy_name(ValidationPolicy p);

inline constexpr std::string_view kFlagPredicateOutsideVocab =
    "predicate_outside_vocab";
inline constexpr std::string_view kFlagSubjectRepaired = "subject_repaired";
inline constexpr std::string_view kFlagObjectRepaired = "object_repaired";

struct Provenance {
  std::string sentence_id;
  std::optional<std::string> section_label;

  auto operator<=>(const Provenance &) const = default;
};

struct ValidatedTriple {
  std::string subject;
  std::string predicate;
  std::string object;
  Provenance provenance;
  std::set<std::string> flags;
};

struct Rejection {
  std::string sentence_id;
  RawTriple raw;
  std::string reason;
};

// JSON Lines record {"sentence_id","raw","reason"}.
nlohmann::ordered_json to_json(const Rejection &r);

// Head lemma of a predicate phrase: the last VERB token, else the last AUX.
// Empty when the phrase has no verb-like token.
std::string predicate_head_lemma(std::string_view predicate);

// Checks a raw triple against its sentence's candidates. Subject and object
// must match a normalized candidate exactly or by unique whole-word
// containment (which marks *_repaired). A predicate whose head lemma is not
// in the verb list is flagged (lenient) or rejected (strict).
std::variant<ValidatedTriple, Rejection> validate_triple(
    const RawTriple &raw, const CandidateSet &candidates,
    ValidationPolicy policy,
    const std::optional<std::string> &section_label = std::nullopt);

}  // namespace rte

#endif  // RTE_NORMALIZE_H_
