#include "rte/normalize.h"

#include <algorithm>

#include "rte/errors.h"
#include "rte/lexicon.h"
#include "rte/tagger.h"
#include "rte/text.h"

namespace rte {

namespace {

bool is_quote(char c) { return c == '"' || c == '\'' || c == '`'; }

std::string normalize_once(std::string_view s) {
  std::string x = text::is_valid_utf8(s) ? text::clean_unicode(s)
                                         : std::string(s);
  x = text::case_fold(text::collapse_whitespace(x));

  // Enclosing quotes and leading determiners, repeated because removing one
  // can expose the other ("the 'x'").
  for (;;) {
    bool changed = false;
    if (x.size() >= 2 && is_quote(x.front()) && x.back() == x.front()) {
      x = text::collapse_whitespace(std::string_view(x).substr(1, x.size() - 2));
      changed = true;
    }
    std::vector<std::string> words = text::split_words(x);
    if (!words.empty() && lexicon::is_normalization_determiner(words.front())) {
      words.erase(words.begin());
      x = text::join(words, " ");
      changed = true;
    }
    if (!changed) break;
  }

  std::vector<std::string> words = text::split_words(x);
  if (!words.empty()) words.back() = lexicon::singularize(words.back());
  return text::join(words, " ");
}

// Whole-word containment of `needle` in `hay`.
bool contains_words(std::string_view hay, std::string_view needle) {
  if (needle.empty() || needle.size() > hay.size()) return false;
  for (std::size_t pos = hay.find(needle); pos != std::string_view::npos;
       pos = hay.find(needle, pos + 1)) {
    const bool left = pos == 0 || hay[pos - 1] == ' ';
    const std::size_t end = pos + needle.size();
    const bool right = end == hay.size() || hay[end] == ' ';
    if (left && right) return true;
  }
  return false;
}

struct Resolved {
  std::string term;
  bool repaired = false;
  std::string error;
};

Resolved resolve(const std::string &raw,
                 const std::vector<std::string> &normalized_terms) {
  const std::string n = normalize_term(raw);
  if (n.empty()) return {{}, false, "empty_after_normalization"};
  if (std::find(normalized_terms.begin(), normalized_terms.end(), n) !=
      normalized_terms.end()) {
    return {n, false, {}};
  }
  std::vector<const std::string *> hits;
  for (const auto &c : normalized_terms) {
    if (contains_words(n, c) || contains_words(c, n)) hits.push_back(&c);
  }
  if (hits.size() == 1) return {*hits.front(), true, {}};
  if (hits.empty()) return {{}, false, "no_candidate_match"};
  return {{}, false, "ambiguous_containment"};
}

}  // namespace

std::string normalize_term(std::string_view s) {
  std::string cur = normalize_once(s);
  for (int i = 0; i < 32; ++i) {
    std::string next = normalize_once(cur);
    if (next == cur) break;
    cur = std::move(next);
  }
  return cur;
}

ValidationPolicy parse_policy(std::string_view name) {
  if (name == "strict") return ValidationPolicy::kStrict;
  if (name == "lenient") return ValidationPolicy::kLenient;
  throw ConfigError("unknown validation policy: " + std::string(name));
}

std::string_view policy_name(ValidationPolicy p) {
  return p == ValidationPolicy::kStrict ? "strict" : "lenient";
}

nlohmann::ordered_json to_json(const Rejection &r) {
  return {{"sentence_id", r.sentence_id},
          {"raw", to_json(r.raw)},
          {"reason", r.reason}};
}

std::string predicate_head_lemma(std::string_view predicate) {
  static const BuiltinTagger kTagger;
  if (text::trim(predicate).empty()) return {};
  const TagResult tagged = kTagger.tag(predicate);
  const TaggedToken *verb = nullptr;
  const TaggedToken *aux = nullptr;
  for (const auto &t : tagged.tokens) {
    if (t.pos == PosTag::kVerb) verb = &t;
    if (t.pos == PosTag::kAux) aux = &t;
  }
  if (verb) return verb->lemma;
  if (aux) return aux->lemma;
  return {};
}

std::variant<ValidatedTriple, Rejection> validate_triple(
    const RawTriple &raw, const CandidateSet &candidates,
    ValidationPolicy policy, const std::optional<std::string> &section_label) {
  auto reject = [&](std::string reason) {
    return Rejection{candidates.sentence_id, raw, std::move(reason)};
  };

  std::vector<std::string> terms;
  for (const auto &t : candidates.terms) {
    std::string n = normalize_term(t);
    if (!n.empty() && std::find(terms.begin(), terms.end(), n) == terms.end()) {
      terms.push_back(std::move(n));
    }
  }

  ValidatedTriple out;
  out.provenance = {candidates.sentence_id, section_label};

  const Resolved subj = resolve(raw.subject, terms);
  if (!subj.error.empty()) return reject("subject: " + subj.error);
  const Resolved obj = resolve(raw.object, terms);
  if (!obj.error.empty()) return reject("object: " + obj.error);
  out.subject = subj.term;
  out.object = obj.term;
  if (subj.repaired) out.flags.emplace(kFlagSubjectRepaired);
  if (obj.repaired) out.flags.emplace(kFlagObjectRepaired);

  out.predicate = text::collapse_whitespace(raw.predicate);
  if (out.predicate.empty()) return reject("predicate: empty");

  const std::string head = predicate_head_lemma(out.predicate);
  bool in_vocab = false;
  if (!head.empty()) {
    for (const auto &v : candidates.verbs) {
      if (lexicon::verb_lemma(text::case_fold(v)) == head) {
        in_vocab = true;
        break;
      }
    }
  }
  if (!in_vocab) {
    if (policy == ValidationPolicy::kStrict) {
      return reject("predicate: outside_vocab");
    }
    out.flags.emplace(kFlagPredicateOutsideVocab);
  }
  return out;
}

}  // namespace rte
