#ifndef RTE_LEXICON_H_
#define RTE_LEXICON_H_

#include <string>
#include <string_view>

// Closed-class word lists, the stopword list and the small morphology used by
// the builtin tagger, candidate cleaning and term normalization. All lookups
// expect lowercase input. The lists are versioned; see docs/lexicon.md.
namespace rte::lexicon {

inline constexpr std::string_view kVersion = "1";

bool is_determiner(std::string_view w);
bool is_pronoun(std::string_view w);
bool is_auxiliary(std::string_view w);
bool is_modal(std::string_view w);
// Prepositions, conjunctions, particles and common adverbs.
bool is_function_word(std::string_view w);
bool is_stopword(std::string_view w);
// Determiners stripped by term normalization: the, a, an, this, that, these,
// those.
bool is_normalization_determiner(std::string_view w);

bool is_known_verb(std::string_view lemma);
bool is_known_adjective(std::string_view w);

// Base form of a verb token; irregular table first, then suffix stripping
// guided by the verb lexicon.
std::string verb_lemma(std::string_view word);

// True when `word` is an inflection (or base form) of a known verb.
bool is_verb_form(std::string_view word);

// Singular form of a noun token via an irregulars table and suffix rules.
std::string singularize(std::string_view word);

}  // namespace rte::lexicon

#endif  // RTE_LEXICON_H_
