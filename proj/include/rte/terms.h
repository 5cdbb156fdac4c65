#ifndef RTE_TERMS_H_
#define RTE_TERMS_H_

#include <string>
#include <vector>

#include "rte/corpus.h"
#include "rte/tagger.h"

namespace rte {

// Candidate entity terms (P) and relation vocabulary (Vb) of one sentence.
struct CandidateSet {
  std::string sentence_id;
  std::vector<std::string> terms;
  std::vector<std::string> verbs;

  bool operator==(const CandidateSet &) const = default;
};

// One string per noun chunk with leading determiners and pronouns removed.
// Chunks that are nothing but determiners/pronouns are dropped.
std::vector<std::string> extract_noun_phrases(
    const std::vector<TaggedToken> &tokens,
    const std::vector<TokenRange> &noun_chunks);

// Lemmas of VERB tokens. Without any VERB, the non-modal AUX lemmas, and
// without those, the modals.
std::vector<std::string> extract_verbs(const std::vector<TaggedToken> &tokens);

// Trims, collapses whitespace, strips leading determiners/pronouns, drops
// entries shorter than two characters or made only of stopwords, and removes
// case-insensitive duplicates keeping the first surface form.
std::vector<std::string> clean_dedup(const std::vector<std::string> &items);

// tag + extract + clean for one sentence.
CandidateSet mine_candidates(const Sentence &sentence, const Tagger &tagger);

}  // namespace rte

#endif  // RTE_TERMS_H_
