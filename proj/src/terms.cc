#include "rte/terms.h"

#include <unordered_set>

#include "rte/lexicon.h"
#include "rte/text.h"

namespace rte {

namespace {

bool is_leading_filler(std::string_view lower_word) {
  return lexicon::is_determiner(lower_word) || lexicon::is_pronoun(lower_word);
}

}  // namespace

std::vector<std::string> extract_noun_phrases(
    const std::vector<TaggedToken> &tokens,
    const std::vector<TokenRange> &noun_chunks) {
  std::vector<std::string> out;
  for (const auto &chunk : noun_chunks) {
    std::size_t b = chunk.start;
    const std::size_t e = std::min(chunk.end, tokens.size());
    while (b < e && (tokens[b].pos == PosTag::kDet ||
                     tokens[b].pos == PosTag::kPron)) {
      ++b;
    }
    if (b >= e) continue;
    std::vector<std::string> words;
    for (std::size_t i = b; i < e; ++i) words.push_back(tokens[i].text);
    out.push_back(text::join(words, " "));
  }
  return out;
}

std::vector<std::string> extract_verbs(const std::vector<TaggedToken> &tokens) {
  std::vector<std::string> verbs;
  std::vector<std::string> aux;
  std::vector<std::string> modals;
  for (const auto &t : tokens) {
    if (t.pos == PosTag::kVerb) {
      verbs.push_back(t.lemma);
    } else if (t.pos == PosTag::kAux) {
      (lexicon::is_modal(text::case_fold(t.text)) ? modals : aux)
          .push_back(t.lemma);
    }
  }
  if (!verbs.empty()) return verbs;
  return aux.empty() ? modals : aux;
}

std::vector<std::string> clean_dedup(const std::vector<std::string> &items) {
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  for (const auto &item : items) {
    std::vector<std::string> words = text::split_words(item);
    std::size_t b = 0;
    while (b < words.size() && is_leading_filler(text::case_fold(words[b]))) {
      ++b;
    }
    words.erase(words.begin(), words.begin() + static_cast<std::ptrdiff_t>(b));
    const std::string cleaned = text::join(words, " ");
    if (text::to_u32(cleaned).size() < 2) continue;
    bool all_stop = true;
    for (const auto &w : words) {
      if (!lexicon::is_stopword(text::case_fold(w))) {
        all_stop = false;
        break;
      }
    }
    if (all_stop) continue;
    if (seen.insert(text::case_fold(cleaned)).second) out.push_back(cleaned);
  }
  return out;
}

CandidateSet mine_candidates(const Sentence &sentence, const Tagger &tagger) {
  const TagResult tagged = tagger.tag(sentence.text);
  CandidateSet out;
  out.sentence_id = sentence.sentence_id;
  out.terms = clean_dedup(extract_noun_phrases(tagged.tokens,
                                               tagged.noun_chunks));
  out.verbs = clean_dedup(extract_verbs(tagged.tokens));
  return out;
}

}  // namespace rte
