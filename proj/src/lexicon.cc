#include "rte/lexicon.h"

#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace rte::lexicon {

namespace {

using WordSet = std::unordered_set<std::string_view>;

const WordSet &determiners() {
  static const WordSet kSet = {
      "the",  "a",       "an",     "this",    "that",    "these",
      "those", "any",    "each",   "every",   "all",     "some",
      "no",   "both",    "either", "neither", "such",    "another",
      "several", "many", "much",   "few"};
  return kSet;
}

const WordSet &pronouns() {
  static const WordSet kSet = {
      "i",        "me",        "my",        "mine",     "myself",
      "we",       "us",        "our",       "ours",     "ourselves",
      "you",      "your",      "yours",     "yourself", "yourselves",
      "he",       "him",       "his",       "himself",  "she",
      "her",      "hers",      "herself",   "it",       "its",
      "itself",   "they",      "them",      "their",    "theirs",
      "themselves", "who",     "whom",      "whose",    "which",
      "what",     "whoever",   "whatever",  "whichever", "someone",
      "anyone",   "everyone",  "nobody",    "somebody", "anybody",
      "everybody", "something", "anything", "everything", "nothing"};
  return kSet;
}

const WordSet &modals() {
  static const WordSet kSet = {"shall", "should", "will",  "would", "can",
                               "could", "may",    "might", "must",  "ought"};
  return kSet;
}

const WordSet &auxiliaries() {
  static const WordSet kSet = {
      "be",  "am",   "is",     "are", "was",  "were", "been", "being",
      "have", "has", "had",    "having", "do", "does", "did",
      "shall", "should", "will", "would", "can", "could", "may", "might",
      "must", "ought"};
  return kSet;
}

const WordSet &function_words() {
  static const WordSet kSet = {
      // prepositions
      "about", "above", "across", "after", "against", "along", "among",
      "around", "as", "at", "before", "behind", "below", "beneath", "beside",
      "between", "beyond", "by", "despite", "down", "during", "except", "for",
      "from", "in", "inside", "into", "like", "near", "of", "off", "on",
      "onto", "out", "outside", "over", "per", "regarding", "since",
      "through", "throughout", "till", "to", "toward", "towards", "under",
      "underneath", "until", "up", "upon", "via", "with", "within", "without",
      // conjunctions
      "and", "but", "or", "nor", "so", "yet", "if", "because", "although",
      "though", "unless", "whereas", "while", "whether", "than", "when",
      "where", "whenever", "wherever", "once",
      // adverbs and particles
      "not", "only", "also", "very", "too", "just", "even", "ever", "never",
      "always", "often", "then", "there", "here", "thus", "however",
      "therefore", "moreover", "furthermore", "rather", "quite", "how", "why",
      "well", "together", "instead", "otherwise"};
  return kSet;
}

const WordSet &verbs() {
  static const WordSet kSet = {
      "accept",    "achieve",   "act",        "adapt",      "adhere",
      "advance",   "advise",    "allow",      "apply",      "approve",
      "assess",    "assign",    "assist",     "assure",     "attempt",
      "avoid",     "be",        "become",     "begin",      "belong",
      "benefit",   "bring",     "build",      "change",     "check",
      "choose",    "come",      "commit",     "comply",     "conform",
      "consider",  "consult",   "continue",   "contribute", "cooperate",
      "create",    "credit",    "deal",       "decide",     "define",
      "deliver",   "describe",  "design",     "determine",  "develop",
      "diminish",  "disclose",  "discuss",    "document",   "do",
      "encourage", "endorse",   "enhance",    "ensure",     "establish",
      "evaluate",  "exploit",   "express",    "find",       "follow",
      "form",      "foster",    "get",        "give",       "go",
      "handle",    "harm",      "have",       "help",       "hold",
      "identify",  "improve",   "include",    "increase",   "inflict",
      "influence", "inform",    "introduce",  "investigate", "involve",
      "justify",   "keep",      "know",       "lead",       "learn",
      "leave",     "limit",     "list",       "maintain",   "make",
      "manage",    "mean",      "meet",       "mislead",    "moderate",
      "obey",      "obtain",    "offer",      "participate", "pass",
      "pay",       "perform",   "permit",     "plan",       "practice",
      "prefer",    "prepare",   "preserve",   "prevent",    "produce",
      "promote",   "protect",   "provide",    "publish",    "pursue",
      "put",       "read",      "receive",    "recognize",  "reduce",
      "refuse",    "reject",    "release",    "rely",       "remain",
      "report",    "represent", "require",    "respect",    "review",
      "run",       "satisfy",   "say",        "see",        "seek",
      "select",    "send",      "serve",      "share",      "specify",
      "spend",     "stand",     "state",      "strive",     "subscribe",
      "submit",    "suggest",   "summarize",  "support",    "take",
      "teach",     "tell",      "test",       "think",      "treat",
      "understand", "uphold",   "use",        "validate",   "verify",
      "violate",   "work",      "write"};
  return kSet;
}

const WordSet &adjectives() {
  static const WordSet kSet = {
      "able",       "accurate",   "adequate",     "appropriate", "available",
      "beneficial", "best",       "certain",      "cohesive",    "competent",
      "confidential", "consistent", "current",    "eight",       "empty",
      "ethical",    "fair",       "following",    "full",        "general",
      "good",       "high",       "higher",       "highest",     "honest",
      "human",      "important",  "independent",  "legal",       "legalistic",
      "lifelong",   "long",       "low",          "necessary",   "new",
      "objective",  "other",      "own",          "personal",    "possible",
      "potential",  "private",    "professional", "proper",      "public",
      "realistic",  "reasonable", "related",      "relevant",    "respected",
      "responsible", "safe",      "short",        "significant", "social",
      "specific",   "supportive", "sure",         "technical",   "tedious"};
  return kSet;
}

const std::unordered_map<std::string_view, std::string_view> &
irregular_verbs() {
  static const std::unordered_map<std::string_view, std::string_view> kMap = {
      {"am", "be"},         {"is", "be"},        {"are", "be"},
      {"was", "be"},        {"were", "be"},      {"been", "be"},
      {"being", "be"},      {"has", "have"},     {"had", "have"},
      {"having", "have"},   {"does", "do"},      {"did", "do"},
      {"done", "do"},       {"doing", "do"},     {"made", "make"},
      {"took", "take"},     {"taken", "take"},   {"gave", "give"},
      {"given", "give"},    {"kept", "keep"},    {"led", "lead"},
      {"met", "meet"},      {"held", "hold"},    {"built", "build"},
      {"brought", "bring"}, {"thought", "think"}, {"found", "find"},
      {"told", "tell"},     {"wrote", "write"},  {"written", "write"},
      {"chose", "choose"},  {"chosen", "choose"}, {"became", "become"},
      {"began", "begin"},   {"begun", "begin"},  {"left", "leave"},
      {"got", "get"},       {"gotten", "get"},   {"went", "go"},
      {"gone", "go"},       {"saw", "see"},      {"seen", "see"},
      {"knew", "know"},     {"known", "know"},   {"came", "come"},
      {"sought", "seek"},   {"taught", "teach"}, {"understood", "understand"},
      {"dealt", "deal"},    {"meant", "mean"},   {"paid", "pay"},
      {"said", "say"},      {"sent", "send"},    {"spent", "spend"},
      {"stood", "stand"},   {"ran", "run"},      {"misled", "mislead"},
      {"upheld", "uphold"}};
  return kMap;
}

const std::unordered_map<std::string_view, std::string_view> &
irregular_nouns() {
  static const std::unordered_map<std::string_view, std::string_view> kMap = {
      {"people", "person"},     {"children", "child"},
      {"men", "man"},           {"women", "woman"},
      {"criteria", "criterion"}, {"phenomena", "phenomenon"},
      {"analyses", "analysis"}, {"bases", "basis"},
      {"indices", "index"},     {"matrices", "matrix"},
      {"lives", "life"},        {"wives", "wife"},
      {"knives", "knife"},      {"leaves", "leaf"},
      {"selves", "self"},       {"halves", "half"},
      {"feet", "foot"},         {"teeth", "tooth"},
      {"mice", "mouse"}};
  return kMap;
}

// Nouns whose plural-looking form is also their singular.
const WordSet &uncountable_nouns() {
  static const WordSet kSet = {"series", "species", "news",   "ethics",
                               "physics", "mathematics", "economics",
                               "politics", "status", "analysis", "basis",
                               "crisis", "thesis", "lens", "data", "media"};
  return kSet;
}

bool ends_with(std::string_view w, std::string_view suffix) {
  return w.size() >= suffix.size() &&
         w.substr(w.size() - suffix.size()) == suffix;
}

bool is_vowel(char c) {
  return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u';
}

}  // namespace

bool is_determiner(std::string_view w) { return determiners().contains(w); }
bool is_pronoun(std::string_view w) { return pronouns().contains(w); }
bool is_auxiliary(std::string_view w) { return auxiliaries().contains(w); }
bool is_modal(std::string_view w) { return modals().contains(w); }
bool is_function_word(std::string_view w) {
  return function_words().contains(w);
}

bool is_stopword(std::string_view w) {
  return is_determiner(w) || is_pronoun(w) || is_function_word(w);
}

bool is_normalization_determiner(std::string_view w) {
  return w == "the" || w == "a" || w == "an" || w == "this" || w == "that" ||
         w == "these" || w == "those";
}

bool is_known_verb(std::string_view lemma) { return verbs().contains(lemma); }
bool is_known_adjective(std::string_view w) {
  return adjectives().contains(w);
}

std::string verb_lemma(std::string_view word) {
  const std::string w(word);
  if (auto it = irregular_verbs().find(w); it != irregular_verbs().end()) {
    return std::string(it->second);
  }
  if (is_known_verb(w)) return w;

  std::vector<std::string> candidates;
  auto undouble = [](const std::string &stem) -> std::string {
    const std::size_t n = stem.size();
    if (n >= 3 && stem[n - 1] == stem[n - 2] && !is_vowel(stem[n - 1])) {
      return stem.substr(0, n - 1);
    }
    return {};
  };
  if (ends_with(w, "ies") && w.size() > 4) {
    candidates.push_back(w.substr(0, w.size() - 3) + "y");
  } else if (ends_with(w, "ied") && w.size() > 4) {
    candidates.push_back(w.substr(0, w.size() - 3) + "y");
  } else if (ends_with(w, "ing") && w.size() > 4) {
    const std::string stem = w.substr(0, w.size() - 3);
    candidates.push_back(stem);
    candidates.push_back(stem + "e");
    if (auto u = undouble(stem); !u.empty()) candidates.push_back(u);
  } else if (ends_with(w, "ed") && w.size() > 3) {
    const std::string stem = w.substr(0, w.size() - 2);
    candidates.push_back(stem);
    candidates.push_back(w.substr(0, w.size() - 1));
    if (auto u = undouble(stem); !u.empty()) candidates.push_back(u);
  } else if (ends_with(w, "es") && w.size() > 3) {
    candidates.push_back(w.substr(0, w.size() - 2));
    candidates.push_back(w.substr(0, w.size() - 1));
  } else if (ends_with(w, "s") && !ends_with(w, "ss") && w.size() > 2) {
    candidates.push_back(w.substr(0, w.size() - 1));
  }
  for (const auto &c : candidates) {
    if (is_known_verb(c)) return c;
  }
  // Unknown verb: fall back to the first suffix-stripped candidate.
  if (!candidates.empty()) {
    if (ends_with(w, "ed") || ends_with(w, "ing")) {
      if (auto u = undouble(candidates.front()); !u.empty()) return u;
    }
    return candidates.front();
  }
  return w;
}

bool is_verb_form(std::string_view word) {
  return is_known_verb(verb_lemma(word));
}

std::string singularize(std::string_view word) {
  const std::string w(word);
  if (w.size() <= 3) return w;
  if (auto it = irregular_nouns().find(w); it != irregular_nouns().end()) {
    return std::string(it->second);
  }
  if (uncountable_nouns().contains(w)) return w;
  const char before = w[w.size() - 2];
  if (w.back() != 's' || !(before >= 'a' && before <= 'z')) return w;
  if (ends_with(w, "ss") || ends_with(w, "us") || ends_with(w, "is")) return w;
  if (ends_with(w, "ies") && w.size() > 4) {
    return w.substr(0, w.size() - 3) + "y";
  }
  if (ends_with(w, "sses") || ends_with(w, "ches") || ends_with(w, "shes") ||
      ends_with(w, "xes") || ends_with(w, "zzes")) {
    return w.substr(0, w.size() - 2);
  }
  return w.substr(0, w.size() - 1);
}

}  // namespace rte::lexicon
