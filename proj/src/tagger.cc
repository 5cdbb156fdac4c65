#include "rte/tagger.h"

#include <cctype>

#include "http.h"
#include "rte/errors.h"
#include "rte/lexicon.h"
#include "rte/text.h"

namespace rte {

namespace {

bool is_word_byte(char c) {
  const auto u = static_cast<unsigned char>(c);
  return u >= 0x80 || std::isalnum(u);
}

bool is_joiner(char c) { return c == '-' || c == '\'' || c == '.'; }

bool is_word(std::string_view tok) { return !tok.empty() && is_word_byte(tok[0]); }

bool is_numeric(std::string_view tok) {
  bool digit = false;
  for (char c : tok) {
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digit = true;
    } else if (c != '.' && c != ',') {
      return false;
    }
  }
  return digit;
}

bool ends_with(std::string_view w, std::string_view suffix) {
  return w.size() > suffix.size() &&
         w.substr(w.size() - suffix.size()) == suffix;
}

bool is_capitalized(std::string_view tok) {
  return !tok.empty() && std::isupper(static_cast<unsigned char>(tok[0]));
}

bool is_possessive(std::string_view w) {
  return w == "my" || w == "our" || w == "your" || w == "his" || w == "her" ||
         w == "its" || w == "their" || w == "whose";
}

// Adverbs skipped when looking back for a verb's governor ("shall not act").
bool is_skippable_adverb(std::string_view w) {
  return w == "not" || w == "also" || w == "only" || w == "always" ||
         w == "never" || w == "even" || w == "just" || w == "ever" ||
         (ends_with(w, "ly") && w.size() > 4);
}

bool has_noun_suffix(std::string_view w) {
  for (std::string_view s : {"tion", "sion", "ment", "ness", "ity", "ance",
                             "ence", "ship", "ism", "ist", "er", "or", "ure",
                             "age", "ery", "ware"}) {
    if (ends_with(w, s)) return true;
  }
  // plural of the above
  if (w.size() > 3 && w.back() == 's') {
    const std::string singular = lexicon::singularize(w);
    return singular != w && has_noun_suffix(singular);
  }
  return false;
}

bool has_adjective_suffix(std::string_view w) {
  for (std::string_view s : {"al", "ful", "ous", "ive", "ble", "less"}) {
    if (ends_with(w, s) && w.size() > 4) return true;
  }
  return false;
}

bool is_plural_noun(std::string_view w) {
  return w.size() > 3 && w.back() == 's' && lexicon::singularize(w) != w;
}

std::string lemma_for(const std::string &lower, PosTag pos) {
  switch (pos) {
    case PosTag::kVerb:
    case PosTag::kAux:
      return lexicon::verb_lemma(lower);
    case PosTag::kNoun:
      return lexicon::singularize(lower);
    default:
      return lower;
  }
}

}  // namespace

std::string_view pos_name(PosTag tag) {
  switch (tag) {
    case PosTag::kNoun:
      return "NOUN";
    case PosTag::kPropn:
      return "PROPN";
    case PosTag::kAdj:
      return "ADJ";
    case PosTag::kVerb:
      return "VERB";
    case PosTag::kAux:
      return "AUX";
    case PosTag::kDet:
      return "DET";
    case PosTag::kPron:
      return "PRON";
    case PosTag::kOther:
      return "OTHER";
  }
  return "OTHER";
}

PosTag parse_pos(std::string_view name) {
  if (name == "NOUN") return PosTag::kNoun;
  if (name == "PROPN") return PosTag::kPropn;
  if (name == "ADJ") return PosTag::kAdj;
  if (name == "VERB") return PosTag::kVerb;
  if (name == "AUX") return PosTag::kAux;
  if (name == "DET") return PosTag::kDet;
  if (name == "PRON") return PosTag::kPron;
  return PosTag::kOther;
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    const char c = text[i];
    if (text::is_space(c)) {
      ++i;
    } else if (is_word_byte(c)) {
      std::size_t j = i;
      while (j < n) {
        if (is_word_byte(text[j])) {
          ++j;
        } else if (is_joiner(text[j]) && j + 1 < n &&
                   is_word_byte(text[j + 1])) {
          j += 2;
        } else {
          break;
        }
      }
      out.emplace_back(text.substr(i, j - i));
      i = j;
    } else {
      out.emplace_back(1, c);
      ++i;
    }
  }
  return out;
}

TagResult BuiltinTagger::tag(std::string_view sentence) const {
  const std::vector<std::string> words = tokenize(sentence);
  const std::size_t n = words.size();
  std::vector<std::string> lower(n);
  std::vector<PosTag> tags(n, PosTag::kOther);
  std::vector<bool> decided(n, false);

  std::size_t first_word = n;
  for (std::size_t i = 0; i < n; ++i) {
    lower[i] = text::case_fold(words[i]);
    if (first_word == n && is_word(words[i]) && !is_numeric(words[i])) {
      first_word = i;
    }
  }

  // Closed classes first.
  for (std::size_t i = 0; i < n; ++i) {
    const std::string &w = lower[i];
    decided[i] = true;
    if (!is_word(w) || is_numeric(w)) {
      tags[i] = PosTag::kOther;
    } else if (lexicon::is_determiner(w)) {
      tags[i] = PosTag::kDet;
    } else if (lexicon::is_pronoun(w)) {
      tags[i] = PosTag::kPron;
    } else if (lexicon::is_auxiliary(w)) {
      tags[i] = PosTag::kAux;
    } else if (lexicon::is_function_word(w) ||
               (ends_with(w, "ly") && w.size() > 4 &&
                !lexicon::is_known_adjective(w))) {
      tags[i] = PosTag::kOther;
    } else {
      decided[i] = false;
    }
  }

  // Previous word token, skipping adverbs.
  auto governor = [&](std::size_t i) -> std::ptrdiff_t {
    std::ptrdiff_t j = static_cast<std::ptrdiff_t>(i) - 1;
    while (j >= 0 && is_word(lower[j]) && is_skippable_adverb(lower[j])) --j;
    return j;
  };

  for (std::size_t i = 0; i < n; ++i) {
    if (decided[i]) continue;
    const std::string &w = lower[i];
    const std::string lemma = lexicon::verb_lemma(w);
    const bool verb_form =
        lexicon::is_known_verb(lemma) && !lexicon::is_known_adjective(w);
    const bool base_form = lemma == w;
    const bool third_person = !base_form && w.back() == 's';
    const bool past = !base_form && ends_with(w, "ed");

    bool verb = false;
    if (verb_form) {
      const std::ptrdiff_t g = governor(i);
      if (i == first_word) {
        verb = base_form || third_person;
      } else if (g >= 0) {
        const std::string &gw = lower[g];
        const PosTag gt = tags[g];
        if (gt == PosTag::kAux || gw == "to") {
          verb = true;
        } else if (gt == PosTag::kPron && !is_possessive(gw)) {
          verb = true;
        } else if (gt == PosTag::kNoun || gt == PosTag::kPropn) {
          verb = third_person || past || (base_form && is_plural_noun(gw));
        } else if (gw == "and" || gw == "or" || gw == ",") {
          // Coordinated with a preceding verb: "act and maintain",
          // "subscribe to and promote".
          std::ptrdiff_t h = governor(static_cast<std::size_t>(g));
          if (h >= 1 && tags[h] == PosTag::kOther && is_word(lower[h])) --h;
          verb = h >= 0 && tags[h] == PosTag::kVerb;
        }
      }
    }

    if (verb) {
      tags[i] = PosTag::kVerb;
    } else if (i != first_word && is_capitalized(words[i])) {
      tags[i] = PosTag::kPropn;
    } else if (lexicon::is_known_adjective(w)) {
      tags[i] = PosTag::kAdj;
    } else if (has_noun_suffix(w)) {
      tags[i] = PosTag::kNoun;
    } else if (has_adjective_suffix(w)) {
      tags[i] = PosTag::kAdj;
    } else if (w.find('-') != std::string::npos) {
      const std::string_view last =
          std::string_view(w).substr(w.rfind('-') + 1);
      tags[i] = (ends_with(last, "ed") || ends_with(last, "ing") ||
                 lexicon::is_known_adjective(last))
                    ? PosTag::kAdj
                    : PosTag::kNoun;
    } else if (ends_with(w, "ed") && w.size() > 4) {
      tags[i] = PosTag::kAdj;
    } else {
      tags[i] = PosTag::kNoun;
    }
  }

  // Noun chunks.
  TagResult result;
  auto nominal = [&](std::size_t k) {
    return tags[k] == PosTag::kAdj || tags[k] == PosTag::kNoun ||
           tags[k] == PosTag::kPropn;
  };
  std::size_t i = 0;
  while (i < n) {
    const std::size_t start = i;
    while (i < n && (tags[i] == PosTag::kDet ||
                     (tags[i] == PosTag::kPron && is_possessive(lower[i])))) {
      ++i;
    }
    const std::size_t run_start = i;
    while (i < n && nominal(i)) ++i;
    const std::size_t run_end = i;
    std::size_t head = run_end;
    for (std::size_t k = run_end; k > run_start; --k) {
      if (tags[k - 1] == PosTag::kNoun || tags[k - 1] == PosTag::kPropn) {
        head = k - 1;
        break;
      }
    }
    if (head == run_end && run_end > run_start && run_start > start) {
      // "the public": a determined adjective run is nominal.
      head = run_end - 1;
      tags[head] = PosTag::kNoun;
    }
    if (head < run_end) {
      result.noun_chunks.push_back({start, head + 1});
      i = head + 1;
    } else {
      i = std::max(run_end, start + 1);
    }
  }

  result.tokens.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    result.tokens.push_back(
        {words[k], lemma_for(lower[k], tags[k]), tags[k], k});
  }
  return result;
}

nlohmann::json to_json(const TagResult &result) {
  nlohmann::json tokens = nlohmann::json::array();
  for (const auto &t : result.tokens) {
    tokens.push_back({{"text", t.text},
                      {"lemma", t.lemma},
                      {"pos", pos_name(t.pos)},
                      {"index", t.index}});
  }
  nlohmann::json chunks = nlohmann::json::array();
  for (const auto &c : result.noun_chunks) {
    chunks.push_back({{"start", c.start}, {"end", c.end}});
  }
  return {{"tokens", tokens}, {"noun_chunks", chunks}};
}

TagResult tag_result_from_json(const nlohmann::json &j) {
  TagResult out;
  try {
    for (const auto &t : j.at("tokens")) {
      TaggedToken tok;
      tok.text = t.at("text").get<std::string>();
      tok.lemma = t.at("lemma").get<std::string>();
      tok.pos = parse_pos(t.at("pos").get<std::string>());
      tok.index = t.at("index").get<std::size_t>();
      if (tok.index != out.tokens.size()) {
        throw FormatError("token indices are not contiguous from 0");
      }
      out.tokens.push_back(std::move(tok));
    }
    std::size_t last_end = 0;
    for (const auto &c : j.at("noun_chunks")) {
      TokenRange r{c.at("start").get<std::size_t>(),
                   c.at("end").get<std::size_t>()};
      if (r.start >= r.end || r.end > out.tokens.size() || r.start < last_end) {
        throw FormatError("noun chunk ranges are invalid or overlap");
      }
      last_end = r.end;
      out.noun_chunks.push_back(r);
    }
  } catch (const nlohmann::json::exception &e) {
    throw FormatError(std::string("malformed tag response: ") + e.what());
  }
  return out;
}

RemoteTagger::RemoteTagger(std::string endpoint,
                           std::chrono::milliseconds timeout)
    : endpoint_(std::move(endpoint)), timeout_(timeout) {}

TagResult RemoteTagger::tag(std::string_view sentence) const {
  const std::string url = http::join_url(endpoint_, "/tag");
  const std::string body =
      nlohmann::json{{"text", std::string(sentence)}}.dump();
  http::Response res;
  try {
    res = http::post_json(url, body, timeout_);
  } catch (const http::TransportError &e) {
    throw TaggerUnavailableError(e.what());
  }
  if (res.status != 200) {
    throw TaggerUnavailableError("tagger returned HTTP " +
                                 std::to_string(res.status));
  }
  try {
    return tag_result_from_json(nlohmann::json::parse(res.body));
  } catch (const nlohmann::json::exception &e) {
    throw TaggerUnavailableError(std::string("unparseable tag response: ") +
                                 e.what());
  } catch (const FormatError &e) {
    throw TaggerUnavailableError(e.what());
  }
}

FallbackTagger::FallbackTagger(std::unique_ptr<Tagger> primary,
                               std::unique_ptr<Tagger> fallback, WarnFn warn)
    : primary_(std::move(primary)),
      fallback_(std::move(fallback)),
      warn_(std::move(warn)) {}

TagResult FallbackTagger::tag(std::string_view sentence) const {
  try {
    return primary_->tag(sentence);
  } catch (const TaggerUnavailableError &e) {
    if (warn_) {
      warn_(primary_->name() + " tagger unavailable, using " +
            fallback_->name() + ": " + e.what());
    }
    return fallback_->tag(sentence);
  }
}

std::string FallbackTagger::name() const {
  return primary_->name() + "+" + fallback_->name();
}

}  // namespace rte
