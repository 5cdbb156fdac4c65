#include "rte/corpus.h"

#include <algorithm>
#include <array>
#include <cctype>

#include "rte/errors.h"
#include "rte/text.h"

namespace rte {

namespace {

// Abbreviations that end in a period without ending a sentence.
constexpr std::array<std::string_view, 20> kAbbreviations = {
    "e.g.", "i.e.", "etc.", "cf.",  "vs.",   "viz.", "al.",
    "dr.",  "mr.",  "mrs.", "ms.",  "no.",   "fig.", "approx.",
    "inc.", "ltd.", "jr.",  "sr.",  "st.",   "resp."};

bool is_terminator(char c) {
  return c == '.' || c == '?' || c == '!' || c == ';';
}

bool is_closer(char c) {
  return c == '"' || c == '\'' || c == ')' || c == ']';
}

bool is_abbreviation(std::string_view text, std::size_t dot) {
  std::size_t b = dot;
  while (b > 0 && !text::is_space(text[b - 1]) && text[b - 1] != '(' &&
         text[b - 1] != '"') {
    --b;
  }
  std::string word = text::case_fold(text.substr(b, dot + 1 - b));
  return std::find(kAbbreviations.begin(), kAbbreviations.end(), word) !=
         kAbbreviations.end();
}

bool is_blank(std::string_view line) { return text::trim(line).empty(); }

// Leading Markdown heading marks ("## ") or list bullets ("- ", "* ").
std::size_t marker_length(std::string_view line, bool *heading) {
  std::size_t i = 0;
  while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
  std::size_t j = i;
  if (j < line.size() && line[j] == '#') {
    while (j < line.size() && line[j] == '#') ++j;
    if (j < line.size() && (line[j] == ' ' || line[j] == '\t')) {
      *heading = true;
    } else {
      return 0;
    }
  } else if (j < line.size() &&
             (line[j] == '-' || line[j] == '*' || line[j] == '+')) {
    ++j;
    if (j >= line.size() || (line[j] != ' ' && line[j] != '\t')) return 0;
  } else if (line.substr(j).starts_with("•")) {
    j += 3;
  } else {
    return 0;
  }
  while (j < line.size() && (line[j] == ' ' || line[j] == '\t')) ++j;
  return j;
}

std::string normalize_newlines(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '\r') {
      out.push_back('\n');
      if (i + 1 < s.size() && s[i + 1] == '\n') ++i;
    } else {
      out.push_back(s[i]);
    }
  }
  return out;
}

struct PendingParagraph {
  std::optional<std::string> label;
  std::size_t start = 0;  // first content byte
  std::size_t end = 0;    // one past the last content byte
  bool open = false;
};

}  // namespace

std::size_t SegmentedDocument::sentence_count() const {
  std::size_t n = 0;
  for (const auto &p : paragraphs) n += p.sentences.size();
  return n;
}

std::optional<ClauseLabel> match_clause_label(std::string_view line) {
  std::size_t i = 0;
  while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
  const std::size_t label_start = i;
  if (i >= line.size() || !std::isdigit(static_cast<unsigned char>(line[i]))) {
    return std::nullopt;
  }
  // digits ( '.' digits )* '.'?
  while (i < line.size() && std::isdigit(static_cast<unsigned char>(line[i])))
    ++i;
  while (i + 1 < line.size() && line[i] == '.' &&
         std::isdigit(static_cast<unsigned char>(line[i + 1]))) {
    ++i;
    while (i < line.size() &&
           std::isdigit(static_cast<unsigned char>(line[i])))
      ++i;
  }
  std::size_t label_end = i;
  if (i < line.size() && line[i] == '.') ++i;
  if (i >= line.size() || (line[i] != ' ' && line[i] != '\t')) {
    return std::nullopt;
  }
  while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
  if (i >= line.size()) return std::nullopt;
  return ClauseLabel{std::string(line.substr(label_start,
                                             label_end - label_start)),
                     i};
}

std::vector<SentenceSlice> split_into_sentences(std::string_view paragraph,
                                                std::size_t offset) {
  std::vector<SentenceSlice> out;
  const std::size_t n = paragraph.size();
  std::size_t start = 0;
  auto emit = [&](std::size_t b, std::size_t e) {
    while (b < e && text::is_space(paragraph[b])) ++b;
    while (e > b && text::is_space(paragraph[e - 1])) --e;
    if (b == e) return;
    out.push_back({{offset + b, offset + e},
                   text::collapse_whitespace(paragraph.substr(b, e - b))});
  };
  for (std::size_t i = 0; i < n; ++i) {
    if (!is_terminator(paragraph[i])) continue;
    std::size_t j = i + 1;
    while (j < n && is_closer(paragraph[j])) ++j;
    if (j < n && !text::is_space(paragraph[j])) continue;
    if (paragraph[i] == '.' && j < n && is_abbreviation(paragraph, i)) continue;
    emit(start, j);
    start = j;
    i = j - 1;
  }
  emit(start, n);
  return out;
}

std::vector<std::string> split_sentence_texts(std::string_view paragraph) {
  std::vector<std::string> out;
  for (auto &s : split_into_sentences(paragraph)) out.push_back(std::move(s.text));
  return out;
}

SegmentedDocument load_document(std::string_view raw,
                                const std::string &doc_id) {
  if (!text::is_valid_utf8(raw)) {
    throw InputEncodingError("document '" + doc_id + "' is not valid UTF-8");
  }
  if (raw.starts_with("\xEF\xBB\xBF")) raw.remove_prefix(3);

  SegmentedDocument doc;
  doc.doc_id = doc_id;
  doc.source = normalize_newlines(text::clean_unicode(raw));
  const std::string_view src = doc.source;

  PendingParagraph pending;
  auto flush = [&]() {
    if (!pending.open) return;
    pending.open = false;
    if (pending.end <= pending.start) return;
    Paragraph para;
    para.index = doc.paragraphs.size();
    para.section_label = pending.label;
    auto slices = split_into_sentences(
        src.substr(pending.start, pending.end - pending.start), pending.start);
    for (auto &slice : slices) {
      Sentence s;
      s.sentence_id = doc_id + ":p" + std::to_string(para.index) + ":s" +
                      std::to_string(para.sentences.size());
      s.text = std::move(slice.text);
      s.char_span = slice.span;
      para.sentences.push_back(std::move(s));
    }
    if (!para.sentences.empty()) doc.paragraphs.push_back(std::move(para));
  };

  std::size_t pos = 0;
  while (pos <= src.size()) {
    std::size_t eol = src.find('\n', pos);
    if (eol == std::string_view::npos) eol = src.size();
    const std::string_view line = src.substr(pos, eol - pos);

    if (is_blank(line)) {
      flush();
    } else {
      bool heading = false;
      const std::size_t marker = marker_length(line, &heading);
      auto label = marker == 0 ? match_clause_label(line) : std::nullopt;
      if (marker > 0 || label) {
        flush();
        pending.open = true;
        pending.label = label ? std::optional<std::string>(label->label)
                              : std::nullopt;
        pending.start = pos + (label ? label->length : marker);
        pending.end = eol;
        if (heading) flush();
      } else if (!pending.open) {
        pending.open = true;
        pending.label.reset();
        pending.start = pos;
        pending.end = eol;
      } else {
        pending.end = eol;
      }
    }
    if (eol == src.size()) break;
    pos = eol + 1;
  }
  flush();

  if (doc.paragraphs.empty()) {
    throw EmptyDocumentError("document '" + doc_id + "' contains no text");
  }
  return doc;
}

nlohmann::ordered_json to_json(const SegmentedDocument &doc) {
  nlohmann::ordered_json paragraphs = nlohmann::ordered_json::array();
  for (const auto &p : doc.paragraphs) {
    nlohmann::ordered_json sentences = nlohmann::ordered_json::array();
    for (const auto &s : p.sentences) {
      sentences.push_back({{"sentence_id", s.sentence_id},
                           {"text", s.text},
                           {"char_span",
                            {{"start", s.char_span.start},
                             {"end", s.char_span.end}}}});
    }
    nlohmann::ordered_json para;
    para["index"] = p.index;
    para["section_label"] =
        p.section_label ? nlohmann::ordered_json(*p.section_label) : nlohmann::ordered_json();
    para["sentences"] = std::move(sentences);
    paragraphs.push_back(std::move(para));
  }
  nlohmann::ordered_json out;
  out["doc_id"] = doc.doc_id;
  out["paragraphs"] = std::move(paragraphs);
  return out;
}

}  // namespace rte
