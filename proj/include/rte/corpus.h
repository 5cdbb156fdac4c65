#ifndef RTE_CORPUS_H_
#define RTE_CORPUS_H_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace rte {

// Byte offsets [start, end) into SegmentedDocument::source.
struct CharSpan {
  std::size_t start = 0;
  std::size_t end = 0;

  bool operator==(const CharSpan &) const = default;
};

struct Sentence {
  std::string sentence_id;
  std::string text;
  CharSpan char_span;

  bool operator==(const Sentence &) const = default;
};

struct Paragraph {
  std::size_t index = 0;
  std::optional<std::string> section_label;
  std::vector<Sentence> sentences;

  bool operator==(const Paragraph &) const = default;
};

// A standards document split into paragraphs and sentences. `source` is the
// cleaned text (NFC, ASCII quotes, LF line endings) that spans point into.
struct SegmentedDocument {
  std::string doc_id;
  std::string source;
  std::vector<Paragraph> paragraphs;

  std::size_t sentence_count() const;

  bool operator==(const SegmentedDocument &) const = default;
};

// Sentence boundaries found inside one paragraph's text.
struct SentenceSlice {
  CharSpan span;
  std::string text;  // whitespace-collapsed
};

// Segments raw bytes. Paragraphs are maximal runs of non-blank lines; a line
// that opens with a clause label ("1.01 ", "3. ") or a Markdown heading
// starts a paragraph of its own. Labels go to section_label and are excluded
// from sentence spans.
//
// Throws InputEncodingError on invalid UTF-8 and EmptyDocumentError when no
// sentence survives.
SegmentedDocument load_document(std::string_view source,
                                const std::string &doc_id);

// Splits on '.', '?', '!' and ';' followed by whitespace or end of text, with
// a guard for common abbreviations. `offset` is added to every span.
std::vector<SentenceSlice> split_into_sentences(std::string_view paragraph,
                                                std::size_t offset = 0);

// Convenience overload returning only sentence texts.
std::vector<std::string> split_sentence_texts(std::string_view paragraph);

// Clause label at the start of a line ("8.02", "1."), if any. Returns the
// label text without trailing dot and the number of bytes to strip
// (label plus following whitespace).
struct ClauseLabel {
  std::string label;
  std::size_t length = 0;
};
std::optional<ClauseLabel> match_clause_label(std::string_view line);

// JSON with stable key order; `source` is not serialized.
nlohmann::ordered_json to_json(const SegmentedDocument &doc);

}  // namespace rte

#endif  // RTE_CORPUS_H_
