#ifndef RTE_TEXT_H_
#define RTE_TEXT_H_

#include <string>
#include <string_view>
#include <vector>

// Unicode and string helpers shared by every stage.
namespace rte::text {

// True if the bytes form well-formed UTF-8.
bool is_valid_utf8(std::string_view s);

// NFC-normalizes, maps typographic quotes to ASCII and non-breaking spaces to
// plain spaces. Input must be valid UTF-8.
std::string clean_unicode(std::string_view s);

// Full Unicode case folding.
std::string case_fold(std::string_view s);

bool is_space(char c);

// Trims ASCII whitespace and collapses internal runs to a single space.
std::string collapse_whitespace(std::string_view s);

std::string_view trim(std::string_view s);

// Splits on ASCII whitespace.
std::vector<std::string> split_words(std::string_view s);

std::string join(const std::vector<std::string> &parts, std::string_view sep);

// Decodes UTF-8 into code points. Input must be valid.
std::u32string to_u32(std::string_view s);
std::string to_utf8(std::u32string_view s);

// Lowercase SHA-256 hex digest.
std::string sha256_hex(std::string_view data);

}  // namespace rte::text

#endif  // RTE_TEXT_H_
