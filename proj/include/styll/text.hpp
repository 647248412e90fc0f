#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace styll::text {

/// Byte range [begin, end) into some host string.
struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::size_t size() const { return end - begin; }
};

std::string trim(std::string_view s);
std::string to_lower_ascii(std::string_view s);
std::string to_upper_ascii(std::string_view s);

/// ASCII-only casefold; non-ASCII bytes pass through untouched.
inline std::string casefold(std::string_view s) { return to_lower_ascii(s); }

bool is_ascii(std::string_view s);
bool is_ascii_alpha(char c);
bool is_ascii_alnum(char c);
bool is_ascii_punct(char c);
bool is_ascii_space(char c);

/// Length in bytes of an end-mark character at position i: '.', '!', '?'
/// (1 byte) or the UTF-8 ellipsis U+2026 (3 bytes). 0 when s[i] starts no
/// end mark.
std::size_t end_mark_len(std::string_view s, std::size_t i);

/// One sentence of a post. Content occupies [begin, mark_begin); the terminal
/// end-mark run occupies [mark_begin, mark_end) and is empty for an
/// unterminated sentence.
struct Sentence {
  std::size_t begin = 0;
  std::size_t mark_begin = 0;
  std::size_t mark_end = 0;
};

/// Splits text into sentences. A terminator is a maximal run of end-mark
/// characters followed by whitespace or end of text; leading/trailing
/// whitespace is not part of any sentence.
std::vector<Sentence> split_sentences(std::string_view text);

/// Whitespace-delimited chunks with byte offsets.
std::vector<Span> whitespace_chunks(std::string_view text);

std::size_t count_occurrences(std::string_view haystack, std::string_view needle);

}  // namespace styll::text
