#include "styll/text.hpp"

namespace styll::text {

bool is_ascii_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }
bool is_ascii_alnum(char c) { return is_ascii_alpha(c) || (c >= '0' && c <= '9'); }

bool is_ascii_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

bool is_ascii_punct(char c) {
  const unsigned char u = static_cast<unsigned char>(c);
  return u < 0x80 && u > 0x20 && !is_ascii_alnum(c);
}

bool is_ascii(std::string_view s) {
  for (char c : s) {
    if (static_cast<unsigned char>(c) >= 0x80) return false;
  }
  return true;
}

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && is_ascii_space(s[b])) ++b;
  while (e > b && is_ascii_space(s[e - 1])) --e;
  return std::string(s.substr(b, e - b));
}

std::string to_lower_ascii(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

std::string to_upper_ascii(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
  }
  return out;
}

std::size_t end_mark_len(std::string_view s, std::size_t i) {
  if (i >= s.size()) return 0;
  const char c = s[i];
  if (c == '.' || c == '!' || c == '?') return 1;
  // U+2026 HORIZONTAL ELLIPSIS = E2 80 A6
  if (i + 2 < s.size() && static_cast<unsigned char>(s[i]) == 0xE2 &&
      static_cast<unsigned char>(s[i + 1]) == 0x80 &&
      static_cast<unsigned char>(s[i + 2]) == 0xA6) {
    return 3;
  }
  return 0;
}

std::vector<Sentence> split_sentences(std::string_view text) {
  std::vector<Sentence> out;
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    while (i < n && is_ascii_space(text[i])) ++i;
    if (i >= n) break;
    Sentence s;
    s.begin = i;
    s.mark_begin = n;
    s.mark_end = n;
    bool terminated = false;
    while (i < n && !terminated) {
      const std::size_t m = end_mark_len(text, i);
      if (m == 0) {
        ++i;
        continue;
      }
      // Extend over the whole run of end marks.
      std::size_t run_begin = i;
      std::size_t j = i;
      while (j < n) {
        const std::size_t mm = end_mark_len(text, j);
        if (mm == 0) break;
        j += mm;
      }
      if (j >= n || is_ascii_space(text[j])) {
        s.mark_begin = run_begin;
        s.mark_end = j;
        i = j;
        terminated = true;
      } else {
        i = j;  // interior run (e.g. "3.14"), keep scanning
      }
    }
    if (!terminated) {
      // Unterminated final sentence; drop trailing whitespace from content.
      std::size_t e = n;
      while (e > s.begin && is_ascii_space(text[e - 1])) --e;
      s.mark_begin = e;
      s.mark_end = e;
      i = n;
    }
    out.push_back(s);
  }
  return out;
}

std::vector<Span> whitespace_chunks(std::string_view text) {
  std::vector<Span> out;
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    while (i < n && is_ascii_space(text[i])) ++i;
    if (i >= n) break;
    Span sp;
    sp.begin = i;
    while (i < n && !is_ascii_space(text[i])) ++i;
    sp.end = i;
    out.push_back(sp);
  }
  return out;
}

std::size_t count_occurrences(std::string_view haystack, std::string_view needle) {
  if (needle.empty()) return 0;
  std::size_t count = 0;
  std::size_t pos = haystack.find(needle);
  while (pos != std::string_view::npos) {
    ++count;
    pos = haystack.find(needle, pos + needle.size());
  }
  return count;
}

}  // namespace styll::text
