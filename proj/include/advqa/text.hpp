#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

// Unicode-aware text helpers shared by every module. All character offsets in
// the toolkit are Unicode scalar-value indices, never byte offsets.
namespace advqa::text {

std::u32string decode(std::string_view utf8);
std::string encode(std::u32string_view text);
std::string encode(char32_t cp);

// Number of scalar values in a UTF-8 string.
std::size_t length(std::string_view utf8);

// Slice by scalar-value offsets [start, end). Throws Error(OutOfBounds) when the
// range does not fit.
std::string slice(std::string_view utf8, std::size_t start, std::size_t end);

bool is_space(char32_t c);
bool is_punct(char32_t c);
bool is_digit(char32_t c);
bool is_alpha(char32_t c);
bool is_upper(char32_t c);
char32_t to_lower(char32_t c);

std::u32string to_lower(std::u32string_view s);
std::string to_lower(std::string_view utf8);
std::string trim(std::string_view utf8);

struct Range {
  std::size_t start = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - start; }
  bool contains(std::size_t pos) const { return pos >= start && pos < end; }
  bool contains(const Range& other) const { return other.start >= start && other.end <= end; }
  bool overlaps(const Range& other) const { return start < other.end && other.start < end; }
  friend bool operator==(const Range&, const Range&) = default;
};

// Sentence boundaries: one of . ! ? followed by whitespace and then an
// uppercase letter. The returned ranges tile the text (trailing whitespace
// belongs to the preceding sentence).
std::vector<Range> split_sentences(std::u32string_view text);

// Index into `sentences` of the sentence containing `pos`; positions past the
// end map to the last sentence.
std::size_t sentence_index(const std::vector<Range>& sentences, std::size_t pos);

// Lowercased word tokens that keep in-word apostrophes ("didn't" stays one
// token). Curly apostrophes are folded to ASCII. Used for cue matching.
std::vector<std::string> cue_words(std::string_view utf8);

// The fixed 17-entry negation marker list.
const std::vector<std::string>& negation_markers();

bool is_negation_word(std::string_view lowered_word);
bool contains_negation(std::string_view utf8);

// Scalar offset of the first occurrence of `needle` at or after `from`, or npos.
std::size_t find(std::u32string_view hay, std::u32string_view needle, std::size_t from = 0);

}  // namespace advqa::text
