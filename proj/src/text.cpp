#include "advqa/text.hpp"

#include <algorithm>
#include <array>
#include <unordered_set>

#include "advqa/error.hpp"

namespace advqa {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedJson: return "MalformedJson";
    case ErrorCode::SchemaViolation: return "SchemaViolation";
    case ErrorCode::OffsetMismatch: return "OffsetMismatch";
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::EmptyDataset: return "EmptyDataset";
    case ErrorCode::IneligibleExample: return "IneligibleExample";
    case ErrorCode::UnmappableSpan: return "UnmappableSpan";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::EmptyBatch: return "EmptyBatch";
    case ErrorCode::NonFiniteInput: return "NonFiniteInput";
    case ErrorCode::OutOfBounds: return "OutOfBounds";
    case ErrorCode::DivergenceDetected: return "DivergenceDetected";
    case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace advqa

namespace advqa::text {

namespace {

constexpr char32_t kReplacement = 0xFFFD;

}  // namespace

std::u32string decode(std::string_view s) {
  std::u32string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    auto b0 = static_cast<unsigned char>(s[i]);
    char32_t cp = 0;
    std::size_t n = 0;
    if (b0 < 0x80) {
      cp = b0;
      n = 1;
    } else if ((b0 & 0xE0) == 0xC0) {
      cp = b0 & 0x1F;
      n = 2;
    } else if ((b0 & 0xF0) == 0xE0) {
      cp = b0 & 0x0F;
      n = 3;
    } else if ((b0 & 0xF8) == 0xF0) {
      cp = b0 & 0x07;
      n = 4;
    } else {
      out.push_back(kReplacement);
      ++i;
      continue;
    }
    if (i + n > s.size()) {
      out.push_back(kReplacement);
      break;
    }
    bool ok = true;
    for (std::size_t k = 1; k < n; ++k) {
      auto b = static_cast<unsigned char>(s[i + k]);
      if ((b & 0xC0) != 0x80) {
        ok = false;
        break;
      }
      cp = (cp << 6) | (b & 0x3F);
    }
    if (!ok) {
      out.push_back(kReplacement);
      ++i;
      continue;
    }
    out.push_back(cp);
    i += n;
  }
  return out;
}

std::string encode(char32_t cp) {
  std::string out;
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
  return out;
}

std::string encode(std::u32string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char32_t c : text) out += encode(c);
  return out;
}

std::size_t length(std::string_view s) {
  std::size_t n = 0;
  for (char c : s) {
    if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) ++n;
  }
  return n;
}

std::string slice(std::string_view utf8, std::size_t start, std::size_t end) {
  auto cps = decode(utf8);
  if (start > end || end > cps.size()) {
    throw Error(ErrorCode::OutOfBounds, "slice [" + std::to_string(start) + ", " +
                                            std::to_string(end) + ") of length " +
                                            std::to_string(cps.size()));
  }
  return encode(std::u32string_view(cps).substr(start, end - start));
}

bool is_space(char32_t c) {
  switch (c) {
    case U' ': case U'\t': case U'\n': case U'\r': case U'\v': case U'\f':
    case 0x85: case 0xA0: case 0x1680: case 0x2028: case 0x2029: case 0x202F:
    case 0x205F: case 0x3000:
      return true;
    default:
      return c >= 0x2000 && c <= 0x200A;
  }
}

bool is_punct(char32_t c) {
  if (c < 0x80) {
    return (c >= 0x21 && c <= 0x2F) || (c >= 0x3A && c <= 0x40) || (c >= 0x5B && c <= 0x60) ||
           (c >= 0x7B && c <= 0x7E);
  }
  // Latin-1 punctuation, General Punctuation block, CJK punctuation.
  switch (c) {
    case 0xA1: case 0xA7: case 0xAB: case 0xB6: case 0xB7: case 0xBB: case 0xBF:
      return true;
    default:
      break;
  }
  return (c >= 0x2010 && c <= 0x2027) || (c >= 0x2030 && c <= 0x205E) ||
         (c >= 0x3001 && c <= 0x3003) || (c >= 0x3008 && c <= 0x3011);
}

bool is_digit(char32_t c) { return c >= U'0' && c <= U'9'; }

bool is_upper(char32_t c) {
  if (c >= U'A' && c <= U'Z') return true;
  if (c >= 0xC0 && c <= 0xDE && c != 0xD7) return true;
  if (c >= 0x391 && c <= 0x3A9) return true;
  if (c >= 0x410 && c <= 0x42F) return true;
  // Latin Extended-A alternates upper/lower.
  if (c >= 0x100 && c <= 0x17F) return (c % 2) == 0;
  return false;
}

char32_t to_lower(char32_t c) {
  if (c >= U'A' && c <= U'Z') return c + 32;
  if (c >= 0xC0 && c <= 0xDE && c != 0xD7) return c + 32;
  if (c >= 0x391 && c <= 0x3A9) return c + 32;
  if (c >= 0x410 && c <= 0x42F) return c + 32;
  if (c >= 0x100 && c <= 0x17F && (c % 2) == 0) return c + 1;
  return c;
}

bool is_alpha(char32_t c) {
  if ((c >= U'a' && c <= U'z') || (c >= U'A' && c <= U'Z')) return true;
  if (c < 0xC0) return false;
  return !is_space(c) && !is_punct(c) && c != 0xD7 && c != 0xF7;
}

std::u32string to_lower(std::u32string_view s) {
  std::u32string out(s);
  for (auto& c : out) c = to_lower(c);
  return out;
}

std::string to_lower(std::string_view utf8) { return encode(to_lower(decode(utf8))); }

std::string trim(std::string_view utf8) {
  auto cps = decode(utf8);
  std::size_t b = 0;
  std::size_t e = cps.size();
  while (b < e && is_space(cps[b])) ++b;
  while (e > b && is_space(cps[e - 1])) --e;
  return encode(std::u32string_view(cps).substr(b, e - b));
}

std::vector<Range> split_sentences(std::u32string_view t) {
  std::vector<Range> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] != U'.' && t[i] != U'!' && t[i] != U'?') continue;
    std::size_t j = i + 1;
    // Closing quotes/brackets stay with the sentence they end.
    while (j < t.size() && (t[j] == U'"' || t[j] == U'\'' || t[j] == U')' || t[j] == 0x201D ||
                            t[j] == 0x2019)) {
      ++j;
    }
    std::size_t k = j;
    while (k < t.size() && is_space(t[k])) ++k;
    if (k == j || k >= t.size()) continue;
    if (!is_upper(t[k])) continue;
    out.push_back({start, k});
    start = k;
    i = k - 1;
  }
  if (start < t.size() || out.empty()) out.push_back({start, t.size()});
  return out;
}

std::size_t sentence_index(const std::vector<Range>& sentences, std::size_t pos) {
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    if (pos < sentences[i].end) return i;
  }
  return sentences.empty() ? 0 : sentences.size() - 1;
}

std::vector<std::string> cue_words(std::string_view utf8) {
  auto cps = to_lower(decode(utf8));
  std::vector<std::string> out;
  std::u32string cur;
  auto flush = [&] {
    while (!cur.empty() && cur.back() == U'\'') cur.pop_back();
    std::size_t b = 0;
    while (b < cur.size() && cur[b] == U'\'') ++b;
    if (b < cur.size()) out.push_back(encode(std::u32string_view(cur).substr(b)));
    cur.clear();
  };
  for (char32_t c : cps) {
    if (c == 0x2019 || c == 0x2018) c = U'\'';
    if (c == U'\'' || (!is_space(c) && !is_punct(c))) {
      cur.push_back(c);
    } else {
      flush();
    }
  }
  flush();
  return out;
}

const std::vector<std::string>& negation_markers() {
  static const std::vector<std::string> kMarkers = {
      "not",   "no",    "never",  "none",   "n't",    "cannot", "can't",  "didn't", "doesn't",
      "don't", "won't", "wasn't", "weren't", "isn't", "aren't", "neither", "nor"};
  return kMarkers;
}

bool is_negation_word(std::string_view w) {
  static const std::unordered_set<std::string_view> kSet = [] {
    std::unordered_set<std::string_view> s;
    for (const auto& m : negation_markers()) s.insert(m);
    return s;
  }();
  if (kSet.contains(w)) return true;
  // Any other contraction ("couldn't", "hasn't") is covered by the n't marker.
  return w.size() > 3 && w.substr(w.size() - 3) == "n't";
}

bool contains_negation(std::string_view utf8) {
  auto words = cue_words(utf8);
  return std::any_of(words.begin(), words.end(),
                     [](const std::string& w) { return is_negation_word(w); });
}

std::size_t find(std::u32string_view hay, std::u32string_view needle, std::size_t from) {
  if (needle.empty()) return std::u32string_view::npos;
  return hay.find(needle, from);
}

}  // namespace advqa::text
