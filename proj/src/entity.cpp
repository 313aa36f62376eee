#include "advqa/entity.hpp"

#include <algorithm>
#include <set>

#include "advqa/error.hpp"
#include "advqa/gazetteer.hpp"

namespace advqa::entity {

namespace gz = advqa::gazetteer;

std::string_view to_string(EntityType t) {
  switch (t) {
    case EntityType::Person: return "Person";
    case EntityType::Location: return "Location";
    case EntityType::Date: return "Date";
    case EntityType::Number: return "Number";
    case EntityType::Organization: return "Organization";
    case EntityType::Year: return "Year";
    case EntityType::Time: return "Time";
    case EntityType::Money: return "Money";
    case EntityType::Percent: return "Percent";
    case EntityType::Ordinal: return "Ordinal";
    case EntityType::Event: return "Event";
    case EntityType::Facility: return "Facility";
    case EntityType::Misc: return "Misc";
  }
  return "Misc";
}

EntityType parse_entity_type(std::string_view s) {
  for (auto t : kAllEntityTypes) {
    if (to_string(t) == s) return t;
  }
  throw Error(ErrorCode::SchemaViolation, "unknown entity type '" + std::string(s) + "'");
}

TokenizationWithOffsets tokenize_with_offsets(std::string_view utf8) {
  auto t = text::decode(utf8);
  TokenizationWithOffsets out;
  std::size_t i = 0;
  while (i < t.size()) {
    if (text::is_space(t[i])) {
      ++i;
      continue;
    }
    std::size_t j = i + 1;
    if (!text::is_punct(t[i])) {
      while (j < t.size() && !text::is_space(t[j]) && !text::is_punct(t[j])) ++j;
    }
    out.tokens.push_back(text::encode(std::u32string_view(t).substr(i, j - i)));
    out.offsets.push_back({i, j});
    i = j;
  }
  return out;
}

namespace {

struct Tok {
  std::string s;
  std::string lower;
  text::Range r;
  bool word = false;    // not punctuation
  bool digits = false;  // ASCII digits only
  bool cap = false;     // starts with an uppercase letter
};

struct Match {
  std::size_t first = 0;  // token index where the span starts
  std::size_t end = 0;    // one past the last token
  EntityType type = EntityType::Misc;
};

class Extractor {
 public:
  explicit Extractor(std::string_view utf8) : text_(text::decode(utf8)) {
    auto tw = tokenize_with_offsets(utf8);
    toks_.reserve(tw.tokens.size());
    for (std::size_t k = 0; k < tw.tokens.size(); ++k) {
      Tok t;
      t.s = tw.tokens[k];
      t.lower = text::to_lower(t.s);
      t.r = tw.offsets[k];
      char32_t c0 = text_[t.r.start];
      t.word = !text::is_punct(c0);
      t.digits = std::all_of(t.s.begin(), t.s.end(), [](char c) { return c >= '0' && c <= '9'; });
      t.cap = t.word && text::is_upper(c0);
      toks_.push_back(std::move(t));
    }
  }

  std::vector<EntitySpan> run() {
    std::vector<EntitySpan> out;
    std::size_t i = 0;
    const std::size_t n = toks_.size();
    while (i < n) {
      std::optional<Match> best;
      auto consider = [&](std::optional<Match> m) {
        if (!m || m->end <= m->first) return;
        if (!best || span_len(*m) > span_len(*best)) best = m;
      };
      consider(money(i));
      consider(percent(i));
      consider(time(i));
      consider(date(i));
      consider(year(i));
      consider(ordinal(i));
      if (!best) {
        if (std::size_t s = score_end(i); s > i) {
          i = s;
          continue;
        }
      }
      consider(number(i));
      consider(capitalized(i));
      if (!best) {
        ++i;
        continue;
      }
      EntitySpan e;
      e.char_start = toks_[best->first].r.start;
      e.char_end = toks_[best->end - 1].r.end;
      e.surface = text::encode(std::u32string_view(text_).substr(e.char_start, e.char_end - e.char_start));
      e.entity_type = best->type;
      out.push_back(std::move(e));
      i = best->end;
    }
    return out;
  }

 private:
  std::size_t span_len(const Match& m) const {
    return toks_[m.end - 1].r.end - toks_[m.first].r.start;
  }

  bool adjacent(std::size_t a, std::size_t b) const {
    return b < toks_.size() && toks_[a].r.end == toks_[b].r.start;
  }

  bool is(std::size_t k, std::string_view s) const { return k < toks_.size() && toks_[k].s == s; }
  bool lower_is(std::size_t k, std::string_view s) const {
    return k < toks_.size() && toks_[k].lower == s;
  }
  bool digits(std::size_t k) const { return k < toks_.size() && toks_[k].digits; }

  long value(std::size_t k) const {
    if (!digits(k) || toks_[k].s.size() > 9) return -1;
    return std::stol(toks_[k].s);
  }

  // Digits with adjacent thousands separators or a decimal part: 1,000 / 3.5
  std::size_t numeric_group(std::size_t i) const {
    if (!digits(i)) return i;
    std::size_t j = i + 1;
    while (j + 1 < toks_.size() && adjacent(j - 1, j) && adjacent(j, j + 1) && digits(j + 1) &&
           ((is(j, ",") && toks_[j + 1].s.size() == 3) || is(j, "."))) {
      j += 2;
    }
    return j;
  }

  std::size_t scale(std::size_t j) const {
    return j < toks_.size() && gz::is_scale_word(toks_[j].lower) ? j + 1 : j;
  }

  bool is_dash(std::size_t k) const { return is(k, "-") || is(k, "–"); }

  // Scores such as 24-10 are not entities; returns the token after the run.
  std::size_t score_end(std::size_t i) const {
    if (!digits(i)) return i;
    std::size_t j = i;
    while (is_dash(j + 1) && adjacent(j, j + 1) && adjacent(j + 1, j + 2) && digits(j + 2)) j += 2;
    return j == i ? i : j + 1;
  }

  std::size_t am_pm(std::size_t j) const {
    if (lower_is(j, "am") || lower_is(j, "pm")) return j + 1;
    if ((lower_is(j, "a") || lower_is(j, "p")) && is(j + 1, ".") && adjacent(j, j + 1) &&
        lower_is(j + 2, "m") && adjacent(j + 1, j + 2)) {
      return is(j + 3, ".") && adjacent(j + 2, j + 3) ? j + 4 : j + 3;
    }
    return j;
  }

  std::optional<Match> money(std::size_t i) const {
    if (is(i, "$") || is(i, "£") || is(i, "€")) {
      std::size_t j = numeric_group(i + 1);
      if (j > i + 1) return Match{i, scale(j), EntityType::Money};
      return std::nullopt;
    }
    std::size_t j = numeric_group(i);
    if (j == i) return std::nullopt;
    j = scale(j);
    if (j < toks_.size() && gz::is_currency_word(toks_[j].lower)) return Match{i, j + 1, EntityType::Money};
    return std::nullopt;
  }

  std::optional<Match> percent(std::size_t i) const {
    std::size_t j = numeric_group(i);
    if (j == i) {
      int v = gz::spelled_number(i < toks_.size() ? toks_[i].lower : "");
      if (v < 0) return std::nullopt;
      j = i + 1;
    }
    if (is(j, "%") && adjacent(j - 1, j)) return Match{i, j + 1, EntityType::Percent};
    if (lower_is(j, "percent")) return Match{i, j + 1, EntityType::Percent};
    if (lower_is(j, "per") && lower_is(j + 1, "cent")) return Match{i, j + 2, EntityType::Percent};
    return std::nullopt;
  }

  std::optional<Match> time(std::size_t i) const {
    if (!digits(i) || toks_[i].s.size() > 2) return std::nullopt;
    if (is(i + 1, ":") && adjacent(i, i + 1) && adjacent(i + 1, i + 2) && digits(i + 2) &&
        toks_[i + 2].s.size() == 2) {
      return Match{i, am_pm(i + 3), EntityType::Time};
    }
    long v = value(i);
    if (v >= 1 && v <= 12) {
      std::size_t j = am_pm(i + 1);
      if (j > i + 1) return Match{i, j, EntityType::Time};
    }
    return std::nullopt;
  }

  bool is_year_token(std::size_t k) const {
    if (!digits(k) || toks_[k].s.size() != 4) return false;
    long v = value(k);
    return v >= 1000 && v <= 2999;
  }

  bool is_day(std::size_t k) const {
    if (k >= toks_.size()) return false;
    if (digits(k) && toks_[k].s.size() <= 2) {
      long v = value(k);
      return v >= 1 && v <= 31;
    }
    const auto& s = toks_[k].lower;
    if (s.size() >= 3 && s.size() <= 4) {
      auto suf = s.substr(s.size() - 2);
      if ((suf == "st" || suf == "nd" || suf == "rd" || suf == "th") &&
          std::all_of(s.begin(), s.end() - 2, [](char c) { return c >= '0' && c <= '9'; })) {
        long v = std::stol(s.substr(0, s.size() - 2));
        return v >= 1 && v <= 31;
      }
    }
    return false;
  }

  bool is_month(std::size_t k) const {
    return k < toks_.size() && toks_[k].cap && gz::month_number(toks_[k].s) != 0;
  }

  std::optional<Match> date(std::size_t i) const {
    const std::size_t n = toks_.size();
    if (i >= n) return std::nullopt;
    // ISO 1999-05-12 and D/M/Y 12/05/1999
    if (digits(i) && i + 4 < n && adjacent(i, i + 1) && adjacent(i + 1, i + 2) &&
        adjacent(i + 2, i + 3) && adjacent(i + 3, i + 4) && digits(i + 2) && digits(i + 4)) {
      bool iso = toks_[i].s.size() == 4 && is_dash(i + 1) && is_dash(i + 3) &&
                 toks_[i + 2].s.size() == 2 && toks_[i + 4].s.size() == 2;
      bool dmy = toks_[i].s.size() <= 2 && is(i + 1, "/") && is(i + 3, "/") &&
                 toks_[i + 2].s.size() <= 2 &&
                 (toks_[i + 4].s.size() == 2 || toks_[i + 4].s.size() == 4);
      if (iso || dmy) return Match{i, i + 5, EntityType::Date};
    }
    // Decades: 1990s
    if (toks_[i].s.size() == 5 && toks_[i].s.back() == 's' &&
        std::all_of(toks_[i].s.begin(), toks_[i].s.end() - 1, [](char c) { return c >= '0' && c <= '9'; })) {
      return Match{i, i + 1, EntityType::Date};
    }
    if (toks_[i].cap && gz::is_weekday(toks_[i].s)) return Match{i, i + 1, EntityType::Date};
    // Day Month [Year]
    if (is_day(i) && is_month(i + 1)) {
      std::size_t j = i + 2;
      if (is(j, ".") && adjacent(j - 1, j)) ++j;
      if (is(j, ",")) ++j;
      if (is_year_token(j)) return Match{i, j + 1, EntityType::Date};
      return Match{i, i + 2, EntityType::Date};
    }
    if (!is_month(i)) return std::nullopt;
    std::size_t j = i + 1;
    bool abbrev = toks_[i].s.size() <= 4 && toks_[i].lower != "may" && toks_[i].lower != "june" &&
                  toks_[i].lower != "july";
    if (abbrev && is(j, ".") && adjacent(i, j)) ++j;
    if (is_day(j)) {
      std::size_t k = j + 1;
      if (is(k, ",")) ++k;
      if (is_year_token(k)) return Match{i, k + 1, EntityType::Date};
      return Match{i, j + 1, EntityType::Date};
    }
    if (is(j, ",") && is_year_token(j + 1)) return Match{i, j + 2, EntityType::Date};
    if (is_year_token(j)) return Match{i, j + 1, EntityType::Date};
    if (abbrev) return std::nullopt;
    static const std::set<std::string_view> kLeads = {"in",   "during", "since", "until", "by",
                                                      "early", "late",  "mid",   "from",  "through",
                                                      "of",   "last",   "next",  "each",  "every",
                                                      "before", "after"};
    if (i > 0 && kLeads.contains(toks_[i - 1].lower)) return Match{i, i + 1, EntityType::Date};
    return std::nullopt;
  }

  std::optional<Match> year(std::size_t i) const {
    if (!is_year_token(i) || numeric_group(i) != i + 1) return std::nullopt;
    return Match{i, i + 1, EntityType::Year};
  }

  std::optional<Match> ordinal(std::size_t i) const {
    if (i >= toks_.size()) return std::nullopt;
    const auto& s = toks_[i].lower;
    if (gz::spelled_ordinal(s) > 0) return Match{i, i + 1, EntityType::Ordinal};
    if (s.size() >= 3) {
      auto suf = s.substr(s.size() - 2);
      if ((suf == "st" || suf == "nd" || suf == "rd" || suf == "th") &&
          std::all_of(s.begin(), s.end() - 2, [](char c) { return c >= '0' && c <= '9'; })) {
        return Match{i, i + 1, EntityType::Ordinal};
      }
    }
    return std::nullopt;
  }

  std::optional<Match> number(std::size_t i) const {
    std::size_t j = numeric_group(i);
    if (j > i) return Match{i, scale(j), EntityType::Number};
    if (i < toks_.size() && gz::spelled_number(toks_[i].lower) >= 0) {
      return Match{i, scale(i + 1), EntityType::Number};
    }
    return std::nullopt;
  }

  bool name_word(std::size_t k) const {
    return k < toks_.size() && toks_[k].cap && !toks_[k].digits &&
           !gz::is_capitalized_stopword(toks_[k].s);
  }

  std::optional<Match> capitalized(std::size_t i) const {
    const std::size_t n = toks_.size();
    if (i >= n || !toks_[i].cap) return std::nullopt;
    std::size_t first = i;
    bool honorific = false;
    if (gz::is_honorific(toks_[i].s)) {
      std::size_t j = i + 1;
      if (is(j, ".") && adjacent(i, j)) ++j;
      if (name_word(j)) {
        honorific = true;
        first = j;
      }
    }
    if (!name_word(first)) return std::nullopt;
    std::size_t end = first + 1;
    bool event_cue = gz::is_event_cue(toks_[first].s);
    while (end < n) {
      if (name_word(end)) {
        event_cue = event_cue || gz::is_event_cue(toks_[end].s);
        ++end;
        continue;
      }
      if (toks_[end].word && gz::is_connector(toks_[end].s) && name_word(end + 1)) {
        end += 2;
        continue;
      }
      if ((is(end, "'") || is(end, "’")) && adjacent(end - 1, end) && lower_is(end + 1, "s") &&
          adjacent(end, end + 1) && name_word(end + 2)) {
        end += 3;
        continue;
      }
      if (is_dash(end) && adjacent(end - 1, end) && adjacent(end, end + 1) && name_word(end + 1)) {
        end += 2;
        continue;
      }
      // Initials: "J. R. Smith"
      if (is(end, ".") && adjacent(end - 1, end) && text::length(toks_[end - 1].s) == 1 &&
          name_word(end + 1)) {
        end += 2;
        continue;
      }
      break;
    }
    if (event_cue && digits(end) && !adjacent(end - 1, end)) ++end;
    // A lone month or weekday name that the date rules declined is not a name.
    if (end == first + 1 && (gz::month_number(toks_[first].s) != 0 || gz::is_weekday(toks_[first].s))) {
      return std::nullopt;
    }
    return Match{first, end, classify(first, end, honorific || has_honorific_before(first))};
  }

  bool has_honorific_before(std::size_t first) const {
    if (first == 0) return false;
    std::size_t k = first - 1;
    if (is(k, ".") && k > 0) --k;
    return gz::is_honorific(toks_[k].s);
  }

  EntityType classify(std::size_t first, std::size_t end, bool honorific) const {
    std::vector<std::string_view> words;
    for (std::size_t k = first; k < end; ++k) {
      if (toks_[k].word) words.push_back(toks_[k].s);
    }
    auto surface = text::encode(
        std::u32string_view(text_).substr(toks_[first].r.start, toks_[end - 1].r.end - toks_[first].r.start));
    const auto last = words.back();
    for (auto w : words) {
      if (gz::is_event_cue(w)) return EntityType::Event;
    }
    if (gz::is_facility_head(last) && words.size() > 1) return EntityType::Facility;
    for (auto w : words) {
      if (gz::is_organization_cue(w)) return EntityType::Organization;
    }
    // All-caps acronyms: NASA, IBM
    if (words.size() == 1 && text::length(last) >= 2 &&
        std::all_of(last.begin(), last.end(), [](char c) { return c >= 'A' && c <= 'Z'; })) {
      return EntityType::Organization;
    }
    if (honorific) return EntityType::Person;
    if (gz::is_location(surface)) return EntityType::Location;
    if (words.size() > 1 && gz::is_location_head(last)) return EntityType::Location;
    // "<City> <Plural>" reads as a team or company: Denver Broncos
    if (words.size() >= 2 && gz::is_location(words.front()) && last.size() > 3 && last.back() == 's') {
      return EntityType::Organization;
    }
    if (gz::is_given_name(words.front())) return EntityType::Person;
    if (words.size() == 1 && gz::has_location_suffix(last)) return EntityType::Location;
    return EntityType::Misc;
  }

  std::u32string text_;
  std::vector<Tok> toks_;
};

std::size_t distance(const text::Range& a, const text::Range& b) {
  if (a.end <= b.start) return b.start - a.end;
  if (b.end <= a.start) return a.start - b.end;
  return 0;
}

}  // namespace

std::string surface_key(std::string_view s) {
  std::string key;
  for (const auto& w : text::cue_words(s)) {
    if (w == "a" || w == "an" || w == "the") continue;
    if (!key.empty()) key += ' ';
    key += w;
  }
  return key;
}

std::vector<EntitySpan> extract_entities(std::string_view utf8) { return Extractor(utf8).run(); }

std::optional<EntityType> entity_type_of(std::string_view utf8) {
  auto ents = extract_entities(utf8);
  if (ents.size() != 1) return std::nullopt;
  auto t = text::decode(utf8);
  std::u32string rest = t.substr(0, ents[0].char_start);
  rest += U' ';
  rest += t.substr(ents[0].char_end);
  if (!surface_key(text::encode(rest)).empty()) return std::nullopt;
  return ents[0].entity_type;
}

std::pair<std::size_t, std::size_t> map_to_token_positions(const text::Range& span,
                                                           const TokenizationWithOffsets& tok,
                                                           std::u32string_view txt) {
  if (span.start >= span.end || span.end > txt.size()) {
    throw Error(ErrorCode::OutOfBounds, "span [" + std::to_string(span.start) + ", " +
                                            std::to_string(span.end) + ") outside text of length " +
                                            std::to_string(txt.size()));
  }
  std::optional<std::size_t> first;
  std::size_t last = 0;
  // Offsets are sorted, so binary search for the first token ending after start.
  auto it = std::upper_bound(tok.offsets.begin(), tok.offsets.end(), span.start,
                             [](std::size_t pos, const text::Range& r) { return pos < r.end; });
  for (auto k = static_cast<std::size_t>(it - tok.offsets.begin()); k < tok.offsets.size(); ++k) {
    if (tok.offsets[k].start >= span.end) break;
    if (!first) first = k;
    last = k;
  }
  if (!first) {
    throw Error(ErrorCode::UnmappableSpan, "span [" + std::to_string(span.start) + ", " +
                                               std::to_string(span.end) + ") covers no token");
  }
  return {*first, last};
}

std::optional<HardNegativeSet> mine_hard_negatives(const QAExample& ex) {
  if (ex.is_impossible || ex.answers.empty()) return std::nullopt;
  const auto& gold = ex.answers.front();
  const text::Range gold_range{gold.answer_start, gold.answer_start + text::length(gold.text)};
  auto ents = extract_entities(ex.context);
  auto ctx = text::decode(ex.context);
  const std::string gold_key = surface_key(gold.text);

  const EntitySpan* answer = nullptr;
  for (const auto& e : ents) {
    if (e.range() == gold_range) {
      answer = &e;
      break;
    }
    if (gold_range.contains(e.range()) && surface_key(e.surface) == gold_key) {
      answer = &e;
      break;
    }
  }
  if (answer == nullptr) return std::nullopt;

  std::vector<const EntitySpan*> cands;
  for (const auto& e : ents) {
    if (&e == answer || e.entity_type != answer->entity_type) continue;
    if (e.range().overlaps(gold_range)) continue;
    if (surface_key(e.surface) == gold_key) continue;
    cands.push_back(&e);
  }
  std::stable_sort(cands.begin(), cands.end(), [&](const EntitySpan* a, const EntitySpan* b) {
    auto da = distance(a->range(), gold_range);
    auto db = distance(b->range(), gold_range);
    return da != db ? da < db : a->char_start < b->char_start;
  });

  auto tok = tokenize_with_offsets(ex.context);
  auto with_tokens = [&](EntitySpan s) {
    auto [a, b] = map_to_token_positions(s.range(), tok, ctx);
    s.token_start = a;
    s.token_end = b;
    return s;
  };

  HardNegativeSet out;
  out.example_id = ex.id;
  out.answer_span = with_tokens(*answer);
  std::set<std::string> seen;
  for (const auto* c : cands) {
    if (out.negatives.size() == kMaxNegatives) break;
    if (!seen.insert(surface_key(c->surface)).second) continue;
    out.negatives.push_back(with_tokens(*c));
  }
  return out;
}

std::optional<HardNegativeSet> mine_and_flag(QAExample& ex) {
  auto set = mine_hard_negatives(static_cast<const QAExample&>(ex));
  ex.is_entity_rich = set && !set->negatives.empty();
  return set;
}

double MiningStats::entity_rich_fraction() const {
  return n_examples == 0 ? 0.0 : static_cast<double>(n_entity_rich) / static_cast<double>(n_examples);
}

double MiningStats::mean_negatives() const {
  return n_entity_rich == 0 ? 0.0 : static_cast<double>(n_negatives) / static_cast<double>(n_entity_rich);
}

MiningResult mine_corpus(Dataset& dataset) {
  MiningResult out;
  for (auto& ex : dataset.examples) {
    ++out.stats.n_examples;
    auto set = mine_and_flag(ex);
    if (!set) continue;
    ++out.stats.n_entity_answers;
    if (set->negatives.empty()) continue;
    ++out.stats.n_entity_rich;
    out.stats.n_negatives += set->negatives.size();
    ++out.stats.answer_type_counts[set->answer_span.entity_type];
    out.sets.push_back(std::move(*set));
  }
  return out;
}

}  // namespace advqa::entity
