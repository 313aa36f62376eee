#include "advqa/taxonomy.hpp"

#include <algorithm>
#include <cmath>
#include <regex>
#include <set>
#include <thread>
#include <unordered_set>

#include "advqa/entity.hpp"
#include "advqa/error.hpp"
#include "advqa/gazetteer.hpp"
#include "advqa/metrics.hpp"

namespace advqa::taxonomy {

namespace gz = advqa::gazetteer;

std::string_view to_string(QuestionType v) {
  switch (v) {
    case QuestionType::What: return "What";
    case QuestionType::Who: return "Who";
    case QuestionType::Where: return "Where";
    case QuestionType::When: return "When";
    case QuestionType::Number: return "Number";
    case QuestionType::WhyHow: return "Why/How";
    case QuestionType::Other: return "Other";
  }
  return "Other";
}

std::string_view to_string(AnswerType v) {
  switch (v) {
    case AnswerType::Score: return "Score";
    case AnswerType::Venue: return "Venue";
    case AnswerType::Location: return "Location";
    case AnswerType::Date: return "Date";
    case AnswerType::LongPhrase: return "Long_Phrase";
    case AnswerType::ShortPhrase: return "Short_Phrase";
    case AnswerType::Year: return "Year";
  }
  return "Short_Phrase";
}

std::string_view to_string(Complexity v) {
  switch (v) {
    case Complexity::Simple: return "Simple";
    case Complexity::MultiPart: return "Multi_Part";
    case Complexity::Complex: return "Complex";
    case Complexity::Superlative: return "Superlative";
    case Complexity::Counting: return "Counting";
    case Complexity::Comparison: return "Comparison";
    case Complexity::Causal: return "Causal";
  }
  return "Complex";
}

std::string_view to_string(ErrorType v) {
  switch (v) {
    case ErrorType::WrongPhrase: return "Wrong_Phrase";
    case ErrorType::Partial: return "Partial";
    case ErrorType::DistantDistractor: return "Distant_Distractor";
    case ErrorType::NearDistractor: return "Near_Distractor";
    case ErrorType::WrongYear: return "Wrong_Year";
    case ErrorType::Other: return "Other";
  }
  return "Other";
}

std::string_view to_string(Pattern v) {
  switch (v) {
    case Pattern::Negation: return "Negation";
    case Pattern::EntitySubstitution: return "Entity_Substitution";
    case Pattern::Numeric: return "Numeric";
    case Pattern::Additive: return "Additive";
    case Pattern::Paraphrase: return "Paraphrase";
    case Pattern::Modal: return "Modal";
    case Pattern::ComparativeSuperlative: return "Comparative/Superlative";
    case Pattern::Temporal: return "Temporal";
    case Pattern::ListEnumeration: return "List_Enumeration";
    case Pattern::Coreference: return "Coreference";
  }
  return "Negation";
}

QuestionType table_label(QuestionType v) { return v == QuestionType::When ? QuestionType::Other : v; }

namespace {

template <class E, std::size_t N>
E parse_from(const std::array<E, N>& all, std::string_view s) {
  for (auto v : all) {
    if (to_string(v) == s) return v;
  }
  throw Error(ErrorCode::SchemaViolation, "unknown label '" + std::string(s) + "'");
}

}  // namespace

template <>
QuestionType parse_label<QuestionType>(std::string_view s) { return parse_from(kQuestionTypes, s); }
template <>
AnswerType parse_label<AnswerType>(std::string_view s) { return parse_from(kAnswerTypes, s); }
template <>
Complexity parse_label<Complexity>(std::string_view s) { return parse_from(kComplexities, s); }
template <>
ErrorType parse_label<ErrorType>(std::string_view s) { return parse_from(kErrorTypes, s); }
template <>
Pattern parse_label<Pattern>(std::string_view s) { return parse_from(kPatterns, s); }

std::size_t PatternSet::size() const {
  std::size_t n = 0;
  for (auto p : kPatterns) n += contains(p) ? 1 : 0;
  return n;
}

std::vector<Pattern> PatternSet::to_vector() const {
  std::vector<Pattern> out;
  for (auto p : kPatterns) {
    if (contains(p)) out.push_back(p);
  }
  return out;
}

namespace {

using Words = std::vector<std::string>;

bool has(const Words& w, std::string_view x) { return std::find(w.begin(), w.end(), x) != w.end(); }

bool has_any(const Words& w, std::initializer_list<std::string_view> xs) {
  return std::any_of(xs.begin(), xs.end(), [&](std::string_view x) { return has(w, x); });
}

bool has_phrase(const Words& w, std::string_view a, std::string_view b) {
  for (std::size_t i = 0; i + 1 < w.size(); ++i) {
    if (w[i] == a && w[i + 1] == b) return true;
  }
  return false;
}

bool how_many(const Words& w) { return has_phrase(w, "how", "many") || has_phrase(w, "how", "much"); }

std::optional<QuestionType> wh_type(std::string_view w) {
  if (w == "what" || w == "which") return QuestionType::What;
  if (w == "who" || w == "whom" || w == "whose") return QuestionType::Who;
  if (w == "where") return QuestionType::Where;
  if (w == "when") return QuestionType::When;
  if (w == "why" || w == "how") return QuestionType::WhyHow;
  return std::nullopt;
}

bool ends_with(std::string_view s, std::string_view suf) {
  return s.size() >= suf.size() && s.substr(s.size() - suf.size()) == suf;
}

bool starts_with(std::string_view s, std::string_view pre) { return s.substr(0, pre.size()) == pre; }

const std::unordered_set<std::string_view> kEstNonSuperlatives = {
    "west",    "rest",    "test",    "interest", "forest",   "request",  "contest",
    "protest", "guest",   "quest",   "honest",   "modest",   "earnest",  "harvest",
    "suggest", "digest",  "nest",    "chest",    "crest",    "arrest",   "invest",
    "manifest", "conquest", "inquest", "southwest", "northwest", "midwest", "priest",
    "pest",    "vest",    "zest",    "jest",     "attest",   "detest",   "unrest",
    "bequest", "everest", "budapest", "protest", "arrest",  "ingest",   "infest",
    "tempest", "molest",  "celest",  "digest"};

bool is_superlative_word(std::string_view w) {
  if (w == "most" || w == "least" || w == "first" || w == "best" || w == "worst") return true;
  return w.size() >= 5 && ends_with(w, "est") && !kEstNonSuperlatives.contains(w);
}

bool comparative_cue(const Words& w) {
  if (has_any(w, {"versus", "vs", "compared"})) return true;
  for (std::size_t i = 0; i + 1 < w.size(); ++i) {
    if (w[i + 1] == "than" && (w[i] == "rather" || (w[i].size() > 3 && ends_with(w[i], "er")))) return true;
    // "more points than": quantity words may sit up to three words before "than"
    if (w[i] == "more" || w[i] == "less" || w[i] == "fewer") {
      for (std::size_t k = i + 1; k < w.size() && k <= i + 4; ++k) {
        if (w[k] == "than") return true;
      }
    }
  }
  return false;
}

const std::unordered_set<std::string_view> kStopwords = {
    "a",    "an",   "the",  "of",   "in",   "on",   "at",   "to",   "for",  "by",   "with",
    "from", "and",  "or",   "but",  "is",   "are",  "was",  "were", "be",   "been", "it",
    "its",  "this", "that", "as",   "which", "who", "what", "when", "where", "did", "do",
    "does", "had",  "has",  "have", "he",   "she",  "they", "their", "his", "her", "there"};

std::vector<std::string> content_tokens(std::string_view s) {
  std::vector<std::string> out;
  for (auto& t : metrics::normalize_answer(s)) {
    if (!kStopwords.contains(t)) out.push_back(std::move(t));
  }
  return out;
}

double jaccard(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::set<std::string> sa(a.begin(), a.end());
  std::set<std::string> sb(b.begin(), b.end());
  if (sa.empty() && sb.empty()) return 0.0;
  std::size_t inter = 0;
  for (const auto& x : sa) inter += sb.count(x);
  return static_cast<double>(inter) / static_cast<double>(sa.size() + sb.size() - inter);
}

bool contiguous_sub(const std::vector<std::string>& small, const std::vector<std::string>& big) {
  if (small.empty() || small.size() >= big.size()) return false;
  return std::search(big.begin(), big.end(), small.begin(), small.end()) != big.end();
}

std::vector<std::string> numbers_in(std::string_view s) {
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    if (cur.empty()) return;
    auto nz = cur.find_first_not_of('0');
    out.push_back(nz == std::string::npos ? "0" : cur.substr(nz));
    cur.clear();
  };
  for (std::size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (c >= '0' && c <= '9') {
      cur.push_back(c);
    } else if (c == ',' && !cur.empty() && i + 1 < s.size() && s[i + 1] >= '0' && s[i + 1] <= '9') {
      continue;
    } else {
      flush();
    }
  }
  flush();
  std::sort(out.begin(), out.end());
  return out;
}

// Where the prediction string sits in the context: inside a distractor span
// if it occurs there, else in a sentence opened by an additive cue, else its
// first occurrence.
struct Located {
  std::optional<text::Range> span;
  std::size_t sentence = 0;
  bool in_distractor = false;
  std::optional<text::Range> distractor;
};

bool additive_opening(std::string_view sentence) {
  static constexpr std::string_view kCues[] = {"however",     "some claim", "some sources",
                                               "contrary to", "some say",   "some might",
                                               "some believe", "reportedly", "allegedly",
                                               "according to some"};
  auto lowered = text::to_lower(text::trim(sentence));
  for (auto c : kCues) {
    if (starts_with(lowered, c)) return true;
  }
  return false;
}

struct ContextView {
  std::u32string ctx;
  std::vector<text::Range> sentences;

  explicit ContextView(const QAExample& ex)
      : ctx(text::decode(ex.context)), sentences(text::split_sentences(ctx)) {}

  std::string sentence_text(std::size_t i) const {
    const auto& r = sentences[i];
    return text::encode(std::u32string_view(ctx).substr(r.start, r.size()));
  }
};

Located locate(const QAExample& ex, const ContextView& cv, std::string_view prediction) {
  Located out;
  auto needle = text::decode(text::trim(prediction));
  if (needle.empty()) return out;
  std::vector<std::size_t> hits;
  for (auto p = text::find(cv.ctx, needle); p != std::u32string::npos; p = text::find(cv.ctx, needle, p + 1)) {
    hits.push_back(p);
  }
  if (hits.empty()) {
    auto lc = text::to_lower(cv.ctx);
    auto ln = text::to_lower(needle);
    for (auto p = text::find(lc, ln); p != std::u32string::npos; p = text::find(lc, ln, p + 1)) {
      hits.push_back(p);
    }
  }
  if (hits.empty()) return out;
  auto pick = [&](std::size_t p) {
    out.span = text::Range{p, p + needle.size()};
    out.sentence = text::sentence_index(cv.sentences, p);
    for (const auto& d : ex.distractor_spans) {
      if (d.contains(*out.span)) {
        out.in_distractor = true;
        out.distractor = d;
      }
    }
  };
  for (auto p : hits) {
    for (const auto& d : ex.distractor_spans) {
      if (d.contains(text::Range{p, p + needle.size()})) {
        pick(p);
        return out;
      }
    }
  }
  for (auto p : hits) {
    if (additive_opening(cv.sentence_text(text::sentence_index(cv.sentences, p)))) {
      pick(p);
      return out;
    }
  }
  pick(hits.front());
  return out;
}

// The gold answer closest to the prediction (best F1, first on ties).
const Answer* best_gold(const QAExample& ex, std::string_view prediction) {
  const Answer* best = nullptr;
  double best_f1 = -1.0;
  for (const auto& a : ex.answers) {
    double f = metrics::f1_score(prediction, {a.text});
    if (f > best_f1) {
      best_f1 = f;
      best = &a;
    }
  }
  return best;
}

}  // namespace

QuestionType classify_question_type(std::string_view question) {
  auto w = text::cue_words(question);
  if (how_many(w)) return QuestionType::Number;
  if (!w.empty()) {
    if (auto t = wh_type(w.front())) return *t;
  }
  for (const auto& x : w) {
    if (auto t = wh_type(x)) return *t;
  }
  return QuestionType::Other;
}

AnswerType classify_answer_type(std::string_view gold) {
  static const std::regex kScore(R"(\d+\s*(-|–|—)\s*\d+)");
  static const std::regex kDmy(R"((^|\D)\d{1,2}/\d{1,2}/(\d{4}|\d{2})($|\D))");
  static const std::regex kDecade(R"((^|\D)\d{4}s($|\W))");
  const std::string s = text::trim(gold);
  if (std::regex_search(s, kScore)) return AnswerType::Score;

  std::string core = s;
  while (!core.empty() && text::is_punct(static_cast<unsigned char>(core.back()))) core.pop_back();
  if (core.size() == 4 && std::all_of(core.begin(), core.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    int v = std::stoi(core);
    if (v >= 1000 && v <= 2999) return AnswerType::Year;
  }

  auto tw = entity::tokenize_with_offsets(s);
  for (const auto& tok : tw.tokens) {
    if (tok.size() >= 3 && text::is_upper(static_cast<unsigned char>(tok.front())) &&
        gz::month_number(tok) != 0 && !(tok == "May" && tw.tokens.size() == 1)) {
      return AnswerType::Date;
    }
  }
  if (std::regex_search(s, kDmy) || std::regex_search(s, kDecade)) return AnswerType::Date;

  for (const auto& tok : tw.tokens) {
    if (gz::is_venue_keyword(text::to_lower(tok))) return AnswerType::Venue;
  }

  std::string place = core;
  if (starts_with(place, "the ") || starts_with(place, "The ")) place = place.substr(4);
  if (gz::is_location(place)) return AnswerType::Location;
  if (auto comma = place.find(", "); comma != std::string::npos) {
    if (gz::is_location(place.substr(0, comma)) && gz::is_location(place.substr(comma + 2))) {
      return AnswerType::Location;
    }
  }
  std::vector<std::string> words;
  for (const auto& tok : tw.tokens) {
    if (!tok.empty() && !text::is_punct(static_cast<unsigned char>(tok.front()))) words.push_back(tok);
  }
  if (words.size() > 1 && gz::is_location_head(words.back()) &&
      text::is_upper(static_cast<unsigned char>(words.front().front()))) {
    return AnswerType::Location;
  }
  if (words.size() == 1 && gz::has_location_suffix(words.front())) return AnswerType::Location;

  if (metrics::normalize_answer(s).size() > 5) return AnswerType::LongPhrase;
  return AnswerType::ShortPhrase;
}

Complexity classify_complexity(std::string_view question) {
  auto w = text::cue_words(question);
  bool caus = std::any_of(w.begin(), w.end(), [](const std::string& x) { return starts_with(x, "caus"); });
  if (has(w, "why") || (has(w, "how") && has(w, "did") && caus) ||
      std::any_of(w.begin(), w.end(), [](const std::string& x) { return starts_with(x, "reason"); })) {
    return Complexity::Causal;
  }
  if (how_many(w)) return Complexity::Counting;
  if (comparative_cue(w)) return Complexity::Comparison;
  if (std::any_of(w.begin(), w.end(), [](const std::string& x) { return is_superlative_word(x); })) {
    return Complexity::Superlative;
  }
  std::size_t wh = 0;
  bool and_wh = false;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (wh_type(w[i]) && !(w[i] == "how" && i + 1 < w.size() && (w[i + 1] == "many" || w[i + 1] == "much"))) {
      ++wh;
    }
    if ((w[i] == "and" || w[i] == "or") && i + 1 < w.size() && wh_type(w[i + 1])) and_wh = true;
  }
  if (and_wh || wh >= 2) return Complexity::MultiPart;
  // after/before/since/until are left out: in short questions they head
  // prepositional phrases far more often than clauses.
  static const std::unordered_set<std::string_view> kClauseWords = {
      "that", "while", "although", "whereas", "because", "if", "and", "or", "but", "though"};
  static const std::unordered_set<std::string_view> kPrepositions = {
      "in", "on", "at", "of", "for", "from", "to", "by", "with", "during", "into", "under", "over",
      "about", "through", "between", "among", "within", "against"};
  bool multi_clause = question.find(',') != std::string_view::npos ||
                      question.find(';') != std::string_view::npos;
  for (std::size_t i = 0; i < w.size() && !multi_clause; ++i) {
    if (kClauseWords.contains(w[i])) multi_clause = true;
    // An embedded wh-word opens a relative clause unless a preposition fronts
    // it ("in what year").
    if (i > 0 && wh_type(w[i]) && w[i] != "how" && !kPrepositions.contains(w[i - 1])) multi_clause = true;
  }
  if (w.size() <= 8 && !multi_clause) return Complexity::Simple;
  return Complexity::Complex;
}

ErrorType classify_error_type(const QAExample& ex, std::string_view prediction) {
  const Answer* gold = best_gold(ex, prediction);
  const std::string gold_text = gold ? gold->text : std::string();
  auto np = metrics::normalize_answer(prediction);
  auto ng = metrics::normalize_answer(gold_text);
  if (contiguous_sub(np, ng) || contiguous_sub(ng, np)) return ErrorType::Partial;

  ContextView cv(ex);
  auto loc = locate(ex, cv, prediction);
  if (loc.in_distractor && gold) {
    auto ds = text::sentence_index(cv.sentences, loc.distractor->start);
    auto gs = text::sentence_index(cv.sentences, gold->answer_start);
    auto dist = ds > gs ? ds - gs : gs - ds;
    return dist <= 1 ? ErrorType::NearDistractor : ErrorType::DistantDistractor;
  }
  auto tp = classify_answer_type(prediction);
  auto tg = classify_answer_type(gold_text);
  if (tp == AnswerType::Year && tg == AnswerType::Year && np != ng) return ErrorType::WrongYear;
  if (tp == tg) return ErrorType::WrongPhrase;
  return ErrorType::Other;
}

PatternSet detect_patterns(const QAExample& ex, std::string_view prediction) {
  PatternSet out;
  ContextView cv(ex);
  auto loc = locate(ex, cv, prediction);
  const Answer* gold = best_gold(ex, prediction);
  const std::string gold_text = gold ? gold->text : std::string();
  const std::string pred_sentence = loc.span ? cv.sentence_text(loc.sentence) : std::string();
  const auto qw = text::cue_words(ex.question);
  const auto sw = text::cue_words(pred_sentence);

  auto any_negation = [](const Words& w) {
    return std::any_of(w.begin(), w.end(), [](const std::string& x) { return text::is_negation_word(x); });
  };
  if (any_negation(qw) || any_negation(sw)) out.insert(Pattern::Negation);

  auto tp = entity::entity_type_of(text::trim(prediction));
  auto tg = entity::entity_type_of(gold_text);
  if (tp && tg && *tp == *tg && *tp != entity::EntityType::Misc &&
      metrics::normalize_answer(prediction) != metrics::normalize_answer(gold_text)) {
    out.insert(Pattern::EntitySubstitution);
  }

  auto pn = numbers_in(prediction);
  auto gn = numbers_in(gold_text);
  if ((!pn.empty() || !gn.empty()) && pn != gn) out.insert(Pattern::Numeric);

  if (loc.in_distractor || (loc.span && additive_opening(pred_sentence))) out.insert(Pattern::Additive);

  if (loc.span && gold) {
    auto gs = text::sentence_index(cv.sentences, gold->answer_start);
    if (gs != loc.sentence) {
      auto gold_sentence = cv.sentence_text(gs);
      if (jaccard(content_tokens(pred_sentence), content_tokens(gold_sentence)) >= 0.6 &&
          text::trim(pred_sentence) != text::trim(gold_sentence)) {
        out.insert(Pattern::Paraphrase);
      }
    }
  }

  if (has_any(sw, {"may", "might", "could", "would", "should", "can", "must"})) out.insert(Pattern::Modal);

  auto compsup = [](const Words& w) {
    return comparative_cue(w) || has_any(w, {"more", "less", "fewer", "better", "worse"}) ||
           std::any_of(w.begin(), w.end(), [](const std::string& x) { return is_superlative_word(x); });
  };
  if (compsup(qw) || compsup(sw)) out.insert(Pattern::ComparativeSuperlative);

  auto temporal = [](const Words& w) {
    return has_any(w, {"before", "after", "during", "until", "since", "prior", "following", "earlier",
                       "later", "previously", "subsequently", "meanwhile"});
  };
  if (temporal(qw) || temporal(sw)) out.insert(Pattern::Temporal);

  auto commas = std::count(pred_sentence.begin(), pred_sentence.end(), ',');
  bool list_sentence = commas >= 2 && has_any(sw, {"and", "or"});
  auto pw = text::cue_words(prediction);
  // Commas inside a single entity ("January 5, 1921", "45,000") are not list separators.
  bool list_pred = has(pw, "and") ||
                   (prediction.find(',') != std::string_view::npos && !entity::entity_type_of(text::trim(prediction)));
  if (list_sentence || list_pred) out.insert(Pattern::ListEnumeration);

  if (has_any(qw, {"he", "she", "him", "his", "hers", "it", "its", "they", "them", "their", "theirs"})) {
    auto ents = entity::extract_entities(ex.question);
    if (ents.empty()) out.insert(Pattern::Coreference);
  }
  return out;
}

double TaxonomyReport::pattern_pct(Pattern p) const {
  if (n_errors == 0) return 0.0;
  auto it = patterns.find(p);
  std::size_t c = it == patterns.end() ? 0 : it->second;
  return 100.0 * static_cast<double>(c) / static_cast<double>(n_errors);
}

double TaxonomyReport::co_occurrence_pct(Pattern a, Pattern b) const {
  if (n_errors == 0) return 0.0;
  return 100.0 * static_cast<double>(co_occurrence[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)]) /
         static_cast<double>(n_errors);
}

namespace {

struct ExampleLabels {
  QuestionType qt = QuestionType::Other;
  AnswerType at = AnswerType::ShortPhrase;
  Complexity cx = Complexity::Simple;
  int em = 0;
  bool missing = false;
  std::optional<ErrorRecord> record;
};

ExampleLabels label_example(const QAExample& ex, const PredictionSet& predictions) {
  ExampleLabels l;
  l.qt = classify_question_type(ex.question);
  const auto golds = metrics::gold_texts(ex);
  l.at = classify_answer_type(golds.empty() ? std::string() : golds.front());
  l.cx = classify_complexity(ex.question);
  auto it = predictions.find(ex.id);
  l.missing = it == predictions.end();
  const std::string pred = l.missing ? std::string() : it->second;
  l.em = l.missing ? 0 : metrics::exact_match(pred, golds);
  if (l.em == 0) {
    ErrorRecord r;
    r.example_id = ex.id;
    r.question_type = l.qt;
    r.answer_type = l.at;
    r.complexity = l.cx;
    r.error_type = classify_error_type(ex, pred);
    r.patterns = detect_patterns(ex, pred);
    r.predicted = pred;
    r.gold = golds.empty() ? std::string() : golds.front();
    l.record = std::move(r);
  }
  return l;
}

}  // namespace

TaxonomyReport analyze(const Dataset& dataset, const PredictionSet& predictions, unsigned threads) {
  if (dataset.empty()) throw Error(ErrorCode::EmptyDataset, "nothing to analyze");
  const std::size_t n = dataset.size();
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));

  std::vector<ExampleLabels> labels(n);
  {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (n + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
      const std::size_t lo = t * chunk;
      const std::size_t hi = std::min(n, lo + chunk);
      pool.emplace_back([&, lo, hi] {
        for (std::size_t i = lo; i < hi; ++i) labels[i] = label_example(dataset.examples[i], predictions);
      });
    }
  }

  TaxonomyReport rep;
  rep.n_examples = n;
  bool missing_distractors = false;
  std::size_t missing_predictions = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& l = labels[i];
    const int c = l.em;
    auto bump = [c](LabelStats& s) {
      ++s.total;
      s.correct += static_cast<std::size_t>(c);
    };
    bump(rep.question_type[l.qt]);
    bump(rep.answer_type[l.at]);
    bump(rep.complexity[l.cx]);
    missing_predictions += l.missing ? 1 : 0;
    if (!l.record) continue;
    ++rep.n_errors;
    ++rep.error_type[l.record->error_type];
    auto ps = l.record->patterns.to_vector();
    for (auto a : ps) {
      ++rep.patterns[a];
      for (auto b : ps) ++rep.co_occurrence[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
    }
    if (dataset.examples[i].distractor_spans.empty()) missing_distractors = true;
    rep.records.push_back(*l.record);
  }
  if (missing_predictions > 0) {
    rep.warnings.push_back(std::to_string(missing_predictions) + " examples have no prediction (scored 0)");
  }
  if (missing_distractors) {
    rep.warnings.push_back(
        "RequiresDistractorSpans: some errors come from examples without distractor_spans; "
        "distractor error types are unreachable for them");
  }
  return rep;
}

}  // namespace advqa::taxonomy
