#include <doctest.h>

#include "advqa/error.hpp"
#include "advqa/metrics.hpp"
#include "advqa/taxonomy.hpp"
#include "taxonomy_fixture.hpp"

using namespace advqa;
using namespace advqa::taxonomy;

namespace {

const std::vector<TaxonomyCase>& cases() {
  static const auto c = load_taxonomy_cases(std::string(ADVQA_FIXTURES) + "/taxonomy_cases.json");
  return c;
}

QAExample simple(const std::string& id, const std::string& q, const std::string& ctx, const std::string& gold) {
  QAExample ex;
  ex.id = id;
  ex.question = q;
  ex.context = ctx;
  ex.answers = {{gold, text::find(text::decode(ctx), text::decode(gold))}};
  return ex;
}

}  // namespace

TEST_CASE("hand-labeled fixture: every scheme agrees") {
  REQUIRE(cases().size() == 50);
  std::size_t errors = 0;
  for (const auto& c : cases()) {
    CAPTURE(c.example.id);
    REQUIRE_FALSE(validate(c.example).has_value());
    CHECK(to_string(classify_question_type(c.example.question)) == c.question_type);
    CHECK(to_string(classify_answer_type(c.example.answers[0].text)) == c.answer_type);
    CHECK(to_string(classify_complexity(c.example.question)) == c.complexity);
    const bool wrong = metrics::exact_match(c.prediction, metrics::gold_texts(c.example)) == 0;
    REQUIRE(wrong == c.error_type.has_value());
    if (!wrong) continue;
    ++errors;
    CHECK(to_string(classify_error_type(c.example, c.prediction)) == *c.error_type);
    PatternSet want;
    for (const auto& p : *c.patterns) want.insert(parse_label<Pattern>(p));
    CHECK(detect_patterns(c.example, c.prediction) == want);
  }
  CHECK(errors >= 30);
}

TEST_CASE("classifier examples") {
  CHECK(classify_question_type("Who won Super Bowl 50?") == QuestionType::Who);
  CHECK(classify_question_type("How many points did they score?") == QuestionType::Number);
  CHECK(classify_question_type("Name the team.") == QuestionType::Other);
  CHECK(classify_answer_type("24-10") == AnswerType::Score);
  CHECK(classify_answer_type("1889") == AnswerType::Year);
  CHECK(classify_answer_type("Denver Broncos") == AnswerType::ShortPhrase);
  CHECK(classify_complexity("Why did the war start?") == Complexity::Causal);
  CHECK(classify_complexity("Who won?") == Complexity::Simple);
  CHECK(classify_complexity("What is the largest city?") == Complexity::Superlative);
  CHECK(table_label(QuestionType::When) == QuestionType::Other);
  CHECK(table_label(QuestionType::Who) == QuestionType::Who);
}

TEST_CASE("single-label schemes are total") {
  for (auto q : {"", "?", "...", "12345", "who who who", "ÉCOLE?"}) {
    CHECK_NOTHROW(classify_question_type(q));
    CHECK_NOTHROW(classify_complexity(q));
    CHECK_NOTHROW(classify_answer_type(q));
  }
}

TEST_CASE("labels round-trip through their names") {
  for (auto v : kQuestionTypes) CHECK(parse_label<QuestionType>(to_string(v)) == v);
  for (auto v : kAnswerTypes) CHECK(parse_label<AnswerType>(to_string(v)) == v);
  for (auto v : kComplexities) CHECK(parse_label<Complexity>(to_string(v)) == v);
  for (auto v : kErrorTypes) CHECK(parse_label<ErrorType>(to_string(v)) == v);
  for (auto v : kPatterns) CHECK(parse_label<Pattern>(to_string(v)) == v);
  CHECK_THROWS_AS(parse_label<Pattern>("Sarcasm"), Error);
}

TEST_CASE("Partial and Wrong_Year") {
  auto ex = simple("p", "Who won?", "The Denver Broncos won in 1889 and 1887.", "Denver Broncos");
  CHECK(classify_error_type(ex, "Broncos") == ErrorType::Partial);
  auto yr = simple("y", "When?", "Built in 1889, not 1887.", "1889");
  CHECK(classify_error_type(yr, "1887") == ErrorType::WrongYear);
  CHECK(detect_patterns(yr, "1887").contains(Pattern::Numeric));
}

TEST_CASE("analyze: records, histograms, co-occurrence, determinism") {
  Dataset ds;
  PredictionSet preds;
  for (int i = 0; i < 2; ++i) {
    auto ex = simple("neg" + std::to_string(i), "Where was the new arena built?",
                     "The new arena was built in Denver during 1995. Contrary to popular belief, Boston is not the "
                     "correct answer.",
                     "Denver");
    const auto at = text::find(text::decode(ex.context), U"Contrary");
    ex.distractor_spans = {{at, text::length(ex.context)}};
    REQUIRE_FALSE(validate(ex).has_value());
    preds[ex.id] = "Boston";
    ds.examples.push_back(ex);
  }
  for (int i = 0; i < 8; ++i) {
    auto ex = simple("plain" + std::to_string(i), "Why did the war start?",
                     "The war started because of a border dispute over farmland. Trade routes were also contested.",
                     "a border dispute over farmland");
    preds[ex.id] = "Trade routes";
    ds.examples.push_back(ex);
  }
  auto ok = simple("right", "Who won?", "Denver won.", "Denver");
  preds["right"] = "Denver";
  ds.examples.push_back(ok);

  auto r = analyze(ds, preds);
  CHECK(r.n_examples == 11);
  CHECK(r.n_errors == 10);
  CHECK(r.records.size() == 10);
  CHECK(r.co_occurrence_pct(Pattern::Negation, Pattern::EntitySubstitution) == doctest::Approx(20.0));
  CHECK(r.co_occurrence_pct(Pattern::EntitySubstitution, Pattern::Negation) == doctest::Approx(20.0));
  CHECK(r.pattern_pct(Pattern::Negation) == doctest::Approx(20.0));
  std::size_t total = 0;
  for (const auto& [k, v] : r.question_type) total += v.total;
  CHECK(total == 11);
  CHECK(r.question_type.at(QuestionType::Who).correct == 1);
  std::size_t et = 0;
  for (const auto& [k, v] : r.error_type) et += v;
  CHECK(et == 10);
  for (auto p : kPatterns) CHECK(r.pattern_pct(p) <= 100.0);

  for (unsigned threads : {2u, 3u, 8u}) CHECK(analyze(ds, preds, threads) == r);
  Dataset rev = ds;
  std::reverse(rev.examples.begin(), rev.examples.end());
  auto rr = analyze(rev, preds);
  CHECK(rr.error_type == r.error_type);
  CHECK(rr.patterns == r.patterns);
  CHECK(rr.co_occurrence == r.co_occurrence);
}

TEST_CASE("analyze: degenerate all-negation errors and warnings") {
  Dataset ds;
  PredictionSet preds;
  for (int i = 0; i < 4; ++i) {
    auto ex = simple("n" + std::to_string(i), "Which team did not qualify?",
                     "The Lions did not qualify for the playoffs. The Bears qualified easily.", "The Lions");
    preds[ex.id] = "The Bears";
    ds.examples.push_back(ex);
  }
  auto r = analyze(ds, preds);
  CHECK(r.pattern_pct(Pattern::Negation) == 100.0);
  CHECK_FALSE(r.warnings.empty());
  CHECK_THROWS_AS(analyze(Dataset{}, {}), Error);
}
