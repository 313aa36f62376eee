#include <doctest.h>

#include "advqa/corpus.hpp"
#include "advqa/error.hpp"
#include "advqa/text.hpp"

using namespace advqa;

namespace {

std::string fixture(const char* name) { return read_file(std::string(ADVQA_FIXTURES) + "/" + name); }

QAExample rich_example() {
  QAExample ex;
  ex.id = "r-1";
  ex.question = "Wer gewann? \"quoted\"";
  ex.context = "Zürich won. However, some records indicate Genève instead.";
  ex.answers = {{"Zürich", 0}};
  ex.origin = Origin::Augmented;
  ex.attack_type = AttackType::EntitySwap;
  ex.loss_weight = 2.5;
  ex.is_negation = true;
  ex.is_entity_rich = true;
  ex.distractor_spans = {{12, 58}};
  return ex;
}

}  // namespace

TEST_CASE("text offsets count Unicode scalars") {
  CHECK(text::length("Zürich") == 6);
  CHECK(text::slice("Zürich is big", 0, 6) == "Zürich");
  CHECK(text::decode("–").size() == 1);
  CHECK(text::encode(text::decode("naïve — ok")) == "naïve — ok");
}

TEST_CASE("sentence splitting needs an uppercase start") {
  auto s = text::split_sentences(text::decode("It won. Then it lost. e.g. this stays."));
  REQUIRE(s.size() == 2);
  CHECK(s[0].start == 0);
  CHECK(s[1].start == 8);
  CHECK(text::sentence_index(s, 10) == 1);
}

TEST_CASE("negation markers") {
  CHECK(text::negation_markers().size() == 17);
  CHECK(text::contains_negation("They didn't win."));
  CHECK(text::contains_negation("It was never built"));
  CHECK(text::contains_negation("They didn’t win."));
  CHECK_FALSE(text::contains_negation("Nothing notable, nonetheless."));
}

TEST_CASE("parse_squad reads the fixture") {
  auto r = parse_squad(fixture("squad_mini.json"));
  CHECK(r.warnings.empty());
  REQUIRE(r.dataset.size() == 12);
  CHECK(r.dataset.version == "1.1");
  for (const auto& ex : r.dataset.examples) CHECK_FALSE(validate(ex).has_value());
  const auto& zh = r.dataset.examples[9];
  CHECK(zh.id == "zh-1");
  CHECK(text::slice(zh.context, zh.answers[0].answer_start, zh.answers[0].answer_start + 6) == "Zürich");
  const auto& imp = r.dataset.examples[8];
  CHECK(imp.is_impossible);
  CHECK(imp.answers.empty());
}

TEST_CASE("offset mismatch: strict throws, lenient drops") {
  const std::string bad =
      R"({"version":"1.1","data":[{"title":"t","paragraphs":[{"context":"Denver won.","qas":[)"
      R"({"id":"a","question":"Who?","answers":[{"text":"Denver","answer_start":3}]},)"
      R"({"id":"b","question":"Who?","answers":[{"text":"Denver","answer_start":0},{"text":"won","answer_start":0}]}]}]}]})";
  try {
    parse_squad(bad, ParseOptions{true});
    FAIL("expected OffsetMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::OffsetMismatch);
  }
  auto r = parse_squad(bad);
  REQUIRE(r.dataset.size() == 1);
  CHECK(r.dataset.examples[0].id == "b");
  CHECK(r.dataset.examples[0].answers.size() == 1);
  CHECK(r.warnings.size() == 3);
}

TEST_CASE("huge answer_start is reported, not a crash") {
  QAExample ex;
  ex.id = "x";
  ex.question = "q";
  ex.context = "abc";
  ex.answers = {{"a", static_cast<std::size_t>(-1)}};
  CHECK(validate(ex).has_value());
}

TEST_CASE("malformed input codes") {
  auto code_of = [](auto&& f) {
    try {
      f();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::Io;
  };
  CHECK(code_of([] { parse_squad("{not json"); }) == ErrorCode::MalformedJson);
  CHECK(code_of([] { parse_squad(R"({"data": 3})"); }) == ErrorCode::SchemaViolation);
  CHECK(code_of([] { parse_predictions(R"({"a":"x","a":"y"})"); }) == ErrorCode::DuplicateId);
  CHECK(code_of([] { read_file("/nonexistent/file.json"); }) == ErrorCode::Io);
  auto lenient = parse_predictions(R"({"a":"x","a":"y"})", ParseOptions{false});
  CHECK(lenient.predictions.at("a") == "y");
  CHECK(lenient.warnings.size() == 1);
}

TEST_CASE("augmented JSONL keeps every field") {
  Dataset ds;
  ds.examples = {rich_example()};
  QAExample plain;
  plain.id = "p-1";
  plain.question = "Who?";
  plain.context = "Nobody.";
  plain.is_impossible = true;
  ds.examples.push_back(plain);
  const auto bytes = write_augmented(ds);
  auto back = read_augmented(bytes);
  REQUIRE(back.dataset.size() == 2);
  CHECK(back.dataset.examples == ds.examples);
  CHECK(write_augmented(back.dataset) == bytes);
}

TEST_CASE("JSONL reader rejects bad rows in strict mode") {
  Dataset ds;
  ds.examples = {rich_example()};
  auto line = write_augmented(ds);
  CHECK_THROWS_AS(read_augmented(line + line), Error);
  auto lenient = read_augmented(line + line, ParseOptions{false});
  CHECK(lenient.dataset.size() == 1);
  CHECK(lenient.warnings.size() == 1);
  CHECK_THROWS_AS(read_augmented("{\"id\": 1}\n"), Error);
}

TEST_CASE("SQuAD write then parse is a fixed point") {
  auto first = parse_squad(fixture("squad_mini.json")).dataset;
  auto bytes = serialize_squad(first);
  auto second = parse_squad(bytes).dataset;
  CHECK(second == first);
  CHECK(serialize_squad(second) == bytes);
}
