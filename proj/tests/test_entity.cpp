#include <doctest.h>

#include <random>

#include "advqa/entity.hpp"
#include "advqa/error.hpp"
#include "oracles.hpp"

using namespace advqa;
using namespace advqa::entity;

namespace {

QAExample make(const std::string& context, const std::string& gold) {
  QAExample ex;
  ex.id = "e";
  ex.question = "When?";
  ex.context = context;
  ex.answers = {{gold, text::find(text::decode(context), text::decode(gold))}};
  return ex;
}

std::vector<std::string> surfaces(const HardNegativeSet& s) {
  std::vector<std::string> out;
  for (const auto& n : s.negatives) out.push_back(n.surface);
  return out;
}

}  // namespace

TEST_CASE("tokenizer offsets") {
  auto t = tokenize_with_offsets("Zürich, 24–10!");
  REQUIRE(t.tokens == std::vector<std::string>{"Zürich", ",", "24", "–", "10", "!"});
  CHECK(t.offsets[0] == text::Range{0, 6});
  CHECK(t.offsets[2] == text::Range{8, 10});
  CHECK(t.offsets[5] == text::Range{13, 14});
}

TEST_CASE("character to token mapping") {
  const std::string s = "The Denver Broncos won 24-10.";
  auto tok = tokenize_with_offsets(s);
  auto u = text::decode(s);
  CHECK(map_to_token_positions({4, 18}, tok, u) == std::pair<std::size_t, std::size_t>{1, 2});
  CHECK(map_to_token_positions({3, 11}, tok, u) == std::pair<std::size_t, std::size_t>{1, 1});
  CHECK(map_to_token_positions({23, 28}, tok, u) == std::pair<std::size_t, std::size_t>{4, 6});
  CHECK_THROWS_AS(map_to_token_positions({3, 4}, tok, u), Error);
  CHECK_THROWS_AS(map_to_token_positions({20, 99}, tok, u), Error);
}

TEST_CASE("entity typing") {
  CHECK(entity_type_of("1889") == EntityType::Year);
  CHECK(entity_type_of("Gustave Eiffel") == EntityType::Person);
  CHECK(entity_type_of("Denver") == EntityType::Location);
  CHECK(entity_type_of("Colorado Springs") == EntityType::Location);
  CHECK(entity_type_of("Levi's Stadium") == EntityType::Facility);
  CHECK(entity_type_of("March 3, 1921") == EntityType::Date);
  CHECK(entity_type_of("Globex Corp") == EntityType::Organization);
  CHECK(entity_type_of("Denver Broncos") == EntityType::Organization);
  CHECK_FALSE(entity_type_of("won the game").has_value());
}

TEST_CASE("extracted spans are sorted, disjoint and match the text") {
  const std::string s =
      "In 1998 Gustave Eiffel visited Denver, Colorado, and paid $5 million for 30% of Acme Corp on March 3, 1999.";
  auto spans = extract_entities(s);
  REQUIRE_FALSE(spans.empty());
  for (std::size_t i = 0; i < spans.size(); ++i) {
    CHECK(text::slice(s, spans[i].char_start, spans[i].char_end) == spans[i].surface);
    if (i) CHECK(spans[i - 1].char_end <= spans[i].char_start);
  }
}

TEST_CASE("2015 fixture mines 1998 and 2016") {
  auto ex = make("The company was founded in 1998. It went public in 2015 and expanded in 2016.", "2015");
  auto set = mine_hard_negatives(ex);
  REQUIRE(set.has_value());
  auto got = surfaces(*set);
  std::sort(got.begin(), got.end());
  CHECK(got == std::vector<std::string>{"1998", "2016"});
  CHECK(set->answer_span.entity_type == EntityType::Year);
}

TEST_CASE("seven-date contexts keep the five nearest") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<int> years;
    while (years.size() < 7) {
      int y = 1800 + static_cast<int>(rng() % 220);
      if (std::find(years.begin(), years.end(), y) == years.end()) years.push_back(y);
    }
    std::string ctx;
    std::vector<oracle::Candidate> cands;
    const std::size_t gold_idx = rng() % 7;
    std::size_t gs = 0, ge = 0;
    for (std::size_t i = 0; i < 7; ++i) {
      const std::string filler(static_cast<std::size_t>(rng() % 40), 'x');
      ctx += "Event " + std::to_string(i) + " " + filler + " happened in ";
      const std::size_t at = text::length(ctx);
      ctx += std::to_string(years[i]) + ". ";
      if (i == gold_idx) {
        gs = at;
        ge = at + 4;
      } else {
        cands.push_back({at, at + 4, std::to_string(years[i])});
      }
    }
    QAExample ex;
    ex.id = "d";
    ex.question = "When?";
    ex.context = ctx;
    ex.answers = {{std::to_string(years[gold_idx]), gs}};
    auto set = mine_hard_negatives(ex);
    REQUIRE(set.has_value());
    CHECK(surfaces(*set) == oracle::nearest(cands, gs, ge, 5));
  }
}

TEST_CASE("hard-negative contracts on mixed contexts") {
  const std::vector<std::string> contexts = {
      "Gustave Eiffel and Maurice Koechlin met Isaac Newton in Paris while Mary Jones and John Smith watched. "
      "Paul Young arrived later.",
      "Denver, Boston, Chicago, Seattle, Atlanta and Houston all bid in 1990, 1994 and 1998.",
  };
  for (const auto& c : contexts) {
    for (const auto& span : extract_entities(c)) {
      QAExample ex = make(c, span.surface);
      auto set = mine_hard_negatives(ex);
      if (!set) continue;
      CHECK(set->negatives.size() <= kMaxNegatives);
      for (const auto& n : set->negatives) {
        CHECK(n.entity_type == set->answer_span.entity_type);
        CHECK_FALSE(n.range().overlaps(set->answer_span.range()));
        CHECK(surface_key(n.surface) != surface_key(set->answer_span.surface));
      }
    }
  }
}

TEST_CASE("mine_corpus flags entity-rich examples") {
  Dataset ds;
  ds.examples = {make("Founded in 1998, listed in 2015.", "2015"), make("It was a quiet affair.", "quiet affair")};
  ds.examples[1].id = "q";
  auto res = mine_corpus(ds);
  CHECK(ds.examples[0].is_entity_rich);
  CHECK_FALSE(ds.examples[1].is_entity_rich);
  CHECK(res.sets.size() == 1);
  CHECK(res.stats.n_entity_rich == 1);
  CHECK(res.stats.entity_rich_fraction() == 0.5);
}
