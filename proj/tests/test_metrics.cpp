#include <doctest.h>

#include <random>

#include "advqa/error.hpp"
#include "advqa/metrics.hpp"
#include "oracles.hpp"

using namespace advqa;
using namespace advqa::metrics;

TEST_CASE("normalization") {
  CHECK(normalize_answer("The Denver Broncos") == std::vector<std::string>{"denver", "broncos"});
  CHECK(normalize_answer("").empty());
  CHECK(normalize_answer("24-10") == std::vector<std::string>{"24", "10"});
  CHECK(normalize_answer("24–10") == std::vector<std::string>{"24", "10"});
  CHECK(normalize_answer("  A  an THE ") .empty());
  CHECK(normalize_answer("Zürich's") == std::vector<std::string>{"zürich", "s"});
}

TEST_CASE("exact match and F1 examples") {
  CHECK(exact_match("Panthers", {"Denver Broncos"}) == 0);
  CHECK(exact_match("the Denver Broncos", {"Denver Broncos"}) == 1);
  CHECK(exact_match("", {}) == 1);
  CHECK(exact_match("x", {}) == 0);
  CHECK(f1_score("Broncos", {"Denver Broncos"}) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(f1_score("Denver Broncos", {"Denver Broncos"}) == 1.0);
  CHECK(f1_score("Panthers", {"Denver Broncos"}) == 0.0);
  CHECK(f1_score("", {"x"}) == 0.0);
  CHECK(f1_score("the", {"a"}) == 1.0);
}

TEST_CASE("random fixtures agree with the naive scorer") {
  std::mt19937_64 rng(7);
  const std::vector<std::string> vocab = {"the", "a", "denver", "broncos", "panthers", "24", "10",
                                          "super", "bowl", "an", "Denver", "BRONCOS", "win"};
  auto phrase = [&](int max_len) {
    std::string s;
    int n = static_cast<int>(rng() % static_cast<unsigned>(max_len + 1));
    for (int i = 0; i < n; ++i) {
      if (!s.empty()) s += (rng() % 5 == 0) ? ", " : " ";
      s += vocab[rng() % vocab.size()];
      if (rng() % 7 == 0) s += ".";
    }
    return s;
  };
  Dataset ds;
  PredictionSet preds;
  double em_sum = 0, f1_sum = 0;
  for (int i = 0; i < 1000; ++i) {
    QAExample ex;
    ex.id = "q" + std::to_string(i);
    ex.question = "?";
    std::vector<std::string> golds;
    int k = 1 + static_cast<int>(rng() % 3);
    for (int j = 0; j < k; ++j) {
      auto g = phrase(4);
      if (g.empty()) g = "win";
      golds.push_back(g);
    }
    for (const auto& g : golds) {
      ex.answers.push_back({g, text::length(ex.context) + (ex.context.empty() ? 0 : 1)});
      ex.context += (ex.context.empty() ? "" : " ") + g;
    }
    auto p = phrase(5);
    preds[ex.id] = p;
    CHECK(exact_match(p, golds) == oracle::em(p, golds));
    CHECK(f1_score(p, golds) == doctest::Approx(oracle::f1(p, golds)).epsilon(1e-12));
    em_sum += oracle::em(p, golds);
    f1_sum += oracle::f1(p, golds);
    ds.examples.push_back(ex);
  }
  auto rep = evaluate(ds, preds);
  CHECK(rep.n_examples == 1000);
  CHECK(rep.em == doctest::Approx(100.0 * em_sum / 1000).epsilon(1e-12));
  CHECK(rep.f1 == doctest::Approx(100.0 * f1_sum / 1000).epsilon(1e-12));
  CHECK(rep.f1 >= rep.em);
}

TEST_CASE("score invariances") {
  const std::vector<std::string> g1 = {"Denver Broncos", "the Broncos"};
  const std::vector<std::string> g2 = {"the Broncos", "Denver Broncos"};
  for (auto p : {"Broncos", "denver", "THE DENVER BRONCOS!", "Panthers"}) {
    CHECK(exact_match(p, g1) == exact_match(p, g2));
    CHECK(f1_score(p, g1) == f1_score(p, g2));
  }
  CHECK(f1_score("The broncos.", g1) == f1_score("broncos", g1));
}

TEST_CASE("evaluate: means, missing predictions, empty dataset") {
  Dataset ds;
  for (int i = 0; i < 2; ++i) {
    QAExample ex;
    ex.id = std::to_string(i);
    ex.question = "?";
    ex.context = "Denver Broncos";
    ex.answers = {{"Denver Broncos", 0}};
    ds.examples.push_back(ex);
  }
  auto r = evaluate(ds, {{"0", "Denver Broncos"}, {"1", "Panthers"}});
  CHECK(r.em == 50.0);
  CHECK(r.f1 == 50.0);
  auto m = evaluate(ds, {{"0", "Denver Broncos"}});
  CHECK(m.n_missing == 1);
  CHECK(m.em == 50.0);
  CHECK(m.warnings.size() == 1);
  CHECK_THROWS_AS(evaluate(Dataset{}, {}), Error);
}

TEST_CASE("adversarial gap and closure") {
  auto base = adversarial_gap(85.46, 68.90);
  CHECK(base.gap == doctest::Approx(-16.56).epsilon(1e-12));
  auto ent = adversarial_gap(90.73, 89.89, base.gap);
  CHECK(ent.gap == doctest::Approx(-0.84).epsilon(1e-12));
  REQUIRE(ent.closure_pct.has_value());
  CHECK(format_pct(*ent.closure_pct, 1) == "94.9");
  CHECK(gap_closure(-10.0, -10.0) == 0.0);
  CHECK(gap_closure(-10.0, 0.0) == 100.0);
}

TEST_CASE("display rounding is half-up") {
  CHECK(format_pct(2.0 / 3.0 * 100) == "66.67");
  CHECK(format_pct(0.125, 2) == "0.13");
  CHECK(format_pct(94.8913, 1) == "94.9");
  CHECK(format_pct(-16.56) == "-16.56");
  CHECK(format_pct(0.0) == "0.00");
}

TEST_CASE("compensated sum is order independent at display precision") {
  std::vector<double> xs;
  std::mt19937_64 rng(3);
  for (int i = 0; i < 10000; ++i) xs.push_back(static_cast<double>(rng() % 1000) / 7.0);
  CompensatedSum a, b;
  for (double x : xs) a.add(x);
  for (auto it = xs.rbegin(); it != xs.rend(); ++it) b.add(*it);
  CHECK(a.value() == doctest::Approx(b.value()).epsilon(1e-15));
}
