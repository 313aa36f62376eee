#include <doctest.h>

#include "advqa/attacks.hpp"
#include "advqa/error.hpp"
#include "advqa/synthetic.hpp"

using namespace advqa;
using namespace advqa::attacks;

namespace {

QAExample eiffel() {
  QAExample ex;
  ex.id = "e";
  ex.question = "When was the Eiffel Tower built?";
  ex.context =
      "The Eiffel Tower was built in 1889 for the World's Fair. The tower was constructed by Gustave Eiffel in 1887.";
  ex.answers = {{"1889", 30}};
  return ex;
}

QAExample broncos() {
  QAExample ex;
  ex.id = "b";
  ex.question = "Who won?";
  ex.context = "The Broncos won.";
  ex.answers = {{"Broncos", 4}};
  return ex;
}

const std::string kEiffelPrefix =
    "The Eiffel Tower was built in 1889 for the World's Fair. The tower was constructed by Gustave Eiffel in 1887. ";

}  // namespace

TEST_CASE("single-example attacks") {
  auto ex = eiffel();
  auto para = gen_paraphrase_attack(ex, 42);
  REQUIRE(para.ok());
  CHECK(para.example->context == kEiffelPrefix + "Some might argue it was 1887, though this is debated.");
  auto swap = gen_entity_swap_attack(ex, 42);
  REQUIRE(swap.ok());
  CHECK(swap.example->context == kEiffelPrefix + "However, some records indicate Gustave Eiffel instead.");
  auto neg = gen_negation_attack(ex, 42);
  REQUIRE(neg.ok());
  CHECK(neg.example->context == kEiffelPrefix + "Contrary to popular belief, 1887 is not the correct answer.");
  auto num = gen_numeric_attack(ex, 42);
  REQUIRE(num.ok());
  CHECK(num.example->context.starts_with(kEiffelPrefix + "Some sources cite "));
  for (const auto* r : {&para, &swap, &neg, &num}) {
    const auto& g = *r->example;
    CHECK(g.answers == ex.answers);
    CHECK(g.origin == Origin::Augmented);
    CHECK(g.loss_weight == kDefaultWeight);
    REQUIRE(g.distractor_spans.size() == 1);
    CHECK(g.distractor_spans[0].start == text::length(kEiffelPrefix));
    CHECK(g.distractor_spans[0].end == text::length(g.context));
    CHECK_FALSE(validate(g).has_value());
  }
  CHECK(para.example->id == "e_para");
}

TEST_CASE("negation pairs") {
  auto add = gen_additive_negation_pair(broncos(), 1);
  CHECK(add.context == "The Broncos won. Some claim they didn't win.");
  CHECK(add.answers == broncos().answers);
  CHECK(add.is_negation);
  CHECK(add.loss_weight == kNegationWeight);
  auto tr = gen_transformative_negation_pair(broncos(), 1);
  REQUIRE(tr.ok());
  CHECK(tr.example->context == "The Broncos didn't win.");
  CHECK(tr.example->is_impossible);
  CHECK(tr.example->answers.empty());
  CHECK(tr.example->loss_weight == kNegationWeight);
  auto ei = gen_transformative_negation_pair(eiffel(), 1);
  REQUIRE(ei.ok());
  CHECK(ei.example->context.starts_with("The Eiffel Tower was not built in 1889"));

  auto already = broncos();
  already.context = "The Broncos did not lose.";
  already.answers = {{"Broncos", 4}};
  CHECK_THROWS_AS(gen_additive_negation_pair(already, 1), Error);
}

TEST_CASE("verb shapes") {
  auto edit = [](const std::string& s, const std::string& gold) {
    auto u = text::decode(s);
    auto at = text::find(u, text::decode(gold));
    return find_verb(u, {0, u.size()}, {at, at + text::length(gold)});
  };
  auto a = edit("The bridge was opened in 1932.", "1932");
  REQUIRE(a);
  CHECK(a->replacement == "was not");
  auto b = edit("Smith founded the company.", "Smith");
  REQUIRE(b);
  CHECK(b->base == "found");
  auto c = edit("The team has won twice.", "team");
  REQUIRE(c);
  CHECK(c->replacement == "has not");
  CHECK(regular_past_base("carried") == "carry");
  CHECK(regular_past_base("stopped") == "stop");
  CHECK(regular_past_base("created") == "create");
  CHECK_FALSE(regular_past_base("red").has_value());
  CHECK_FALSE(edit("A quiet and calm morning.", "morning"));
}

TEST_CASE("number perturbation never returns its input") {
  Rng rng(5);
  for (const std::string v : {"1889", "7", "45,000", "24", "0", "100", "3.5 million", "$12"}) {
    for (int i = 0; i < 200; ++i) {
      auto p = perturb_number(v, rng);
      REQUIRE(p.has_value());
      CHECK(*p != v);
    }
  }
  auto y = perturb_number("1889", rng);
  int d = std::abs(std::stoi(*y) - 1889);
  CHECK((d >= 1 && d <= 3));
  CHECK(perturb_number("45,000", rng)->find(',') != std::string::npos);
  CHECK_FALSE(perturb_number("no digits", rng).has_value());
}

TEST_CASE("skip reasons") {
  QAExample ex;
  ex.id = "s";
  ex.question = "What?";
  ex.context = "it rained quietly.";
  ex.answers = {{"rained", 3}};
  CHECK(gen_numeric_attack(ex, 1).reason == SkipReason::NoNumber);
  CHECK(gen_entity_swap_attack(ex, 1).reason == SkipReason::NoAlternativeEntity);
  CHECK(gen_entity_substitution(ex, 1, nullptr).reason == SkipReason::NoHardNegatives);
}

TEST_CASE("config parsing") {
  auto cfg = parse_config(
      "# comment\n"
      "attacks = paraphrase, numeric_attack\n"
      "rate = 0.25\n"
      "rate_base = dataset\n"
      "seed = 9\n"
      "template.paraphrase = Others name {X}.\n"
      "template.paraphrase = Or maybe {X}.\n",
      AttackConfig::suite());
  CHECK(cfg.attacks == std::vector<AttackType>{AttackType::Paraphrase, AttackType::NumericAttack});
  CHECK(cfg.rate == 0.25);
  CHECK(cfg.rate_base == RateBase::Dataset);
  CHECK(cfg.seed == 9);
  CHECK(cfg.templates.at(AttackType::Paraphrase) == std::vector<std::string>{"Others name {X}.", "Or maybe {X}."});
  CHECK(cfg.templates.at(AttackType::NumericAttack) == default_templates().at(AttackType::NumericAttack));
  CHECK_THROWS_AS(parse_config("rate = 2\n", AttackConfig::suite()), Error);
  CHECK_THROWS_AS(parse_config("bogus = 1\n", AttackConfig::suite()), Error);
  CHECK_THROWS_AS(parse_config("attacks = sarcasm\n", AttackConfig::suite()), Error);
  CHECK_THROWS_AS(parse_config("template.paraphrase = no placeholder\n", AttackConfig::suite()), Error);
  try {
    parse_config("rate = 0.1\nnonsense\n", AttackConfig::suite());
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("augmentation run: counts, weights, determinism, threads") {
  auto ds = synthetic::entity_corpus(300, 3);
  auto cfg = AttackConfig::suite();
  cfg.seed = 4;
  auto a = run_augmentation(ds, cfg);
  CHECK(a.report.input_size == 300);
  CHECK(a.report.attempted == static_cast<std::size_t>(std::floor(0.4 * a.report.eligible + 0.5)));
  CHECK(a.report.total_generated() + a.report.total_skipped() == a.report.attempted);
  CHECK(a.dataset.size() == 300 + a.report.total_generated());
  for (std::size_t i = 0; i < 300; ++i) CHECK(a.dataset.examples[i] == ds.examples[i]);
  cfg.threads = 4;
  auto b = run_augmentation(ds, cfg);
  CHECK(write_augmented(a.dataset) == write_augmented(b.dataset));
  CHECK(report_json(a.report) == report_json(b.report));

  auto ent = run_augmentation(ds, AttackConfig::entity_substitution());
  CHECK(ent.report.attempted == std::min<std::size_t>(60, ent.report.eligible));
  for (const auto& ex : ent.dataset.examples) {
    if (ex.attack_type == AttackType::EntitySubstitution) CHECK(ex.loss_weight == kEntityWeight);
    if (ex.origin == Origin::Clean) CHECK(ex.loss_weight == (ex.is_entity_rich ? kEntityWeight : kDefaultWeight));
  }
  CHECK_THROWS_AS(run_augmentation(Dataset{}, cfg), Error);
}

TEST_CASE("negation-pair run reproduces the dataset shape") {
  auto ds = synthetic::negation_corpus(10570, 0.076, 7);
  std::size_t neg = 0;
  for (const auto& ex : ds.examples) neg += text::contains_negation(ex.context) ? 1 : 0;
  CHECK(neg == 803);
  auto out = run_augmentation(ds, AttackConfig::negation_pairs());
  const double size_ratio = static_cast<double>(out.report.output_size) / 10570.0;
  const double share = static_cast<double>(out.report.negation_weighted) / static_cast<double>(out.report.output_size);
  CHECK(std::abs(size_ratio - 1.28) <= 0.02);
  CHECK(std::abs(share - 0.385) <= 0.02);
}
