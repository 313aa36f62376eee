#include "advqa/synthetic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "advqa/error.hpp"
#include "advqa/random.hpp"

namespace advqa::synthetic {

namespace {

constexpr std::array kTeams = {"Broncos", "Panthers", "Falcons", "Ravens", "Eagles", "Giants", "Jets",
                               "Packers", "Bears",    "Lions",    "Rams",   "Titans", "Chiefs", "Saints"};
constexpr std::array kCompanies = {"Acme Corp",     "Globex",        "Initech",  "Umbrella Inc",
                                   "Hooli",         "Vandelay Inc",  "Stark Corp", "Wayne Corp",
                                   "Cyberdyne Inc", "Soylent Corp",  "Tyrell Corp", "Wonka Inc"};
constexpr std::array kPeople = {"John Smith",    "Mary Jones",   "Robert Brown", "Linda Davis",
                                "James Wilson",  "Susan Taylor", "David Clark",  "Karen Lewis",
                                "Thomas Walker", "Nancy Hall",   "Paul Young",   "Laura King"};
constexpr std::array kCities = {"Denver", "Boston", "Chicago", "Seattle", "Atlanta", "Houston",
                                "Dallas", "Miami",  "Phoenix", "Portland", "Detroit", "Austin"};
constexpr std::array kFillers = {
    "The season drew large crowds across the region.",
    "Local newspapers covered the story for weeks.",
    "Fans celebrated in the streets afterwards.",
    "The event was broadcast on national television.",
    "Tickets sold out within hours.",
};
constexpr std::array kNegationFillers = {
    "The coach did not expect such a result.",
    "Few analysts had predicted it, and none of them were sure.",
    "The stadium was never full that year.",
    "Critics said the team could not repeat the feat.",
};

template <class A>
const char* pick(const A& arr, Rng& rng) {
  return arr[uniform_index(rng, arr.size())];
}

struct Builder {
  std::string context;
  Answer answer;

  void add(const std::string& sentence) {
    if (!context.empty()) context += ' ';
    context += sentence;
  }
  // Adds a sentence holding the answer at `marker`.
  void add_answer(const std::string& before, const std::string& value, const std::string& after) {
    if (!context.empty()) context += ' ';
    answer.answer_start = text::length(context) + text::length(before);
    answer.text = value;
    context += before + value + after;
  }
};

QAExample finish(std::string id, std::string question, Builder b) {
  QAExample ex;
  ex.id = std::move(id);
  ex.question = std::move(question);
  ex.context = std::move(b.context);
  ex.answers = {b.answer};
  if (auto bad = validate(ex)) throw Error(ErrorCode::OffsetMismatch, "synthetic example " + ex.id + ": " + *bad);
  return ex;
}

}  // namespace

Dataset negation_corpus(std::size_t n, double negation_fraction, std::uint64_t seed) {
  if (!(negation_fraction >= 0.0 && negation_fraction <= 1.0)) {
    throw Error(ErrorCode::InvalidConfig, "negation fraction must lie in [0, 1]");
  }
  const auto n_neg = static_cast<std::size_t>(std::floor(static_cast<double>(n) * negation_fraction + 0.5));
  Rng rng(seed);
  std::vector<bool> negated(n, false);
  {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    for (std::size_t i = 0; i < n_neg; ++i) std::swap(idx[i], idx[i + uniform_index(rng, n - i)]);
    for (std::size_t i = 0; i < n_neg; ++i) negated[idx[i]] = true;
  }
  Dataset ds;
  ds.source_label = "synthetic-negation";
  for (std::size_t i = 0; i < n; ++i) {
    Builder b;
    std::string question;
    const int year = 1950 + static_cast<int>(uniform_index(rng, 70));
    const int kind = static_cast<int>(uniform_index(rng, 3));
    if (kind == 0) {
      const std::string winner = pick(kTeams, rng);
      std::string loser = pick(kTeams, rng);
      if (loser == winner) loser = "Vikings";
      b.add_answer("The ", winner, " won the " + std::to_string(year) + " final against the " + loser + ".");
      question = "Who won the " + std::to_string(year) + " final?";
    } else if (kind == 1) {
      const std::string person = pick(kPeople, rng);
      const std::string company = pick(kCompanies, rng);
      b.add_answer("", company, " was founded by " + person + " in " + std::to_string(year) + ".");
      question = "Which company did " + person + " found in " + std::to_string(year) + "?";
    } else {
      const std::string city = pick(kCities, rng);
      b.add_answer("The new arena was built in ", city, " during " + std::to_string(year) + ".");
      question = "Where was the new arena built?";
    }
    b.add(negated[i] ? pick(kNegationFillers, rng) : pick(kFillers, rng));
    ds.examples.push_back(finish("neg" + std::to_string(i), question, std::move(b)));
  }
  return ds;
}

namespace {

struct Fact {
  std::string sentence;     // {V} value, {C} company
  std::string distractor;   // the same claim about another company
  std::array<std::string, 3> questions;  // first wording shares the sentence's cue word
};

struct Kind {
  std::vector<Fact> facts;
  int value_kind = 0;  // 0 year, 1 person, 2 city
};

const std::array<Kind, 3>& kinds() {
  static const std::array<Kind, 3> kKinds = {{
      {{{"{C} was founded in {V}.", "{O} was founded in {V}.",
         {"When was {C} founded?", "When was {C} established?", "In what year did {C} start?"}},
        {"It was acquired by a larger corporation in {V}.", "{O} was acquired by a larger corporation in {V}.",
         {"When was {C} acquired?", "When was {C} bought?", "When did a bigger firm purchase {C}?"}},
        {"The acquisition was completed in {V}, marking a new era.", "The acquisition of {O} was completed in {V}.",
         {"When was the acquisition of {C} completed?", "When was the deal for {C} finalized?",
          "When did the takeover of {C} close?"}}},
       0},
      {{{"{V} founded {C} with a small loan.", "{V} founded {O} with a small loan.",
         {"Who founded {C}?", "Who established {C}?", "Who started {C}?"}},
        {"{V} later became chairman of the board.", "{V} became chairman of the board of {O}.",
         {"Who became chairman of the board of {C}?", "Who was named head of the board at {C}?",
          "Who chaired the board of {C}?"}},
        {"{V} joined the company as its first engineer.", "{V} joined {O} as its first engineer.",
         {"Who joined {C} as its first engineer?", "Who was the first engineer hired by {C}?",
          "Who was hired as the original engineer of {C}?"}}},
       1},
      {{{"{C} opened its first office in {V}.", "{O} opened its first office in {V}.",
         {"Where did {C} open its first office?", "Where was the first office of {C} located?",
          "In which city did {C} begin operations?"}},
        {"Its headquarters later moved to {V}.", "The headquarters of {O} moved to {V}.",
         {"Where did the headquarters of {C} move?", "Where did {C} relocate its head office?",
          "To which city did {C} transfer its base?"}},
        {"A research lab was added in {V}.", "{O} added a research lab in {V}.",
         {"Where was the research lab of {C} added?", "Where did {C} build a research facility?",
          "In which city does {C} run its laboratory?"}}},
       2},
  }};
  return kKinds;
}

std::string substitute(std::string s, std::string_view key, const std::string& value) {
  for (auto p = s.find(key); p != std::string::npos; p = s.find(key, p + value.size())) s.replace(p, key.size(), value);
  return s;
}

}  // namespace

Dataset entity_corpus(std::size_t n, std::uint64_t seed, const std::string& id_prefix, double addsent_rate) {
  if (!(addsent_rate >= 0.0 && addsent_rate <= 1.0)) {
    throw Error(ErrorCode::InvalidConfig, "addsent rate must lie in [0, 1]");
  }
  Rng rng(seed);
  Dataset ds;
  ds.source_label = "synthetic-entities";
  auto value = [&](int kind) -> std::string {
    if (kind == 0) return std::to_string(1900 + uniform_index(rng, 120));
    if (kind == 1) return pick(kPeople, rng);
    return pick(kCities, rng);
  };
  for (std::size_t i = 0; i < n; ++i) {
    const auto& kind = kinds()[uniform_index(rng, kinds().size())];
    const std::string company = pick(kCompanies, rng);
    std::vector<std::string> values;
    while (values.size() < kind.facts.size() + 1) {
      auto v = value(kind.value_kind);
      if (std::find(values.begin(), values.end(), v) == values.end()) values.push_back(v);
    }
    if (kind.value_kind == 0) std::sort(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(kind.facts.size()));
    const auto target = uniform_index(rng, kind.facts.size());
    const auto wording = uniform_index(rng, 2) == 0 ? 0 : 1 + uniform_index(rng, 2);

    Builder b;
    for (std::size_t k = 0; k < kind.facts.size(); ++k) {
      auto sentence = substitute(kind.facts[k].sentence, "{C}", company);
      auto at = sentence.find("{V}");
      if (k == target) {
        b.add_answer(sentence.substr(0, at), values[k], sentence.substr(at + 3));
      } else {
        b.add(substitute(sentence, "{V}", values[k]));
      }
    }
    auto question = substitute(kind.facts[target].questions[wording], "{C}", company);
    QAExample ex = finish(id_prefix + std::to_string(i), question, std::move(b));
    if (uniform_unit(rng) < addsent_rate) {
      std::string other = pick(kCompanies, rng);
      while (other == company) other = pick(kCompanies, rng);
      auto d = substitute(substitute(kind.facts[target].distractor, "{O}", other), "{V}", values.back());
      const auto start = text::length(ex.context) + 1;
      ex.context += ' ' + d;
      ex.distractor_spans.push_back({start, start + text::length(d)});
      ex.origin = Origin::AddSent;
    }
    ds.examples.push_back(std::move(ex));
  }
  return ds;
}

}  // namespace advqa::synthetic
