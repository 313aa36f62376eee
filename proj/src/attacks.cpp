#include "advqa/attacks.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <thread>
#include <unordered_set>

#include <json.hpp>

#include "advqa/error.hpp"
#include "advqa/metrics.hpp"

namespace advqa::attacks {

using entity::EntitySpan;
using entity::EntityType;

std::string_view to_string(SkipReason r) {
  switch (r) {
    case SkipReason::NoDistractorCandidate: return "NoDistractorCandidate";
    case SkipReason::NoAlternativeEntity: return "NoAlternativeEntity";
    case SkipReason::NoNumber: return "NoNumber";
    case SkipReason::UnsupportedVerbShape: return "UnsupportedVerbShape";
    case SkipReason::NoHardNegatives: return "NoHardNegatives";
    case SkipReason::IneligibleExample: return "IneligibleExample";
  }
  return "IneligibleExample";
}

const TemplateMap& default_templates() {
  static const TemplateMap kTemplates = {
      {AttackType::Paraphrase, {"Some might argue it was {X}, though this is debated."}},
      {AttackType::EntitySwap, {"However, some records indicate {X} instead."}},
      {AttackType::NegationAttack, {"Contrary to popular belief, {X} is not the correct answer."}},
      {AttackType::NumericAttack, {"Some sources cite {X} as an alternative figure."}},
      {AttackType::AdditiveNegation, {"Some claim they didn't {V}.", "Some claim that this is not true."}},
      {AttackType::TransformativeNegation, {}},
      {AttackType::EntitySubstitution, {"However, some records indicate {X} instead."}},
  };
  return kTemplates;
}

void AttackConfig::validate() const {
  if (attacks.empty()) throw Error(ErrorCode::InvalidConfig, "no attack enabled");
  if (!(rate > 0.0 && rate <= 1.0)) {
    throw Error(ErrorCode::InvalidConfig, "rate must lie in (0, 1], got " + std::to_string(rate));
  }
  std::set<AttackType> seen;
  for (auto a : attacks) {
    if (!seen.insert(a).second) {
      throw Error(ErrorCode::InvalidConfig, "attack listed twice: " + std::string(to_string(a)));
    }
    if (a == AttackType::TransformativeNegation) continue;
    auto it = templates.find(a);
    if (it == templates.end() || it->second.empty()) {
      throw Error(ErrorCode::InvalidConfig, "attack " + std::string(to_string(a)) + " has no template");
    }
    if (a == AttackType::AdditiveNegation) continue;
    for (const auto& t : it->second) {
      if (t.find("{X}") == std::string::npos) {
        throw Error(ErrorCode::InvalidConfig, "template for " + std::string(to_string(a)) + " lacks {X}: " + t);
      }
    }
  }
}

AttackConfig AttackConfig::suite() {
  AttackConfig c;
  c.attacks = {AttackType::Paraphrase, AttackType::EntitySwap, AttackType::NegationAttack,
               AttackType::NumericAttack};
  c.rate = 0.40;
  return c;
}

AttackConfig AttackConfig::negation_pairs() {
  AttackConfig c;
  c.attacks = {AttackType::AdditiveNegation, AttackType::TransformativeNegation};
  c.rate = 0.30;
  return c;
}

AttackConfig AttackConfig::entity_substitution() {
  AttackConfig c;
  c.attacks = {AttackType::EntitySubstitution};
  c.rate = 0.20;
  c.rate_base = RateBase::Dataset;
  return c;
}

AttackConfig parse_config(std::string_view input, AttackConfig base) {
  std::set<AttackType> replaced;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= input.size()) {
    auto nl = input.find('\n', pos);
    std::string_view raw = input.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? input.size() + 1 : nl + 1;
    ++line_no;
    if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    std::string line = text::trim(raw);
    if (line.empty()) continue;
    auto eq = line.find('=');
    auto where = "line " + std::to_string(line_no) + ": ";
    if (eq == std::string::npos) throw Error(ErrorCode::InvalidConfig, where + "expected key = value");
    std::string key = text::trim(line.substr(0, eq));
    std::string value = text::trim(line.substr(eq + 1));
    try {
      if (key == "attacks") {
        base.attacks.clear();
        std::size_t p = 0;
        while (p <= value.size()) {
          auto c = value.find(',', p);
          auto item = text::trim(value.substr(p, c == std::string::npos ? std::string::npos : c - p));
          if (!item.empty()) base.attacks.push_back(parse_attack_type(item));
          if (c == std::string::npos) break;
          p = c + 1;
        }
      } else if (key == "rate") {
        std::size_t used = 0;
        base.rate = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument("trailing characters");
      } else if (key == "rate_base") {
        if (value == "eligible") {
          base.rate_base = RateBase::Eligible;
        } else if (value == "dataset") {
          base.rate_base = RateBase::Dataset;
        } else {
          throw std::invalid_argument("expected eligible or dataset");
        }
      } else if (key == "seed") {
        std::size_t used = 0;
        base.seed = std::stoull(value, &used);
        if (used != value.size()) throw std::invalid_argument("trailing characters");
      } else if (key == "threads") {
        base.threads = static_cast<unsigned>(std::stoul(value));
      } else if (key.rfind("template.", 0) == 0) {
        auto type = parse_attack_type(key.substr(9));
        if (replaced.insert(type).second) base.templates[type].clear();
        base.templates[type].push_back(value);
      } else {
        throw std::invalid_argument("unknown key '" + key + "'");
      }
    } catch (const Error& e) {
      throw Error(ErrorCode::InvalidConfig, where + e.what());
    } catch (const std::exception& e) {
      throw Error(ErrorCode::InvalidConfig, where + key + ": " + e.what());
    }
  }
  base.validate();
  return base;
}

namespace {

const std::map<std::string, std::string, std::less<>>& irregular_past() {
  static const std::map<std::string, std::string, std::less<>> kTable = {
      {"won", "win"},     {"was", "be"},       {"had", "have"},     {"built", "build"},
      {"went", "go"},     {"took", "take"},    {"made", "make"},    {"led", "lead"},
      {"began", "begin"}, {"became", "become"}, {"wrote", "write"}, {"held", "hold"},
      {"gave", "give"},   {"came", "come"},    {"saw", "see"},      {"lost", "lose"},
      {"sold", "sell"},   {"bought", "buy"},   {"brought", "bring"}, {"beat", "beat"},
      {"founded", "found"}, {"told", "tell"},  {"spent", "spend"},  {"drew", "draw"},
  };
  return kTable;
}

const std::unordered_set<std::string_view>& ed_stoplist() {
  static const std::unordered_set<std::string_view> kStop = {
      "hundred", "red",    "bed",    "shed",   "seed",    "need",   "feed",   "speed",
      "weed",    "breed",  "greed",  "indeed", "reed",    "deed",   "sacred", "naked",
      "wicked",  "kindred", "ragged", "rugged", "beloved", "wretched", "bred", "fled",
      "sled",    "wed",    "shred",  "embed",  "steed",   "tweed",  "creed",  "proceed",
      "exceed",  "succeed", "bleed", "heed",   "aged",    "learned", "crooked", "jagged",
      "dogged",  "hatred", "blessed", "cursed", "rugged",  "wounded"};
  return kStop;
}

const std::unordered_set<std::string_view>& adjectival_context() {
  static const std::unordered_set<std::string_view> kPrev = {
      "the",  "a",    "an",   "his",  "her",  "its",    "their", "our",   "my",
      "your", "this", "that", "these", "those", "very",  "most",  "more",  "well",
      "highly", "fully", "newly", "so", "self", "long", "much", "less", "un"};
  return kPrev;
}

bool is_vowel(char c) { return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u'; }

bool is_ascii_lower_word(std::string_view w) {
  return !w.empty() && std::all_of(w.begin(), w.end(), [](char c) { return c >= 'a' && c <= 'z'; });
}

}  // namespace

std::optional<std::string> regular_past_base(std::string_view w) {
  if (w.size() < 4 || !is_ascii_lower_word(w) || w.substr(w.size() - 2) != "ed") return std::nullopt;
  if (ed_stoplist().contains(w)) return std::nullopt;
  std::string stem(w.substr(0, w.size() - 2));
  if (w.size() >= 4 && w.substr(w.size() - 3) == "ied") {
    if (stem.size() <= 3) return stem;  // died, tied, lied
    return stem.substr(0, stem.size() - 1) + "y";
  }
  if (w.substr(w.size() - 3) == "eed") return stem + "e";
  if (stem.size() < 2) return std::nullopt;
  if (stem.ends_with("creat")) return stem + "e";
  const char c = stem.back();
  const char v = stem[stem.size() - 2];
  const bool has_p = stem.size() >= 3;
  const char p = has_p ? stem[stem.size() - 3] : 'x';
  if (c == v && !is_vowel(c) && std::string_view("lsfzd").find(c) == std::string_view::npos) {
    return stem.substr(0, stem.size() - 1);
  }
  auto ends = [&](std::string_view suf) { return stem.size() >= suf.size() && stem.substr(stem.size() - suf.size()) == suf; };
  bool add_e = false;
  if (c == 'v' || c == 'c' || c == 'z' || ends("dg") || ends("ir") || ends("ur")) add_e = true;
  if (c == 's' && is_vowel(v)) add_e = true;
  if (c == 'g' && ends("ang")) add_e = true;
  if (c == 'l' && std::string_view("btpdgkz").find(v) != std::string_view::npos) add_e = true;
  static const std::map<char, std::string_view> kVowelConsonantE = {
      {'t', "aeou"}, {'m', "aiu"}, {'n', "aiou"}, {'r', "ao"}, {'d', "aiou"}, {'b', "aiou"}, {'k', "aiou"}};
  if (auto it = kVowelConsonantE.find(c); it != kVowelConsonantE.end()) {
    if (it->second.find(v) != std::string_view::npos && !is_vowel(p) && stem.size() >= 2) add_e = true;
  }
  return add_e ? stem + "e" : stem;
}

std::optional<VerbEdit> find_verb(std::u32string_view ctx, text::Range sentence, text::Range answer) {
  struct Word {
    text::Range r;
    std::string s;
    std::string lower;
  };
  std::vector<Word> words;
  auto is_word_char = [](char32_t c) { return text::is_alpha(c) || c == U'\'' || c == U'’'; };
  for (std::size_t i = sentence.start; i < sentence.end && i < ctx.size();) {
    if (!is_word_char(ctx[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < sentence.end && j < ctx.size() && is_word_char(ctx[j])) ++j;
    Word w;
    w.r = {i, j};
    w.s = text::encode(ctx.substr(i, j - i));
    w.lower = text::to_lower(w.s);
    words.push_back(std::move(w));
    i = j;
  }
  static const std::unordered_set<std::string_view> kCopula = {"is", "are", "was", "were", "am"};
  static const std::unordered_set<std::string_view> kAux = {"will", "would", "can",  "could", "should",
                                                            "may",  "might", "must", "did",   "does",
                                                            "do",   "shall"};
  static const std::unordered_set<std::string_view> kPerfect = {"has", "have", "had"};
  auto participle = [](const std::string& lw) {
    return regular_past_base(lw).has_value() ||
           std::any_of(irregular_past().begin(), irregular_past().end(),
                       [&](const auto& kv) { return kv.first == lw; }) ||
           lw == "been" || lw == "done" || lw == "gone" || lw == "taken" || lw == "given" ||
           lw == "written" || lw == "begun" || lw == "become" || lw == "seen" || lw == "known";
  };
  for (std::size_t k = 0; k < words.size(); ++k) {
    const auto& w = words[k];
    if (w.r.overlaps(answer)) continue;
    const bool capitalized = text::is_upper(ctx[w.r.start]);
    if (kCopula.contains(w.lower) || kAux.contains(w.lower)) {
      return VerbEdit{w.r, w.s + " not", ""};
    }
    if (kPerfect.contains(w.lower) && k + 1 < words.size() && participle(words[k + 1].lower)) {
      return VerbEdit{w.r, w.s + " not", ""};
    }
    if (capitalized) continue;
    if (k > 0 && adjectival_context().contains(words[k - 1].lower)) continue;
    if (auto it = irregular_past().find(w.lower); it != irregular_past().end()) {
      return VerbEdit{w.r, "didn't " + it->second, it->second};
    }
    if (auto base = regular_past_base(w.lower)) return VerbEdit{w.r, "didn't " + *base, *base};
  }
  return std::nullopt;
}

namespace {

struct NumberMatch {
  std::size_t begin = 0;  // byte offsets into the string
  std::size_t end = 0;
  std::string digits;
  bool grouped = false;
};

std::optional<NumberMatch> first_number(std::string_view s) {
  auto is_d = [](char c) { return c >= '0' && c <= '9'; };
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!is_d(s[i])) continue;
    NumberMatch m;
    m.begin = i;
    std::size_t j = i;
    while (j < s.size()) {
      if (is_d(s[j])) {
        m.digits.push_back(s[j]);
        ++j;
      } else if (s[j] == ',' && j + 3 < s.size() && is_d(s[j + 1]) && is_d(s[j + 2]) && is_d(s[j + 3]) &&
                 (j + 4 >= s.size() || !is_d(s[j + 4]) || s[j + 4] == ',')) {
        m.grouped = true;
        ++j;
      } else {
        break;
      }
    }
    m.end = j;
    return m;
  }
  return std::nullopt;
}

std::string group_thousands(const std::string& digits) {
  std::string out;
  const std::size_t n = digits.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0 && (n - i) % 3 == 0) out.push_back(',');
    out.push_back(digits[i]);
  }
  return out;
}

std::string shift_by_ten_percent(unsigned long long v, Rng& rng) {
  auto d = static_cast<unsigned long long>(std::llround(static_cast<double>(v) * 0.1));
  d = std::max<unsigned long long>(d, 1);
  const bool down = uniform_index(rng, 2) == 0 && v >= d;
  return std::to_string(down ? v - d : v + d);
}

}  // namespace

std::optional<std::string> perturb_number(std::string_view value, Rng& rng) {
  auto m = first_number(value);
  if (!m) return std::nullopt;
  const std::string& digits = m->digits;
  std::string perturbed;
  const bool year = digits.size() == 4 && !m->grouped && digits >= "1000" && digits <= "2999";
  if (year) {
    static constexpr int kDeltas[] = {-3, -2, -1, 1, 2, 3};
    perturbed = std::to_string(std::stoi(digits) + kDeltas[uniform_index(rng, 6)]);
  } else {
    std::vector<std::size_t> swaps;
    for (std::size_t i = 0; i + 1 < digits.size(); ++i) {
      if (digits[i] != digits[i + 1] && !(i == 0 && digits[1] == '0')) swaps.push_back(i);
    }
    const bool transpose = uniform_index(rng, 2) == 1 && !swaps.empty();
    if (transpose) {
      perturbed = digits;
      auto i = swaps[uniform_index(rng, swaps.size())];
      std::swap(perturbed[i], perturbed[i + 1]);
    } else if (digits.size() <= 18) {
      perturbed = shift_by_ten_percent(std::stoull(digits), rng);
      if (digits.size() > 1 && digits.front() == '0' && perturbed.size() < digits.size()) {
        perturbed.insert(0, digits.size() - perturbed.size(), '0');
      }
    } else if (!swaps.empty()) {
      perturbed = digits;
      std::swap(perturbed[swaps.front()], perturbed[swaps.front() + 1]);
    } else {
      return std::nullopt;
    }
  }
  if (perturbed == digits) return std::nullopt;
  if (m->grouped) perturbed = group_thousands(perturbed);
  std::string out(value.substr(0, m->begin));
  out += perturbed;
  out += value.substr(m->end);
  return out;
}

namespace {

std::string fill(std::string tmpl, std::string_view key, std::string_view value) {
  for (auto p = tmpl.find(key); p != std::string::npos; p = tmpl.find(key, p + value.size())) {
    tmpl.replace(p, key.size(), value);
  }
  return tmpl;
}

const std::string& pick_template(const TemplateMap& templates, AttackType t, Rng& rng) {
  auto it = templates.find(t);
  if (it == templates.end() || it->second.empty()) {
    throw Error(ErrorCode::InvalidConfig, "no template for " + std::string(to_string(t)));
  }
  return it->second[uniform_index(rng, it->second.size())];
}

bool answerable(const QAExample& ex) { return !ex.is_impossible && !ex.answers.empty(); }

text::Range gold_range(const QAExample& ex) {
  const auto& a = ex.answers.front();
  return {a.answer_start, a.answer_start + text::length(a.text)};
}

double weight_for(AttackType t) {
  switch (t) {
    case AttackType::AdditiveNegation:
    case AttackType::TransformativeNegation: return kNegationWeight;
    case AttackType::EntitySubstitution: return kEntityWeight;
    default: return kDefaultWeight;
  }
}

std::string_view id_suffix(AttackType t) {
  switch (t) {
    case AttackType::Paraphrase: return "_para";
    case AttackType::EntitySwap: return "_swap";
    case AttackType::NegationAttack: return "_neg";
    case AttackType::NumericAttack: return "_num";
    case AttackType::AdditiveNegation: return "_aneg";
    case AttackType::TransformativeNegation: return "_tneg";
    case AttackType::EntitySubstitution: return "_esub";
  }
  return "_aug";
}

QAExample derived(const QAExample& ex, AttackType t) {
  QAExample out = ex;
  out.id = ex.id + std::string(id_suffix(t));
  out.origin = Origin::Augmented;
  out.attack_type = t;
  out.loss_weight = weight_for(t);
  out.is_negation = t == AttackType::AdditiveNegation || t == AttackType::TransformativeNegation;
  return out;
}

QAExample append_sentence(const QAExample& ex, AttackType t, const std::string& sentence) {
  QAExample out = derived(ex, t);
  std::size_t start = text::length(ex.context);
  if (!ex.context.empty() && !text::is_space(text::decode(ex.context).back())) {
    out.context += ' ';
    ++start;
  }
  out.context += sentence;
  out.distractor_spans.push_back({start, start + text::length(sentence)});
  return out;
}

// Same-type context entities that differ from the gold answer, in text order.
std::vector<std::string> same_type_candidates(const QAExample& ex) {
  std::vector<std::string> out;
  auto gt = entity::entity_type_of(ex.answers.front().text);
  if (!gt) return out;
  const auto gold = gold_range(ex);
  const auto gold_key = entity::surface_key(ex.answers.front().text);
  std::set<std::string> seen{gold_key};
  for (const auto& e : entity::extract_entities(ex.context)) {
    if (e.entity_type != *gt || e.range().overlaps(gold)) continue;
    if (!seen.insert(entity::surface_key(e.surface)).second) continue;
    out.push_back(e.surface);
  }
  return out;
}

std::optional<std::string> distractor_value(const QAExample& ex, Rng& rng) {
  auto cands = same_type_candidates(ex);
  if (!cands.empty()) return cands[uniform_index(rng, cands.size())];
  return perturb_number(ex.answers.front().text, rng);
}

AttackResult hedge_attack(const QAExample& ex, std::uint64_t seed, const TemplateMap& templates, AttackType t) {
  if (!answerable(ex)) return AttackResult::skip(SkipReason::IneligibleExample);
  Rng rng(seed);
  auto value = distractor_value(ex, rng);
  if (!value) return AttackResult::skip(SkipReason::NoDistractorCandidate);
  auto sentence = fill(pick_template(templates, t, rng), "{X}", *value);
  return {append_sentence(ex, t, sentence), {}};
}

bool is_named(EntityType t) {
  return t == EntityType::Person || t == EntityType::Organization || t == EntityType::Location ||
         t == EntityType::Facility || t == EntityType::Event || t == EntityType::Misc;
}

constexpr EntityType kSalience[] = {EntityType::Person, EntityType::Organization, EntityType::Location,
                                    EntityType::Facility, EntityType::Event, EntityType::Misc};

bool has_negation(const QAExample& ex) {
  return text::contains_negation(ex.question) || text::contains_negation(ex.context);
}

}  // namespace

AttackResult gen_paraphrase_attack(const QAExample& ex, std::uint64_t seed, const TemplateMap& templates) {
  return hedge_attack(ex, seed, templates, AttackType::Paraphrase);
}

AttackResult gen_negation_attack(const QAExample& ex, std::uint64_t seed, const TemplateMap& templates) {
  return hedge_attack(ex, seed, templates, AttackType::NegationAttack);
}

AttackResult gen_entity_swap_attack(const QAExample& ex, std::uint64_t seed, const TemplateMap& templates) {
  if (!answerable(ex)) return AttackResult::skip(SkipReason::IneligibleExample);
  const auto gold = gold_range(ex);
  const auto gold_text = ex.answers.front().text;
  const auto gold_key = entity::surface_key(gold_text);
  const auto gold_norm = metrics::normalize_answer(gold_text);
  auto gt = entity::entity_type_of(gold_text);

  std::map<EntityType, std::vector<std::string>> by_type;
  std::set<std::string> seen{gold_key};
  for (const auto& e : entity::extract_entities(ex.context)) {
    if (!is_named(e.entity_type) || e.range().overlaps(gold)) continue;
    if (metrics::normalize_answer(e.surface) == gold_norm) continue;
    if (!seen.insert(entity::surface_key(e.surface)).second) continue;
    by_type[e.entity_type].push_back(e.surface);
  }
  const std::vector<std::string>* pool = nullptr;
  if (gt && is_named(*gt) && !by_type[*gt].empty()) pool = &by_type[*gt];
  for (auto t : kSalience) {
    if (pool != nullptr) break;
    if (!by_type[t].empty()) pool = &by_type[t];
  }
  if (pool == nullptr) return AttackResult::skip(SkipReason::NoAlternativeEntity);
  Rng rng(seed);
  const auto& value = (*pool)[uniform_index(rng, pool->size())];
  auto sentence = fill(pick_template(templates, AttackType::EntitySwap, rng), "{X}", value);
  return {append_sentence(ex, AttackType::EntitySwap, sentence), {}};
}

AttackResult gen_numeric_attack(const QAExample& ex, std::uint64_t seed, const TemplateMap& templates) {
  if (!answerable(ex)) return AttackResult::skip(SkipReason::IneligibleExample);
  Rng rng(seed);
  auto value = perturb_number(ex.answers.front().text, rng);
  if (!value) {
    const auto gold = gold_range(ex);
    std::vector<std::string> numbers;
    for (const auto& e : entity::extract_entities(ex.context)) {
      if (e.range().overlaps(gold)) continue;
      if (std::any_of(e.surface.begin(), e.surface.end(), [](char c) { return c >= '0' && c <= '9'; })) {
        numbers.push_back(e.surface);
      }
    }
    if (!numbers.empty()) value = perturb_number(numbers[uniform_index(rng, numbers.size())], rng);
  }
  if (!value) return AttackResult::skip(SkipReason::NoNumber);
  auto sentence = fill(pick_template(templates, AttackType::NumericAttack, rng), "{X}", *value);
  return {append_sentence(ex, AttackType::NumericAttack, sentence), {}};
}

QAExample gen_additive_negation_pair(const QAExample& ex, std::uint64_t seed, const TemplateMap& templates) {
  if (!answerable(ex)) throw Error(ErrorCode::IneligibleExample, ex.id + ": no answer to preserve");
  if (has_negation(ex)) throw Error(ErrorCode::IneligibleExample, ex.id + ": already contains negation");
  const auto ctx = text::decode(ex.context);
  const auto sentences = text::split_sentences(ctx);
  const auto gold = gold_range(ex);
  auto verb = find_verb(ctx, sentences[text::sentence_index(sentences, gold.start)], gold);
  const bool have_base = verb && !verb->base.empty();

  std::vector<const std::string*> usable;
  auto it = templates.find(AttackType::AdditiveNegation);
  if (it != templates.end()) {
    for (const auto& t : it->second) {
      if ((t.find("{V}") != std::string::npos) == have_base) usable.push_back(&t);
    }
  }
  Rng rng(seed);
  std::string sentence = "Some claim that this is not true.";
  if (!usable.empty()) sentence = *usable[uniform_index(rng, usable.size())];
  if (have_base) sentence = fill(sentence, "{V}", verb->base);
  return append_sentence(ex, AttackType::AdditiveNegation, sentence);
}

AttackResult gen_transformative_negation_pair(const QAExample& ex, std::uint64_t /*seed*/) {
  if (!answerable(ex) || has_negation(ex)) return AttackResult::skip(SkipReason::IneligibleExample);
  const auto ctx = text::decode(ex.context);
  const auto sentences = text::split_sentences(ctx);
  const auto gold = gold_range(ex);
  auto verb = find_verb(ctx, sentences[text::sentence_index(sentences, gold.start)], gold);
  if (!verb) return AttackResult::skip(SkipReason::UnsupportedVerbShape);

  QAExample out = derived(ex, AttackType::TransformativeNegation);
  const auto repl = text::decode(verb->replacement);
  std::u32string rewritten(ctx.substr(0, verb->word.start));
  rewritten += repl;
  rewritten += ctx.substr(verb->word.end);
  out.context = text::encode(rewritten);
  out.answers.clear();
  out.is_impossible = true;
  const auto grow = static_cast<std::ptrdiff_t>(repl.size()) - static_cast<std::ptrdiff_t>(verb->word.size());
  for (auto& d : out.distractor_spans) {
    if (d.start >= verb->word.end) d.start = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(d.start) + grow);
    if (d.end >= verb->word.end) d.end = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(d.end) + grow);
  }
  return {std::move(out), {}};
}

AttackResult gen_entity_substitution(const QAExample& ex, std::uint64_t seed,
                                     const entity::HardNegativeSet* negatives, const TemplateMap& templates) {
  if (!answerable(ex)) return AttackResult::skip(SkipReason::IneligibleExample);
  if (negatives == nullptr || negatives->negatives.empty()) return AttackResult::skip(SkipReason::NoHardNegatives);
  Rng rng(seed);
  const auto& neg = negatives->negatives[uniform_index(rng, negatives->negatives.size())];
  auto sentence = fill(pick_template(templates, AttackType::EntitySubstitution, rng), "{X}", neg.surface);
  auto out = append_sentence(ex, AttackType::EntitySubstitution, sentence);
  out.is_entity_rich = true;
  return {std::move(out), {}};
}

AttackResult generate(AttackType type, const QAExample& ex, std::uint64_t seed, const TemplateMap& templates) {
  switch (type) {
    case AttackType::Paraphrase: return gen_paraphrase_attack(ex, seed, templates);
    case AttackType::EntitySwap: return gen_entity_swap_attack(ex, seed, templates);
    case AttackType::NegationAttack: return gen_negation_attack(ex, seed, templates);
    case AttackType::NumericAttack: return gen_numeric_attack(ex, seed, templates);
    case AttackType::AdditiveNegation:
      if (!answerable(ex) || has_negation(ex)) return AttackResult::skip(SkipReason::IneligibleExample);
      return {gen_additive_negation_pair(ex, seed, templates), {}};
    case AttackType::TransformativeNegation: return gen_transformative_negation_pair(ex, seed);
    case AttackType::EntitySubstitution: {
      auto set = entity::mine_hard_negatives(ex);
      return gen_entity_substitution(ex, seed, set ? &*set : nullptr, templates);
    }
  }
  return AttackResult::skip(SkipReason::IneligibleExample);
}

std::size_t AugmentationReport::total_generated() const {
  std::size_t n = 0;
  for (const auto& [k, v] : generated) n += v;
  return n;
}

std::size_t AugmentationReport::total_skipped() const {
  std::size_t n = 0;
  for (const auto& [k, v] : skipped) n += v;
  return n;
}

namespace {

bool is_negation_pair(AttackType t) {
  return t == AttackType::AdditiveNegation || t == AttackType::TransformativeNegation;
}

struct Attempt {
  std::optional<QAExample> example;
  AttackType type = AttackType::Paraphrase;
  SkipReason reason = SkipReason::IneligibleExample;
};

}  // namespace

AugmentationOutput run_augmentation(const Dataset& dataset, const AttackConfig& config) {
  config.validate();
  if (dataset.empty()) throw Error(ErrorCode::EmptyDataset, "nothing to augment");
  const bool neg_mode = std::any_of(config.attacks.begin(), config.attacks.end(), is_negation_pair);
  const bool ent_mode = std::find(config.attacks.begin(), config.attacks.end(), AttackType::EntitySubstitution) !=
                        config.attacks.end();

  AugmentationOutput out;
  auto& report = out.report;
  out.dataset = dataset;
  auto& originals = out.dataset.examples;
  const std::size_t n = originals.size();
  report.input_size = n;

  std::vector<std::optional<entity::HardNegativeSet>> negs(n);
  std::vector<bool> positive(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    auto& ex = originals[i];
    if (ent_mode) {
      negs[i] = entity::mine_and_flag(ex);
      if (ex.is_entity_rich) ex.loss_weight = kEntityWeight;
    }
    positive[i] = !has_negation(ex);
    if (neg_mode && !positive[i]) {
      ex.is_negation = true;
      ex.loss_weight = kNegationWeight;
    }
  }

  auto eligible_for = [&](AttackType t, std::size_t i) {
    const auto& ex = originals[i];
    if (!answerable(ex)) return false;
    if (is_negation_pair(t)) return bool(positive[i]);
    if (t == AttackType::EntitySubstitution) return negs[i] && !negs[i]->negatives.empty();
    return true;
  };

  std::vector<std::size_t> eligible;
  for (std::size_t i = 0; i < n; ++i) {
    if (std::any_of(config.attacks.begin(), config.attacks.end(), [&](AttackType t) { return eligible_for(t, i); })) {
      eligible.push_back(i);
    }
  }
  report.eligible = eligible.size();
  const double base = config.rate_base == RateBase::Eligible ? static_cast<double>(eligible.size())
                                                             : static_cast<double>(n);
  const auto k = std::min(eligible.size(), static_cast<std::size_t>(std::floor(config.rate * base + 0.5)));

  std::vector<std::pair<std::uint64_t, std::size_t>> keyed;
  keyed.reserve(eligible.size());
  for (auto i : eligible) keyed.emplace_back(derive_seed(config.seed, originals[i].id), i);
  std::sort(keyed.begin(), keyed.end());
  std::vector<std::size_t> sampled;
  for (std::size_t j = 0; j < k; ++j) sampled.push_back(keyed[j].second);
  std::sort(sampled.begin(), sampled.end());
  report.attempted = sampled.size();

  const std::size_t m = config.attacks.size();
  std::vector<Attempt> attempts(sampled.size());
  auto work = [&](std::size_t lo, std::size_t hi) {
    for (std::size_t j = lo; j < hi; ++j) {
      const auto i = sampled[j];
      const auto& ex = originals[i];
      const auto ex_seed = derive_seed(config.seed, ex.id);
      auto& a = attempts[j];
      bool first = true;
      for (std::size_t r = 0; r < m; ++r) {
        const auto t = config.attacks[(j + r) % m];
        if (!eligible_for(t, i)) continue;
        const auto seed = derive_seed(ex_seed, static_cast<std::uint64_t>(t));
        AttackResult res = t == AttackType::EntitySubstitution
                               ? gen_entity_substitution(ex, seed, &*negs[i], config.templates)
                               : generate(t, ex, seed, config.templates);
        if (res.ok()) {
          a.example = std::move(res.example);
          a.type = t;
          break;
        }
        if (first) a.reason = res.reason;
        first = false;
      }
    }
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(config.threads, static_cast<unsigned>(sampled.size())));
  if (threads <= 1) {
    work(0, sampled.size());
  } else {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (sampled.size() + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back(work, std::min(sampled.size(), t * chunk), std::min(sampled.size(), (t + 1) * chunk));
    }
  }

  std::unordered_set<std::string> ids;
  for (const auto& ex : originals) ids.insert(ex.id);
  std::vector<QAExample> generated;
  for (std::size_t j = 0; j < attempts.size(); ++j) {
    auto& a = attempts[j];
    if (!a.example) {
      ++report.skipped[a.reason];
      continue;
    }
    ++report.generated[a.type];
    if (a.type == AttackType::TransformativeNegation) {
      auto& src = originals[sampled[j]];
      src.is_negation = true;
      src.loss_weight = kNegationWeight;
    }
    std::string id = a.example->id;
    for (int c = 2; ids.contains(id); ++c) id = a.example->id + "_" + std::to_string(c);
    a.example->id = id;
    ids.insert(id);
    generated.push_back(std::move(*a.example));
  }
  for (auto& g : generated) originals.push_back(std::move(g));

  report.output_size = originals.size();
  for (const auto& ex : originals) report.negation_weighted += ex.loss_weight == kNegationWeight ? 1 : 0;
  report.notes.push_back("sampled round(" + metrics::format_pct(config.rate, 2) + " x " +
                         std::to_string(static_cast<std::size_t>(base)) + ") = " + std::to_string(k) +
                         " examples");
  const auto suite = AttackConfig::suite().attacks;
  if (std::is_permutation(config.attacks.begin(), config.attacks.end(), suite.begin(), suite.end())) {
    report.notes.push_back(
        "reference counts for 1,779 inputs: paraphrase 217, entity_swap 211, negation_attack 221, "
        "numeric_attack 66 (715 total; 40% of 1,779 rounds to 712, and 1,779 + 715 = 2,494, not the "
        "2,495 reported alongside it)");
  }
  return out;
}

std::string report_json(const AugmentationReport& r) {
  nlohmann::ordered_json j;
  j["input_size"] = r.input_size;
  j["eligible"] = r.eligible;
  j["attempted"] = r.attempted;
  j["generated_total"] = r.total_generated();
  j["skipped_total"] = r.total_skipped();
  j["output_size"] = r.output_size;
  j["negation_weighted"] = r.negation_weighted;
  j["generated"] = nlohmann::ordered_json::object();
  for (const auto& [t, c] : r.generated) j["generated"][std::string(to_string(t))] = c;
  j["skipped"] = nlohmann::ordered_json::object();
  for (const auto& [s, c] : r.skipped) j["skipped"][std::string(to_string(s))] = c;
  j["notes"] = r.notes;
  return j.dump(2) + "\n";
}

}  // namespace advqa::attacks
