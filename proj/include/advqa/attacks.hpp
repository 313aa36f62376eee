#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "advqa/corpus.hpp"
#include "advqa/entity.hpp"
#include "advqa/random.hpp"

namespace advqa::attacks {

enum class SkipReason {
  NoDistractorCandidate,
  NoAlternativeEntity,
  NoNumber,
  UnsupportedVerbShape,
  NoHardNegatives,
  IneligibleExample,
};

std::string_view to_string(SkipReason r);

// Either a generated example or the reason generation was skipped.
struct AttackResult {
  std::optional<QAExample> example;
  SkipReason reason = SkipReason::NoDistractorCandidate;

  bool ok() const { return example.has_value(); }
  static AttackResult skip(SkipReason r) { return {std::nullopt, r}; }
};

// Templates use {X} for the distractor value. The additive-negation template
// uses {V} for the base form of the answer sentence's verb.
using TemplateMap = std::map<AttackType, std::vector<std::string>>;
const TemplateMap& default_templates();

enum class RateBase {
  Eligible,  // rate x examples eligible for at least one enabled attack
  Dataset,   // rate x all examples, capped by the eligible count
};

struct AttackConfig {
  std::vector<AttackType> attacks;
  double rate = 0.40;
  RateBase rate_base = RateBase::Eligible;
  std::uint64_t seed = 0;
  TemplateMap templates = default_templates();
  unsigned threads = 1;

  // Throws InvalidConfig.
  void validate() const;

  static AttackConfig suite();                // paraphrase, entity swap, negation, numeric at 0.40
  static AttackConfig negation_pairs();       // additive + transformative at 0.30
  static AttackConfig entity_substitution();  // entity substitution at 0.20 of the dataset
};

// key = value lines; '#' starts a comment. Keys: attacks (comma list), rate,
// rate_base (eligible|dataset), seed, threads, template.<attack_type>. The
// first template.<t> line replaces that attack's defaults, later ones append.
AttackConfig parse_config(std::string_view text, AttackConfig base);

// Sentence-level helpers, exposed for tests.
struct VerbEdit {
  text::Range word;          // scalar range of the rewritten word in the context
  std::string replacement;   // text replacing that word
  std::string base;          // base verb form, empty for copula/auxiliary edits
};
// First supported verb shape in `sentence` outside `answer`.
std::optional<VerbEdit> find_verb(std::u32string_view context, text::Range sentence, text::Range answer);
// Regular "-ed" past tense to base form, nullopt when the word is not treated
// as one.
std::optional<std::string> regular_past_base(std::string_view lowered);

// Perturbs the first number in `value`: years move by 1..3, other numbers by
// about 10% or by swapping two adjacent digits. Never returns `value` itself.
std::optional<std::string> perturb_number(std::string_view value, Rng& rng);

AttackResult gen_paraphrase_attack(const QAExample& ex, std::uint64_t seed,
                                   const TemplateMap& templates = default_templates());
AttackResult gen_entity_swap_attack(const QAExample& ex, std::uint64_t seed,
                                    const TemplateMap& templates = default_templates());
AttackResult gen_negation_attack(const QAExample& ex, std::uint64_t seed,
                                 const TemplateMap& templates = default_templates());
AttackResult gen_numeric_attack(const QAExample& ex, std::uint64_t seed,
                                const TemplateMap& templates = default_templates());

// Throws IneligibleExample when the question or context already holds a
// negation marker, or when the example has no answer.
QAExample gen_additive_negation_pair(const QAExample& ex, std::uint64_t seed,
                                     const TemplateMap& templates = default_templates());
AttackResult gen_transformative_negation_pair(const QAExample& ex, std::uint64_t seed);

AttackResult gen_entity_substitution(const QAExample& ex, std::uint64_t seed,
                                     const entity::HardNegativeSet* negatives,
                                     const TemplateMap& templates = default_templates());

// Dispatches to one generator; additive-negation ineligibility becomes a skip.
AttackResult generate(AttackType type, const QAExample& ex, std::uint64_t seed,
                      const TemplateMap& templates = default_templates());

struct AugmentationReport {
  std::size_t input_size = 0;
  std::size_t eligible = 0;
  std::size_t attempted = 0;
  std::size_t output_size = 0;
  std::size_t negation_weighted = 0;  // output examples carrying the negation weight
  std::map<AttackType, std::size_t> generated;
  std::map<SkipReason, std::size_t> skipped;
  std::vector<std::string> notes;

  std::size_t total_generated() const;
  std::size_t total_skipped() const;
};

struct AugmentationOutput {
  Dataset dataset;
  AugmentationReport report;
};

// Samples round(rate x base) examples by a seeded hash order, assigns attacks
// round-robin in dataset order with fallback to the next eligible attack, and
// appends the generated examples after the originals.
//
// With negation-pair attacks enabled, originals holding a negation marker and
// the source examples of transformative pairs are flagged is_negation with
// the negation weight. With entity substitution enabled, entity-rich
// originals are flagged and given the entity weight.
AugmentationOutput run_augmentation(const Dataset& dataset, const AttackConfig& config);

std::string report_json(const AugmentationReport& report);

}  // namespace advqa::attacks
