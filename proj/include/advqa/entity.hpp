#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "advqa/corpus.hpp"

namespace advqa::entity {

enum class EntityType {
  Person,
  Location,
  Date,
  Number,
  Organization,
  Year,
  Time,
  Money,
  Percent,
  Ordinal,
  Event,
  Facility,
  Misc,
};

inline constexpr std::array kAllEntityTypes = {
    EntityType::Person,  EntityType::Location, EntityType::Date,    EntityType::Number,
    EntityType::Organization, EntityType::Year, EntityType::Time,   EntityType::Money,
    EntityType::Percent, EntityType::Ordinal,  EntityType::Event,   EntityType::Facility,
    EntityType::Misc};

std::string_view to_string(EntityType t);
EntityType parse_entity_type(std::string_view s);

struct TokenizationWithOffsets {
  std::vector<std::string> tokens;
  std::vector<text::Range> offsets;  // scalar-value ranges, aligned with tokens
};

// Runs of non-space, non-punctuation characters form one token; every
// punctuation character is a token of its own; whitespace is dropped.
TokenizationWithOffsets tokenize_with_offsets(std::string_view text);

struct EntitySpan {
  std::string surface;
  std::size_t char_start = 0;
  std::size_t char_end = 0;
  EntityType entity_type = EntityType::Misc;
  std::optional<std::size_t> token_start;
  std::optional<std::size_t> token_end;  // inclusive

  text::Range range() const { return {char_start, char_end}; }
  friend bool operator==(const EntitySpan&, const EntitySpan&) = default;
};

// Deterministic rule cascade; spans come back sorted and non-overlapping.
std::vector<EntitySpan> extract_entities(std::string_view text);

// Case-, article- and punctuation-insensitive comparison key for surfaces.
std::string surface_key(std::string_view s);

// Type of `text` when the whole string reads as a single entity.
std::optional<EntityType> entity_type_of(std::string_view text);

// Smallest token interval [first, last] whose characters cover every
// non-space character of `span`. Throws UnmappableSpan when the span holds
// only whitespace, OutOfBounds when it does not fit the text.
std::pair<std::size_t, std::size_t> map_to_token_positions(const text::Range& span,
                                                           const TokenizationWithOffsets& tok,
                                                           std::u32string_view text);

inline constexpr std::size_t kMaxNegatives = 5;

struct HardNegativeSet {
  std::string example_id;
  EntitySpan answer_span;
  std::vector<EntitySpan> negatives;
};

// Same-type, surface-distinct, non-overlapping spans ordered by character
// distance to the gold span (ties: earlier first), truncated to five.
// nullopt when the gold answer is not an extracted entity.
std::optional<HardNegativeSet> mine_hard_negatives(const QAExample& example);

// Same, and flags the example entity-rich when the set is non-empty.
std::optional<HardNegativeSet> mine_and_flag(QAExample& example);

struct MiningStats {
  std::size_t n_examples = 0;
  std::size_t n_entity_answers = 0;
  std::size_t n_entity_rich = 0;
  std::size_t n_negatives = 0;
  std::map<EntityType, std::size_t> answer_type_counts;  // entity-rich only

  double entity_rich_fraction() const;
  double mean_negatives() const;
};

struct MiningResult {
  std::vector<HardNegativeSet> sets;  // entity-rich examples only, dataset order
  MiningStats stats;
};

// Mines every example and sets is_entity_rich in place.
MiningResult mine_corpus(Dataset& dataset);

}  // namespace advqa::entity
