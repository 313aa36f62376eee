#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "advqa/text.hpp"

namespace advqa {

enum class Origin { Clean, AddSent, Augmented };

enum class AttackType {
  Paraphrase,
  EntitySwap,
  NegationAttack,
  NumericAttack,
  AdditiveNegation,
  TransformativeNegation,
  EntitySubstitution,
};

std::string_view to_string(Origin o);
std::string_view to_string(AttackType a);
Origin parse_origin(std::string_view s);
AttackType parse_attack_type(std::string_view s);

// Loss weights used for toolkit-emitted data.
inline constexpr double kDefaultWeight = 1.0;
inline constexpr double kEntityWeight = 2.5;
inline constexpr double kNegationWeight = 3.0;

struct Answer {
  std::string text;
  std::size_t answer_start = 0;  // scalar-value offset into the context
  friend bool operator==(const Answer&, const Answer&) = default;
};

struct QAExample {
  std::string id;
  std::string question;
  std::string context;
  std::vector<Answer> answers;
  bool is_impossible = false;
  Origin origin = Origin::Clean;
  std::optional<AttackType> attack_type;
  double loss_weight = kDefaultWeight;
  bool is_negation = false;
  bool is_entity_rich = false;
  std::vector<text::Range> distractor_spans;

  friend bool operator==(const QAExample&, const QAExample&) = default;
};

struct Dataset {
  std::vector<QAExample> examples;
  std::string source_label;
  std::string version;

  std::size_t size() const { return examples.size(); }
  bool empty() const { return examples.empty(); }
  friend bool operator==(const Dataset&, const Dataset&) = default;
};

using PredictionSet = std::map<std::string, std::string>;

struct ParseOptions {
  // Strict: any invariant violation throws. Lenient: offending answers are
  // dropped with a warning and examples left without answers are skipped.
  bool strict = false;
};

struct ParseResult {
  Dataset dataset;
  std::vector<std::string> warnings;
};

// Checks every QAExample invariant; returns a description of the first
// violation or nullopt.
std::optional<std::string> validate(const QAExample& ex);

// SQuAD v1.1 layout. Third-party input, so the default is lenient.
ParseResult parse_squad(std::string_view json_bytes, ParseOptions opts = {});

// Flat {id: answer} object. Duplicate keys throw in strict mode and resolve
// last-wins (with a warning) otherwise.
struct PredictionParseResult {
  PredictionSet predictions;
  std::vector<std::string> warnings;
};
PredictionParseResult parse_predictions(std::string_view json_bytes, ParseOptions opts = {true});

// One QAExample per line. Toolkit-emitted data, so reading is strict by
// default. Dataset-level metadata is not stored in the stream.
std::string write_augmented(const Dataset& dataset);
ParseResult read_augmented(std::string_view jsonl_bytes, ParseOptions opts = {true});

std::string serialize_squad(const Dataset& dataset);

// Loads either format: *.jsonl as augmented JSONL, anything else as SQuAD.
ParseResult load_dataset(const std::string& path, ParseOptions opts);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view bytes);

}  // namespace advqa
