#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "advqa/corpus.hpp"
#include "advqa/losskit.hpp"

// Linear start/end span scorer over hand-built token features, trained with
// the loss kit. Small enough to run in seconds on one core.
namespace advqa::toy {

// Per-token feature columns, in order.
enum Feature : std::size_t {
  kIsNull,            // the sentinel position that stands for "no answer"
  kInQuestion,        // token stem occurs in the question
  kWindowOverlap,     // share of the +-5 neighbours whose stem occurs in the question
  kSentenceOverlap,   // share of question content words found in the token's sentence
  kCueOverlap,        // same, restricted to lowercase question words (verbs, nouns)
  kNearOverlap,       // 1 / (1 + distance to the nearest question-word token)
  kTypeMatch,         // inside an entity of the type the question asks for
  kEntityStart,
  kEntityEnd,
  kTypedStart,        // entity start and type match
  kTypedEnd,          // entity end and type match
  kInDistractor,
  kNegatedSentence,
  kIsNumber,
  kCapitalized,
  kDenseFeatures,
};

// After the dense block: one-hot hash buckets of the previous token, then of
// the next token (lowercased), then hashed (question cue word, context word
// within +-4) pairs normalized by their count.
inline constexpr std::size_t kLexicalBuckets = 32;
inline constexpr std::size_t kPairBuckets = 128;
inline constexpr std::size_t kPairOffset = kDenseFeatures + 2 * kLexicalBuckets;
inline constexpr std::size_t kFeatureCount = kPairOffset + kPairBuckets;

struct Featurized {
  std::string example_id;
  std::vector<std::vector<double>> features;  // one row per position; row 0 is the null sentinel
  std::vector<text::Range> offsets;           // context ranges of positions 1..L-1 (index i-1)
  losskit::Span gold;
  std::vector<losskit::Span> negatives;
  double weight = 1.0;
  std::vector<std::string> gold_texts;
  std::string context;
};

// Token positions are shifted by one to make room for the null sentinel.
// Examples whose gold answer cannot be mapped to tokens are dropped.
std::vector<Featurized> featurize(const Dataset& dataset);

struct Hyper {
  std::size_t epochs = 20;
  double lr = 0.5;
  std::size_t batch_size = 32;
  std::uint64_t seed = 0;
  std::size_t max_answer_tokens = 30;
};

struct TrainReport {
  double alpha = 0.0;
  Hyper hyper;
  std::vector<double> loss_curve;  // training objective before epoch 1, then after each epoch
  double eval_em = 0.0;            // percent
  double ranking_accuracy = 0.0;   // percent of ranked eval examples with gold above every negative
  std::size_t n_train = 0;
  std::size_t n_eval = 0;
  std::size_t n_ranked = 0;
  std::vector<double> start_weights;
  std::vector<double> end_weights;
};

// Seeded mini-batch gradient descent on total_loss. Throws
// DivergenceDetected when the loss stops being finite.
TrainReport toy_train(const Dataset& train, const Dataset& eval, const losskit::LossConfig& config,
                      const Hyper& hyper);

std::string report_json(const TrainReport& report);
std::string curve_csv(const TrainReport& report);

struct ToySplit {
  Dataset train;
  Dataset eval;
};

// Train/eval sets built the way the pipeline would: clean synthetic data mixed
// 80-20 with attacked copies, then mined for hard negatives. The eval set is
// entirely adversarial.
ToySplit synthetic_split(std::size_t n_train, std::size_t n_eval, std::uint64_t seed);

}  // namespace advqa::toy
