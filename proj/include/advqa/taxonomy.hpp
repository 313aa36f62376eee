#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "advqa/corpus.hpp"

namespace advqa::taxonomy {

enum class QuestionType { What, Who, Where, When, Number, WhyHow, Other };
enum class AnswerType { Score, Venue, Location, Date, LongPhrase, ShortPhrase, Year };
enum class Complexity { Simple, MultiPart, Complex, Superlative, Counting, Comparison, Causal };
enum class ErrorType { WrongPhrase, Partial, DistantDistractor, NearDistractor, WrongYear, Other };
enum class Pattern {
  Negation,
  EntitySubstitution,
  Numeric,
  Additive,
  Paraphrase,
  Modal,
  ComparativeSuperlative,
  Temporal,
  ListEnumeration,
  Coreference,
};

inline constexpr std::array kQuestionTypes = {QuestionType::What,   QuestionType::Who,
                                              QuestionType::Where,  QuestionType::When,
                                              QuestionType::Number, QuestionType::WhyHow,
                                              QuestionType::Other};
inline constexpr std::array kAnswerTypes = {AnswerType::Score,      AnswerType::Venue,
                                            AnswerType::Location,   AnswerType::Date,
                                            AnswerType::LongPhrase, AnswerType::ShortPhrase,
                                            AnswerType::Year};
inline constexpr std::array kComplexities = {Complexity::Simple,      Complexity::MultiPart,
                                             Complexity::Complex,     Complexity::Superlative,
                                             Complexity::Counting,    Complexity::Comparison,
                                             Complexity::Causal};
inline constexpr std::array kErrorTypes = {ErrorType::WrongPhrase,       ErrorType::Partial,
                                           ErrorType::DistantDistractor, ErrorType::NearDistractor,
                                           ErrorType::WrongYear,         ErrorType::Other};
inline constexpr std::array kPatterns = {
    Pattern::Negation,    Pattern::EntitySubstitution, Pattern::Numeric,
    Pattern::Additive,    Pattern::Paraphrase,         Pattern::Modal,
    Pattern::ComparativeSuperlative, Pattern::Temporal, Pattern::ListEnumeration,
    Pattern::Coreference};

std::string_view to_string(QuestionType v);
std::string_view to_string(AnswerType v);
std::string_view to_string(Complexity v);
std::string_view to_string(ErrorType v);
std::string_view to_string(Pattern v);

// Table-1 layout has no When row; When questions are reported under Other.
QuestionType table_label(QuestionType v);

template <class E>
E parse_label(std::string_view s);

// Multi-label pattern set; iteration follows kPatterns order.
class PatternSet {
 public:
  void insert(Pattern p) { bits_ |= bit(p); }
  bool contains(Pattern p) const { return (bits_ & bit(p)) != 0; }
  bool empty() const { return bits_ == 0; }
  std::size_t size() const;
  std::vector<Pattern> to_vector() const;
  friend bool operator==(const PatternSet&, const PatternSet&) = default;

 private:
  static std::uint16_t bit(Pattern p) { return static_cast<std::uint16_t>(1u << static_cast<unsigned>(p)); }
  std::uint16_t bits_ = 0;
};

QuestionType classify_question_type(std::string_view question);
AnswerType classify_answer_type(std::string_view gold_answer);
Complexity classify_complexity(std::string_view question);

// Requires EM = 0 for the prediction. Distractor categories need the
// example's distractor_spans; without them they are unreachable.
ErrorType classify_error_type(const QAExample& example, std::string_view prediction);

PatternSet detect_patterns(const QAExample& example, std::string_view prediction);

struct ErrorRecord {
  std::string example_id;
  QuestionType question_type = QuestionType::Other;
  AnswerType answer_type = AnswerType::ShortPhrase;
  Complexity complexity = Complexity::Simple;
  ErrorType error_type = ErrorType::Other;
  PatternSet patterns;
  std::string predicted;
  std::string gold;
  friend bool operator==(const ErrorRecord&, const ErrorRecord&) = default;
};

struct LabelStats {
  std::size_t total = 0;
  std::size_t correct = 0;
  double accuracy_pct() const { return total == 0 ? 0.0 : 100.0 * static_cast<double>(correct) / static_cast<double>(total); }
  friend bool operator==(const LabelStats&, const LabelStats&) = default;
};

struct TaxonomyReport {
  std::size_t n_examples = 0;
  std::size_t n_errors = 0;
  std::map<QuestionType, LabelStats> question_type;
  std::map<AnswerType, LabelStats> answer_type;
  std::map<Complexity, LabelStats> complexity;
  std::map<ErrorType, std::size_t> error_type;
  std::map<Pattern, std::size_t> patterns;
  // co_occurrence[a][b] = errors carrying both a and b (diagonal = pattern count).
  std::array<std::array<std::size_t, kPatterns.size()>, kPatterns.size()> co_occurrence{};
  std::vector<ErrorRecord> records;
  std::vector<std::string> warnings;

  double pattern_pct(Pattern p) const;
  double co_occurrence_pct(Pattern a, Pattern b) const;
  friend bool operator==(const TaxonomyReport&, const TaxonomyReport&) = default;
};

// Classifies every EM = 0 example. `threads` = 0 picks hardware concurrency;
// the report is identical for any thread count.
TaxonomyReport analyze(const Dataset& dataset, const PredictionSet& predictions,
                       unsigned threads = 1);

}  // namespace advqa::taxonomy
