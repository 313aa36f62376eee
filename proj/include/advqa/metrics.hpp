#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "advqa/corpus.hpp"

namespace advqa::metrics {

// lowercase -> punctuation to space -> drop {a, an, the} -> whitespace split.
std::vector<std::string> normalize_answer(std::string_view text);

// EM in {0, 1}. With an empty gold list the example is treated as
// unanswerable: a match iff the prediction normalizes to nothing.
int exact_match(std::string_view prediction, const std::vector<std::string>& gold_answers);

// Token-multiset F1, maximized over gold answers.
double f1_score(std::string_view prediction, const std::vector<std::string>& gold_answers);

std::vector<std::string> gold_texts(const QAExample& ex);

struct ExampleScore {
  int em = 0;
  double f1 = 0.0;
  std::string predicted;
  std::vector<std::string> gold;
  bool missing = false;
};

struct EvalReport {
  double em = 0.0;  // percent
  double f1 = 0.0;  // percent
  std::size_t n_examples = 0;
  std::size_t n_missing = 0;
  std::map<std::string, ExampleScore> per_example;
  std::vector<std::string> warnings;
};

// Missing predictions score 0 and add a warning. Throws EmptyDataset.
EvalReport evaluate(const Dataset& dataset, const PredictionSet& predictions);

struct GapReport {
  double clean_em = 0.0;
  double adversarial_em = 0.0;
  double gap = 0.0;  // adversarial_em - clean_em
  std::optional<double> closure_pct;
};

GapReport adversarial_gap(double clean_em, double adversarial_em,
                          std::optional<double> baseline_gap = std::nullopt);
GapReport adversarial_gap(const EvalReport& clean, const EvalReport& adversarial,
                          std::optional<double> baseline_gap = std::nullopt);

// Share of a baseline gap that a new gap eliminates, in percent.
double gap_closure(double baseline_gap, double new_gap);

// Fixed two-decimal display with half-up rounding.
std::string format_pct(double value, int decimals = 2);

// Running sum with Neumaier compensation, so serial and chunked accumulation
// agree to display precision.
class CompensatedSum {
 public:
  void add(double x);
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace advqa::metrics
