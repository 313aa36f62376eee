#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace advqa::losskit {

// Token span, inclusive on both ends. The null answer is (0, 0).
struct Span {
  std::size_t start = 0;
  std::size_t end = 0;
  friend bool operator==(const Span&, const Span&) = default;
};

struct SpanExample {
  std::vector<double> start_logits;
  std::vector<double> end_logits;
  Span gold;
  double weight = 1.0;
  std::vector<Span> negatives;  // at most five, none equal to gold

  // Throws OutOfBounds, InvalidConfig or NonFiniteInput.
  void validate() const;
};

using SpanBatch = std::vector<SpanExample>;

struct LossConfig {
  double alpha = 0.5;
  double negation_weight = 3.0;
  double entity_weight = 2.5;

  void validate() const;
};

struct Gradient {
  std::vector<double> d_start;
  std::vector<double> d_end;
};

struct ExampleLoss {
  double value = 0.0;
  Gradient grad;
};

struct LossResult {
  double value = 0.0;
  std::vector<Gradient> grads;  // one per batch example
};

// -log softmax(start)[gold.start] - log softmax(end)[gold.end].
ExampleLoss qa_ce_loss(const std::vector<double>& start_logits, const std::vector<double>& end_logits, Span gold);

// (1/N) sum_i w_i * qa_ce_loss_i. Throws EmptyBatch.
LossResult weighted_batch_loss(const SpanBatch& batch);

// start_logits[span.start] + end_logits[span.end]. Throws OutOfBounds.
double span_score(const std::vector<double>& start_logits, const std::vector<double>& end_logits, Span span);

// -log(exp(S_gold) / (exp(S_gold) + sum exp(S_neg))). Zero with no negatives.
ExampleLoss contrastive_loss(const SpanExample& ex);

// (1 - alpha) * weighted_batch_loss + alpha * mean contrastive loss over the
// examples that carry negatives (zero when none do).
LossResult total_loss(const SpanBatch& batch, const LossConfig& config);

// Built-in verification suite behind `loss-check`.
struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

std::vector<CheckResult> run_self_checks(std::uint64_t seed, std::size_t instances = 100);

}  // namespace advqa::losskit
