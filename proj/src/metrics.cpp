#include "advqa/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <unordered_map>

#include "advqa/error.hpp"

namespace advqa::metrics {

std::vector<std::string> normalize_answer(std::string_view input) {
  auto cps = text::to_lower(text::decode(input));
  for (auto& c : cps) {
    if (text::is_punct(c)) c = U' ';
  }
  std::vector<std::string> out;
  std::u32string cur;
  auto flush = [&] {
    if (cur.empty()) return;
    if (cur != U"a" && cur != U"an" && cur != U"the") out.push_back(text::encode(cur));
    cur.clear();
  };
  for (char32_t c : cps) {
    if (text::is_space(c)) {
      flush();
    } else {
      cur.push_back(c);
    }
  }
  flush();
  return out;
}

namespace {

const std::vector<std::string>& golds_or_null(const std::vector<std::string>& gold) {
  static const std::vector<std::string> kNull{std::string()};
  return gold.empty() ? kNull : gold;
}

double token_f1(const std::vector<std::string>& pred, const std::vector<std::string>& gold) {
  if (pred.empty() || gold.empty()) return pred.empty() && gold.empty() ? 1.0 : 0.0;
  std::unordered_map<std::string, int> counts;
  for (const auto& t : gold) ++counts[t];
  int overlap = 0;
  for (const auto& t : pred) {
    auto it = counts.find(t);
    if (it != counts.end() && it->second > 0) {
      --it->second;
      ++overlap;
    }
  }
  if (overlap == 0) return 0.0;
  double precision = static_cast<double>(overlap) / static_cast<double>(pred.size());
  double recall = static_cast<double>(overlap) / static_cast<double>(gold.size());
  return 2.0 * precision * recall / (precision + recall);
}

}  // namespace

int exact_match(std::string_view prediction, const std::vector<std::string>& gold_answers) {
  auto pred = normalize_answer(prediction);
  for (const auto& g : golds_or_null(gold_answers)) {
    if (normalize_answer(g) == pred) return 1;
  }
  return 0;
}

double f1_score(std::string_view prediction, const std::vector<std::string>& gold_answers) {
  auto pred = normalize_answer(prediction);
  double best = 0.0;
  for (const auto& g : golds_or_null(gold_answers)) {
    best = std::max(best, token_f1(pred, normalize_answer(g)));
  }
  return best;
}

std::vector<std::string> gold_texts(const QAExample& ex) {
  std::vector<std::string> out;
  if (ex.is_impossible) return out;
  out.reserve(ex.answers.size());
  for (const auto& a : ex.answers) out.push_back(a.text);
  return out;
}

void CompensatedSum::add(double x) {
  double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x)) {
    comp_ += (sum_ - t) + x;
  } else {
    comp_ += (x - t) + sum_;
  }
  sum_ = t;
}

EvalReport evaluate(const Dataset& dataset, const PredictionSet& predictions) {
  if (dataset.empty()) throw Error(ErrorCode::EmptyDataset, "nothing to evaluate");
  EvalReport report;
  long long em_total = 0;
  CompensatedSum f1_total;
  for (const auto& ex : dataset.examples) {
    ExampleScore s;
    s.gold = gold_texts(ex);
    auto it = predictions.find(ex.id);
    if (it == predictions.end()) {
      s.missing = true;
      ++report.n_missing;
      report.warnings.push_back("missing prediction for " + ex.id + " (scored 0)");
    } else {
      s.predicted = it->second;
      s.em = exact_match(s.predicted, s.gold);
      s.f1 = f1_score(s.predicted, s.gold);
    }
    em_total += s.em;
    f1_total.add(s.f1);
    report.per_example.emplace(ex.id, std::move(s));
  }
  report.n_examples = dataset.size();
  const auto n = static_cast<double>(report.n_examples);
  report.em = 100.0 * static_cast<double>(em_total) / n;
  report.f1 = 100.0 * f1_total.value() / n;
  return report;
}

double gap_closure(double baseline_gap, double new_gap) {
  if (baseline_gap == 0.0) throw Error(ErrorCode::InvalidConfig, "baseline gap is zero");
  return 100.0 * (baseline_gap - new_gap) / baseline_gap;
}

GapReport adversarial_gap(double clean_em, double adversarial_em, std::optional<double> baseline_gap) {
  GapReport g;
  g.clean_em = clean_em;
  g.adversarial_em = adversarial_em;
  g.gap = adversarial_em - clean_em;
  if (baseline_gap) g.closure_pct = gap_closure(*baseline_gap, g.gap);
  return g;
}

GapReport adversarial_gap(const EvalReport& clean, const EvalReport& adversarial,
                          std::optional<double> baseline_gap) {
  if (clean.n_examples == 0 || adversarial.n_examples == 0) {
    throw Error(ErrorCode::EmptyDataset, "gap needs two non-empty reports");
  }
  return adversarial_gap(clean.em, adversarial.em, baseline_gap);
}

std::string format_pct(double value, int decimals) {
  // Round the shortest decimal representation, not the binary value, so that
  // 0.125 displays as 0.13 and 94.925 as 94.93.
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", value);
  double scale = std::pow(10.0, decimals);
  double v = std::strtod(buf, nullptr);
  double scaled = std::abs(v) * scale;
  double rounded = std::floor(scaled + 0.5 + 1e-9 * std::max(1.0, scaled));
  if (v < 0 && rounded != 0.0) rounded = -rounded;
  std::snprintf(buf, sizeof buf, "%.*f", decimals, rounded / scale);
  return buf;
}

}  // namespace advqa::metrics
