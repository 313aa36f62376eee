#include "advqa/losskit.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "advqa/error.hpp"
#include "advqa/metrics.hpp"
#include "advqa/random.hpp"

namespace advqa::losskit {

namespace {

void require_finite(const std::vector<double>& v, const char* what) {
  for (double x : v) {
    if (!std::isfinite(x)) throw Error(ErrorCode::NonFiniteInput, std::string(what) + " holds a non-finite value");
  }
}

void require_in_bounds(Span s, std::size_t n, const char* what) {
  if (s.start >= n || s.end >= n) {
    throw Error(ErrorCode::OutOfBounds, std::string(what) + " (" + std::to_string(s.start) + ", " +
                                            std::to_string(s.end) + ") outside length " + std::to_string(n));
  }
}

// log(sum exp(v)) with the max shifted out; also fills softmax(v) into p.
double log_softmax_norm(const std::vector<double>& v, std::vector<double>& p) {
  const double m = *std::max_element(v.begin(), v.end());
  metrics::CompensatedSum z;
  p.resize(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    p[i] = std::exp(v[i] - m);
    z.add(p[i]);
  }
  for (auto& x : p) x /= z.value();
  return m + std::log(z.value());
}

}  // namespace

void SpanExample::validate() const {
  if (start_logits.empty() || start_logits.size() != end_logits.size()) {
    throw Error(ErrorCode::InvalidConfig, "start/end logits must be non-empty and of equal length");
  }
  require_finite(start_logits, "start_logits");
  require_finite(end_logits, "end_logits");
  if (!std::isfinite(weight) || weight < 0.0) throw Error(ErrorCode::NonFiniteInput, "loss weight must be finite and >= 0");
  require_in_bounds(gold, start_logits.size(), "gold span");
  if (negatives.size() > 5) throw Error(ErrorCode::InvalidConfig, "more than five negatives");
  for (const auto& n : negatives) {
    require_in_bounds(n, start_logits.size(), "negative span");
    if (n == gold) throw Error(ErrorCode::InvalidConfig, "negative span equals the gold span");
  }
}

void LossConfig::validate() const {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw Error(ErrorCode::InvalidConfig, "alpha must lie in [0, 1]");
}

ExampleLoss qa_ce_loss(const std::vector<double>& s, const std::vector<double>& e, Span gold) {
  if (s.empty() || s.size() != e.size()) {
    throw Error(ErrorCode::InvalidConfig, "start/end logits must be non-empty and of equal length");
  }
  require_finite(s, "start_logits");
  require_finite(e, "end_logits");
  require_in_bounds(gold, s.size(), "gold span");
  ExampleLoss out;
  const double ls = log_softmax_norm(s, out.grad.d_start);
  const double le = log_softmax_norm(e, out.grad.d_end);
  out.value = (ls - s[gold.start]) + (le - e[gold.end]);
  out.grad.d_start[gold.start] -= 1.0;
  out.grad.d_end[gold.end] -= 1.0;
  return out;
}

LossResult weighted_batch_loss(const SpanBatch& batch) {
  if (batch.empty()) throw Error(ErrorCode::EmptyBatch, "weighted_batch_loss needs at least one example");
  LossResult out;
  metrics::CompensatedSum sum;
  const double inv_n = 1.0 / static_cast<double>(batch.size());
  for (const auto& ex : batch) {
    ex.validate();
    auto l = qa_ce_loss(ex.start_logits, ex.end_logits, ex.gold);
    sum.add(ex.weight * l.value);
    const double scale = ex.weight * inv_n;
    for (auto& g : l.grad.d_start) g *= scale;
    for (auto& g : l.grad.d_end) g *= scale;
    out.grads.push_back(std::move(l.grad));
  }
  out.value = sum.value() * inv_n;
  return out;
}

double span_score(const std::vector<double>& s, const std::vector<double>& e, Span span) {
  if (s.size() != e.size()) throw Error(ErrorCode::InvalidConfig, "start/end logits differ in length");
  require_in_bounds(span, s.size(), "span");
  return s[span.start] + e[span.end];
}

ExampleLoss contrastive_loss(const SpanExample& ex) {
  ex.validate();
  ExampleLoss out;
  out.grad.d_start.assign(ex.start_logits.size(), 0.0);
  out.grad.d_end.assign(ex.end_logits.size(), 0.0);
  if (ex.negatives.empty()) return out;
  std::vector<double> scores;
  scores.push_back(span_score(ex.start_logits, ex.end_logits, ex.gold));
  for (const auto& n : ex.negatives) scores.push_back(span_score(ex.start_logits, ex.end_logits, n));
  std::vector<double> p;
  const double lse = log_softmax_norm(scores, p);
  out.value = lse - scores[0];
  // dL/dS_k = p_k - [k == gold]; each score feeds exactly two logits.
  for (std::size_t k = 0; k < scores.size(); ++k) {
    const Span sp = k == 0 ? ex.gold : ex.negatives[k - 1];
    const double g = p[k] - (k == 0 ? 1.0 : 0.0);
    out.grad.d_start[sp.start] += g;
    out.grad.d_end[sp.end] += g;
  }
  return out;
}

LossResult total_loss(const SpanBatch& batch, const LossConfig& config) {
  config.validate();
  auto out = weighted_batch_loss(batch);
  const double a = config.alpha;
  for (auto& g : out.grads) {
    for (auto& x : g.d_start) x *= (1.0 - a);
    for (auto& x : g.d_end) x *= (1.0 - a);
  }
  std::size_t rich = 0;
  for (const auto& ex : batch) rich += ex.negatives.empty() ? 0 : 1;
  metrics::CompensatedSum con;
  if (rich > 0) {
    const double scale = a / static_cast<double>(rich);
    for (std::size_t i = 0; i < batch.size(); ++i) {
      if (batch[i].negatives.empty()) continue;
      auto c = contrastive_loss(batch[i]);
      con.add(c.value);
      for (std::size_t t = 0; t < c.grad.d_start.size(); ++t) {
        out.grads[i].d_start[t] += scale * c.grad.d_start[t];
        out.grads[i].d_end[t] += scale * c.grad.d_end[t];
      }
    }
  }
  const double l_con = rich > 0 ? con.value() / static_cast<double>(rich) : 0.0;
  out.value = (1.0 - a) * out.value + a * l_con;
  return out;
}

namespace {

SpanExample random_example(Rng& rng, bool with_negatives) {
  SpanExample ex;
  const std::size_t len = 2 + uniform_index(rng, 15);
  for (std::size_t i = 0; i < len; ++i) {
    ex.start_logits.push_back(6.0 * uniform_unit(rng) - 3.0);
    ex.end_logits.push_back(6.0 * uniform_unit(rng) - 3.0);
  }
  ex.gold = {uniform_index(rng, len), uniform_index(rng, len)};
  static constexpr double kWeights[] = {1.0, 2.5, 3.0};
  ex.weight = kWeights[uniform_index(rng, 3)];
  if (with_negatives) {
    const std::size_t want = 1 + uniform_index(rng, 5);
    for (std::size_t tries = 0; tries < 50 && ex.negatives.size() < want; ++tries) {
      Span s{uniform_index(rng, len), uniform_index(rng, len)};
      if (s == ex.gold || std::find(ex.negatives.begin(), ex.negatives.end(), s) != ex.negatives.end()) continue;
      ex.negatives.push_back(s);
    }
  }
  return ex;
}

// Worst relative error of an analytic gradient against central differences
// over every logit of the batch.
double fd_error(SpanBatch batch, const std::function<LossResult(const SpanBatch&)>& f) {
  constexpr double h = 1e-5;
  const auto analytic = f(batch);
  double worst = 0.0;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    for (int head = 0; head < 2; ++head) {
      auto& v = head == 0 ? batch[i].start_logits : batch[i].end_logits;
      const auto& g = head == 0 ? analytic.grads[i].d_start : analytic.grads[i].d_end;
      for (std::size_t t = 0; t < v.size(); ++t) {
        const double x = v[t];
        v[t] = x + h;
        const double up = f(batch).value;
        v[t] = x - h;
        const double down = f(batch).value;
        v[t] = x;
        const double num = (up - down) / (2.0 * h);
        const double err = std::abs(num - g[t]) / std::max(1.0, std::abs(num) + std::abs(g[t]));
        worst = std::max(worst, err);
      }
    }
  }
  return worst;
}

std::string sci(double x) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << x;
  return os.str();
}

}  // namespace

std::vector<CheckResult> run_self_checks(std::uint64_t seed, std::size_t instances) {
  std::vector<CheckResult> out;
  Rng rng(seed);
  auto add = [&](std::string name, bool pass, std::string detail) {
    out.push_back({std::move(name), pass, std::move(detail)});
  };

  {
    std::vector<double> z(4, 0.0);
    double v = qa_ce_loss(z, z, {1, 2}).value;
    add("uniform CE equals 2 ln L", std::abs(v - 2.0 * std::log(4.0)) <= 1e-12, "value " + sci(v));
  }
  {
    SpanExample ex;
    ex.start_logits.assign(8, 0.0);
    ex.end_logits.assign(8, 0.0);
    ex.gold = {1, 1};
    ex.negatives = {{2, 2}, {3, 3}, {4, 4}, {5, 5}, {6, 6}};
    double v = contrastive_loss(ex).value;
    add("uniform contrastive with five negatives equals ln 6", std::abs(v - std::log(6.0)) <= 1e-12,
        "value " + sci(v));
    ex.negatives.clear();
    add("no negatives gives zero contrastive loss", contrastive_loss(ex).value == 0.0, "");
  }

  double worst_ce = 0, worst_wb = 0, worst_con = 0, worst_tot = 0, worst_shift = 0, worst_affine = 0;
  for (std::size_t k = 0; k < instances; ++k) {
    SpanBatch b;
    const std::size_t n = 1 + uniform_index(rng, 4);
    for (std::size_t i = 0; i < n; ++i) b.push_back(random_example(rng, uniform_index(rng, 3) != 0));
    worst_ce = std::max(worst_ce, fd_error({b[0]}, [](const SpanBatch& x) {
                          auto l = qa_ce_loss(x[0].start_logits, x[0].end_logits, x[0].gold);
                          return LossResult{l.value, {l.grad}};
                        }));
    worst_wb = std::max(worst_wb, fd_error(b, [](const SpanBatch& x) { return weighted_batch_loss(x); }));
    SpanExample withneg = b[0];
    if (withneg.negatives.empty()) withneg = random_example(rng, true);
    worst_con = std::max(worst_con, fd_error({withneg}, [](const SpanBatch& x) {
                           auto l = contrastive_loss(x[0]);
                           return LossResult{l.value, {l.grad}};
                         }));
    LossConfig cfg;
    cfg.alpha = uniform_unit(rng);
    worst_tot = std::max(worst_tot, fd_error(b, [&](const SpanBatch& x) { return total_loss(x, cfg); }));

    auto shifted = withneg;
    const double c = 10.0 * uniform_unit(rng) - 5.0;
    for (auto& x : shifted.start_logits) x += c;
    for (auto& x : shifted.end_logits) x += c;
    worst_shift = std::max({worst_shift, std::abs(contrastive_loss(shifted).value - contrastive_loss(withneg).value),
                            std::abs(qa_ce_loss(shifted.start_logits, shifted.end_logits, shifted.gold).value -
                                     qa_ce_loss(withneg.start_logits, withneg.end_logits, withneg.gold).value)});

    LossConfig a0{0.0}, a1{1.0}, am{cfg.alpha};
    const double v0 = total_loss(b, a0).value, v1 = total_loss(b, a1).value, vm = total_loss(b, am).value;
    worst_affine = std::max(worst_affine, std::abs(vm - ((1 - cfg.alpha) * v0 + cfg.alpha * v1)) / std::max(1.0, vm));
  }
  const auto n = std::to_string(instances);
  add("qa_ce_loss gradient vs central differences", worst_ce <= 1e-6, "max rel err " + sci(worst_ce) + " over " + n);
  add("weighted_batch_loss gradient vs central differences", worst_wb <= 1e-6,
      "max rel err " + sci(worst_wb) + " over " + n);
  add("contrastive_loss gradient vs central differences", worst_con <= 1e-6,
      "max rel err " + sci(worst_con) + " over " + n);
  add("total_loss gradient vs central differences", worst_tot <= 1e-6, "max rel err " + sci(worst_tot) + " over " + n);
  add("losses invariant to a common logit shift", worst_shift <= 1e-10, "max abs diff " + sci(worst_shift));
  add("total_loss affine in alpha", worst_affine <= 1e-12, "max rel diff " + sci(worst_affine));

  {
    SpanBatch b{random_example(rng, true), random_example(rng, true)};
    b[0].weight = 1.0;
    auto one = weighted_batch_loss(b);
    b[0].weight = 3.0;
    auto three = weighted_batch_loss(b);
    double worst = 0;
    for (std::size_t t = 0; t < one.grads[0].d_start.size(); ++t) {
      worst = std::max(worst, std::abs(three.grads[0].d_start[t] - 3.0 * one.grads[0].d_start[t]));
    }
    add("weight-3 gradient is three times the weight-1 gradient", worst <= 1e-12, "max abs diff " + sci(worst));
  }
  {
    SpanBatch b{random_example(rng, true)};
    LossConfig a0{0.0};
    add("alpha 0 reduces to the weighted QA loss", total_loss(b, a0).value == weighted_batch_loss(b).value, "");
  }
  return out;
}

}  // namespace advqa::losskit
