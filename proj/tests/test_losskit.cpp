#include <doctest.h>

#include <cmath>
#include <random>

#include "advqa/error.hpp"
#include "advqa/losskit.hpp"
#include "oracles.hpp"

using namespace advqa;
using namespace advqa::losskit;

namespace {

SpanExample random_example(std::mt19937_64& rng, std::size_t len, std::size_t n_neg) {
  std::normal_distribution<double> nd(0.0, 2.0);
  SpanExample ex;
  for (std::size_t i = 0; i < len; ++i) {
    ex.start_logits.push_back(nd(rng));
    ex.end_logits.push_back(nd(rng));
  }
  ex.gold = {rng() % len, rng() % len};
  ex.weight = 1.0 + static_cast<double>(rng() % 3);
  while (ex.negatives.size() < n_neg) {
    Span s{rng() % len, rng() % len};
    if (!(s == ex.gold)) ex.negatives.push_back(s);
  }
  return ex;
}

}  // namespace

TEST_CASE("closed forms") {
  for (std::size_t len : {1u, 2u, 7u, 384u}) {
    std::vector<double> z(len, 0.3);
    CHECK(std::abs(qa_ce_loss(z, z, {0, len - 1}).value - 2 * std::log(static_cast<double>(len))) <= 1e-12);
  }
  SpanExample ex;
  ex.start_logits.assign(10, 1.5);
  ex.end_logits.assign(10, -0.5);
  ex.gold = {2, 3};
  for (std::size_t i = 0; i < 5; ++i) ex.negatives.push_back({i + 4, i + 4});
  CHECK(std::abs(contrastive_loss(ex).value - std::log(6.0)) <= 1e-12);
  ex.negatives.clear();
  CHECK(contrastive_loss(ex).value == 0.0);
  CHECK(span_score(ex.start_logits, ex.end_logits, {1, 2}) == 1.0);
}

TEST_CASE("alpha boundaries") {
  std::mt19937_64 rng(1);
  SpanBatch batch;
  for (int i = 0; i < 6; ++i) batch.push_back(random_example(rng, 9, i % 3 == 0 ? 0 : 4));
  LossConfig c0{0.0}, c1{1.0};
  CHECK(total_loss(batch, c0).value == doctest::Approx(weighted_batch_loss(batch).value).epsilon(1e-14));
  double mean_c = 0;
  std::size_t with = 0;
  for (const auto& ex : batch) {
    if (ex.negatives.empty()) continue;
    mean_c += contrastive_loss(ex).value;
    ++with;
  }
  CHECK(total_loss(batch, c1).value == doctest::Approx(mean_c / static_cast<double>(with)).epsilon(1e-14));
  SpanBatch none;
  for (int i = 0; i < 3; ++i) none.push_back(random_example(rng, 5, 0));
  CHECK(total_loss(none, c1).value == 0.0);
}

TEST_CASE("gradients match central differences") {
  std::mt19937_64 rng(2);
  double worst = 0;
  for (int inst = 0; inst < 100; ++inst) {
    SpanBatch batch;
    const std::size_t len = 3 + rng() % 10;
    for (int i = 0; i < 3; ++i) batch.push_back(random_example(rng, len, rng() % 6));
    LossConfig cfg{static_cast<double>(rng() % 1000) / 1000.0};
    std::vector<double> x;
    for (const auto& ex : batch) {
      x.insert(x.end(), ex.start_logits.begin(), ex.start_logits.end());
      x.insert(x.end(), ex.end_logits.begin(), ex.end_logits.end());
    }
    auto unpack = [&](const std::vector<double>& v) {
      SpanBatch b = batch;
      std::size_t k = 0;
      for (auto& ex : b) {
        for (auto& z : ex.start_logits) z = v[k++];
        for (auto& z : ex.end_logits) z = v[k++];
      }
      return b;
    };
    auto flat = [](const std::vector<Gradient>& gs) {
      std::vector<double> out;
      for (const auto& g : gs) {
        out.insert(out.end(), g.d_start.begin(), g.d_start.end());
        out.insert(out.end(), g.d_end.begin(), g.d_end.end());
      }
      return out;
    };
    auto fd = oracle::fd_gradient([&](const std::vector<double>& v) { return total_loss(unpack(v), cfg).value; }, x);
    worst = std::max(worst, oracle::max_rel_err(flat(total_loss(batch, cfg).grads), fd));
  }
  CHECK(worst <= 1e-6);
}

TEST_CASE("input validation") {
  CHECK_THROWS_AS(weighted_batch_loss({}), Error);
  SpanExample ex;
  ex.start_logits = {0, 0};
  ex.end_logits = {0, 0};
  ex.gold = {0, 5};
  CHECK_THROWS_AS(ex.validate(), Error);
  ex.gold = {0, 1};
  ex.negatives = {{0, 1}};
  CHECK_THROWS_AS(ex.validate(), Error);
  ex.negatives = {};
  ex.start_logits[0] = std::nan("");
  CHECK_THROWS_AS(ex.validate(), Error);
  CHECK_THROWS_AS(span_score({0.0}, {0.0}, {0, 1}), Error);
  CHECK_THROWS_AS(LossConfig{1.5}.validate(), Error);
}

TEST_CASE("numerically stable for large logits") {
  std::vector<double> z = {1000.0, -1000.0, 999.0};
  auto r = qa_ce_loss(z, z, {0, 0});
  CHECK(std::isfinite(r.value));
  CHECK(r.value == doctest::Approx(2 * std::log1p(std::exp(-1.0))).epsilon(1e-12));
}

TEST_CASE("self checks all pass") {
  for (const auto& c : run_self_checks(0, 100)) {
    CAPTURE(c.name);
    CAPTURE(c.detail);
    CHECK(c.pass);
  }
}
