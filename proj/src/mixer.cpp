#include "advqa/mixer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include <json.hpp>

#include "advqa/error.hpp"
#include "advqa/metrics.hpp"
#include "advqa/random.hpp"

namespace advqa::mixer {

std::string Ratio::label() const {
  // Percent labels when the fraction has an exact percent form.
  if ((100 * num) % den == 0) {
    auto c = 100 * num / den;
    return std::to_string(c) + "-" + std::to_string(100 - c);
  }
  return std::to_string(num) + "/" + std::to_string(den);
}

namespace {

std::uint64_t parse_uint(std::string_view s, std::string_view whole) {
  std::string t = text::trim(s);
  if (t.empty() || !std::all_of(t.begin(), t.end(), [](char c) { return c >= '0' && c <= '9'; }) ||
      t.size() > 12) {
    throw Error(ErrorCode::InvalidConfig, "bad ratio '" + std::string(whole) + "'");
  }
  return std::stoull(t);
}

Ratio reduced(std::uint64_t num, std::uint64_t den, std::string_view whole) {
  if (den == 0 || num == 0 || num >= den) {
    throw Error(ErrorCode::InvalidConfig, "ratio '" + std::string(whole) + "' must give a clean share in (0, 1)");
  }
  auto g = std::gcd(num, den);
  return {num / g, den / g};
}

}  // namespace

Ratio parse_ratio(std::string_view s) {
  if (auto p = s.find('-'); p != std::string_view::npos) {
    auto a = parse_uint(s.substr(0, p), s);
    auto b = parse_uint(s.substr(p + 1), s);
    if (a + b != 100) throw Error(ErrorCode::InvalidConfig, "percent ratio '" + std::string(s) + "' must sum to 100");
    return reduced(a, 100, s);
  }
  if (auto p = s.find(':'); p != std::string_view::npos) {
    auto a = parse_uint(s.substr(0, p), s);
    auto b = parse_uint(s.substr(p + 1), s);
    return reduced(a, a + b, s);
  }
  if (auto p = s.find('/'); p != std::string_view::npos) {
    return reduced(parse_uint(s.substr(0, p), s), parse_uint(s.substr(p + 1), s), s);
  }
  // Decimal fraction, read digit by digit so 0.8 is exactly 4/5.
  std::string t = text::trim(s);
  auto dot = t.find('.');
  if (dot == std::string::npos || t.substr(0, dot) != "0" || dot + 1 >= t.size() || t.size() - dot - 1 > 9) {
    throw Error(ErrorCode::InvalidConfig, "bad ratio '" + std::string(s) + "'");
  }
  auto frac = t.substr(dot + 1);
  std::uint64_t den = 1;
  for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
  return reduced(parse_uint(frac, s), den, s);
}

std::vector<Ratio> standard_ratios() { return {{9, 10}, {4, 5}, {7, 10}, {3, 5}, {1, 2}}; }

double MixStats::achieved_clean_pct() const {
  return total() == 0 ? 0.0 : 100.0 * static_cast<double>(n_clean) / static_cast<double>(total());
}

namespace {

// k distinct indices of [0, n) via a partial Fisher-Yates pass, returned in
// selection order.
std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k, Rng& rng) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  for (std::size_t i = 0; i < k; ++i) {
    auto j = i + uniform_index(rng, n - i);
    std::swap(idx[i], idx[j]);
  }
  idx.resize(k);
  return idx;
}

// Draw `k` examples; beyond the pool size (only when allowed) whole extra
// passes follow, with duplicated ids suffixed.
std::vector<QAExample> draw(const Dataset& pool, std::size_t k, Rng& rng, std::size_t& duplicated) {
  std::vector<QAExample> out;
  out.reserve(k);
  std::size_t round = 0;
  while (out.size() < k) {
    auto take = std::min(k - out.size(), pool.size());
    for (auto i : sample_indices(pool.size(), take, rng)) {
      auto ex = pool.examples[i];
      if (round > 0) {
        ex.id += "#dup" + std::to_string(round);
        ++duplicated;
      }
      out.push_back(std::move(ex));
    }
    ++round;
  }
  return out;
}

}  // namespace

MixResult mix(const Dataset& clean, const Dataset& adversarial, const MixConfig& config) {
  if (clean.empty()) throw Error(ErrorCode::EmptyDataset, "clean dataset is empty");
  if (adversarial.empty()) throw Error(ErrorCode::EmptyDataset, "adversarial dataset is empty");
  {
    std::unordered_set<std::string> ids;
    for (const auto& ex : clean.examples) ids.insert(ex.id);
    for (const auto& ex : adversarial.examples) {
      if (ids.contains(ex.id)) throw Error(ErrorCode::DuplicateId, "id '" + ex.id + "' appears in both inputs");
    }
  }
  const auto& r = config.ratio;
  if (r.num == 0 || r.num >= r.den) throw Error(ErrorCode::InvalidConfig, "clean share must lie in (0, 1)");

  MixResult out;
  auto& st = out.stats;
  st.requested = r;
  std::size_t want_clean = 0;
  std::size_t want_adv = 0;
  if (config.total_size) {
    const auto t = static_cast<std::uint64_t>(*config.total_size);
    want_clean = static_cast<std::size_t>((2 * r.num * t + r.den) / (2 * r.den));
    want_adv = *config.total_size - want_clean;
  } else {
    want_clean = clean.size();
    const auto c = static_cast<std::uint64_t>(clean.size());
    const auto adv_num = r.den - r.num;
    want_adv = static_cast<std::size_t>((2 * adv_num * c + r.num) / (2 * r.num));
    if (want_adv > adversarial.size() && config.sampling == Sampling::WithoutReplacement) {
      st.notes.push_back("adversarial pool holds " + std::to_string(adversarial.size()) + " of the " +
                         std::to_string(want_adv) + " examples the ratio asks for; all were used");
      want_adv = adversarial.size();
    }
  }
  if (config.sampling == Sampling::WithoutReplacement) {
    if (want_clean > clean.size()) {
      throw Error(ErrorCode::InsufficientData, "need " + std::to_string(want_clean) + " clean examples, have " +
                                                   std::to_string(clean.size()));
    }
    if (want_adv > adversarial.size()) {
      throw Error(ErrorCode::InsufficientData, "need " + std::to_string(want_adv) +
                                                   " adversarial examples, have " +
                                                   std::to_string(adversarial.size()));
    }
  }

  Rng clean_rng(derive_seed(config.seed, std::string_view("clean")));
  Rng adv_rng(derive_seed(config.seed, std::string_view("adversarial")));
  Rng shuffle_rng(derive_seed(config.seed, std::string_view("shuffle")));
  auto rows = draw(clean, want_clean, clean_rng, st.n_duplicated);
  auto adv = draw(adversarial, want_adv, adv_rng, st.n_duplicated);
  for (auto& ex : adv) {
    if (ex.origin == Origin::Clean) ex.origin = Origin::AddSent;
  }
  st.n_clean = rows.size();
  st.n_adversarial = adv.size();
  rows.insert(rows.end(), std::make_move_iterator(adv.begin()), std::make_move_iterator(adv.end()));
  for (std::size_t i = rows.size(); i > 1; --i) {
    std::swap(rows[i - 1], rows[uniform_index(shuffle_rng, i)]);
  }
  for (const auto& ex : rows) ++st.origins[ex.origin];
  if (st.n_duplicated > 0) st.notes.push_back(std::to_string(st.n_duplicated) + " examples drawn more than once");
  if (!config.total_size) {
    st.notes.push_back("achieved clean share " + metrics::format_pct(st.achieved_clean_pct(), 1) + "% (" +
                       std::to_string(st.n_clean) + ":" + std::to_string(st.n_adversarial) + ")");
  }
  out.dataset.examples = std::move(rows);
  out.dataset.source_label = clean.source_label.empty() ? "mixed" : clean.source_label;
  out.dataset.version = clean.version;
  return out;
}

std::vector<SweepEntry> mix_sweep(const Dataset& clean, const Dataset& adversarial, const std::vector<Ratio>& ratios,
                                  std::uint64_t seed, std::optional<std::size_t> total_size, Sampling sampling) {
  std::vector<SweepEntry> out;
  for (std::size_t i = 0; i < ratios.size(); ++i) {
    MixConfig c{ratios[i], total_size, derive_seed(seed, static_cast<std::uint64_t>(i)), sampling};
    out.push_back({ratios[i], mix(clean, adversarial, c)});
  }
  return out;
}

std::string stats_json(const MixStats& s) {
  nlohmann::ordered_json j;
  j["ratio"] = s.requested.label();
  j["n_clean"] = s.n_clean;
  j["n_adversarial"] = s.n_adversarial;
  j["total"] = s.total();
  j["n_duplicated"] = s.n_duplicated;
  j["achieved_clean_pct"] = std::round(s.achieved_clean_pct() * 100.0) / 100.0;
  j["origins"] = nlohmann::ordered_json::object();
  for (const auto& [o, c] : s.origins) j["origins"][std::string(to_string(o))] = c;
  j["notes"] = s.notes;
  return j.dump(2) + "\n";
}

}  // namespace advqa::mixer
