#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "advqa/corpus.hpp"

namespace advqa::mixer {

// Clean share of the mixed set as an exact fraction num/den.
struct Ratio {
  std::uint64_t num = 4;
  std::uint64_t den = 5;

  double clean_fraction() const { return static_cast<double>(num) / static_cast<double>(den); }
  // "80-20" style label.
  std::string label() const;
  friend bool operator==(const Ratio&, const Ratio&) = default;
};

// Accepts "80-20" (percents summing to 100), "80:20", "0.8" or "4/5".
// Throws InvalidConfig.
Ratio parse_ratio(std::string_view s);

// The five-point sweep 90-10 ... 50-50.
std::vector<Ratio> standard_ratios();

enum class Sampling { WithoutReplacement, WithReplacementIfShort };

struct MixConfig {
  Ratio ratio;
  std::optional<std::size_t> total_size;  // nullopt: keep every clean example
  std::uint64_t seed = 0;
  Sampling sampling = Sampling::WithoutReplacement;
};

struct MixStats {
  Ratio requested;
  std::size_t n_clean = 0;
  std::size_t n_adversarial = 0;
  std::size_t n_duplicated = 0;
  std::map<Origin, std::size_t> origins;
  std::vector<std::string> notes;

  std::size_t total() const { return n_clean + n_adversarial; }
  double achieved_clean_pct() const;
};

struct MixResult {
  Dataset dataset;
  MixStats stats;
};

// Clean count = round-half-up(fraction x total), adversarial = remainder.
// Without a total, all clean examples are kept and the adversarial count is
// solved from the ratio; a short adversarial pool is then used whole and the
// achieved ratio reported. Adversarial examples from clean origin are tagged
// addsent. The result is shuffled with a seeded Fisher-Yates pass.
MixResult mix(const Dataset& clean, const Dataset& adversarial, const MixConfig& config);

struct SweepEntry {
  Ratio ratio;
  MixResult result;
};

// One mix per ratio, each with a seed derived from (seed, ratio index).
std::vector<SweepEntry> mix_sweep(const Dataset& clean, const Dataset& adversarial,
                                  const std::vector<Ratio>& ratios, std::uint64_t seed,
                                  std::optional<std::size_t> total_size = std::nullopt,
                                  Sampling sampling = Sampling::WithoutReplacement);

std::string stats_json(const MixStats& stats);

}  // namespace advqa::mixer
