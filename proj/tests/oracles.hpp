#pragma once

// Independent, deliberately naive re-implementations used as test oracles.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace oracle {

// ASCII-only scorer normalization: lowercase, punctuation to space, drop
// articles, split.
inline std::vector<std::string> normalize(const std::string& s) {
  std::string t;
  for (unsigned char c : s) t += std::ispunct(c) ? ' ' : static_cast<char>(std::tolower(c));
  std::istringstream in(t);
  std::vector<std::string> out;
  for (std::string w; in >> w;) {
    if (w != "a" && w != "an" && w != "the") out.push_back(w);
  }
  return out;
}

inline int em(const std::string& pred, const std::vector<std::string>& golds) {
  if (golds.empty()) return normalize(pred).empty() ? 1 : 0;
  for (const auto& g : golds) {
    if (normalize(pred) == normalize(g)) return 1;
  }
  return 0;
}

inline double f1_one(const std::string& pred, const std::string& gold) {
  auto p = normalize(pred), g = normalize(gold);
  if (p.empty() && g.empty()) return 1.0;
  if (p.empty() || g.empty()) return 0.0;
  std::map<std::string, int> cp, cg;
  for (auto& w : p) ++cp[w];
  for (auto& w : g) ++cg[w];
  int common = 0;
  for (auto& [w, n] : cp) common += std::min(n, cg[w]);
  if (common == 0) return 0.0;
  double prec = static_cast<double>(common) / static_cast<double>(p.size());
  double rec = static_cast<double>(common) / static_cast<double>(g.size());
  return 2 * prec * rec / (prec + rec);
}

inline double f1(const std::string& pred, const std::vector<std::string>& golds) {
  if (golds.empty()) return normalize(pred).empty() ? 1.0 : 0.0;
  double best = 0.0;
  for (const auto& g : golds) best = std::max(best, f1_one(pred, g));
  return best;
}

// Central-difference gradient of f at x.
inline std::vector<double> fd_gradient(const std::function<double(const std::vector<double>&)>& f,
                                       std::vector<double> x, double h = 1e-5) {
  std::vector<double> g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double keep = x[i];
    x[i] = keep + h;
    const double up = f(x);
    x[i] = keep - h;
    const double down = f(x);
    x[i] = keep;
    g[i] = (up - down) / (2 * h);
  }
  return g;
}

// Max over components of |a - b| / max(1, |a|, |b|).
inline double max_rel_err(const std::vector<double>& a, const std::vector<double>& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double scale = std::max({1.0, std::abs(a[i]), std::abs(b[i])});
    worst = std::max(worst, std::abs(a[i] - b[i]) / scale);
  }
  return worst;
}

struct Candidate {
  std::size_t start, end;
  std::string surface;
};

// The k candidates closest to [gs, ge) by character gap, earlier first on ties.
inline std::vector<std::string> nearest(std::vector<Candidate> cands, std::size_t gs, std::size_t ge,
                                        std::size_t k) {
  auto gap = [&](const Candidate& c) -> std::size_t {
    if (c.end <= gs) return gs - c.end;
    if (ge <= c.start) return c.start - ge;
    return 0;
  };
  std::stable_sort(cands.begin(), cands.end(), [&](const Candidate& a, const Candidate& b) {
    if (gap(a) != gap(b)) return gap(a) < gap(b);
    return a.start < b.start;
  });
  std::vector<std::string> out;
  for (std::size_t i = 0; i < cands.size() && i < k; ++i) out.push_back(cands[i].surface);
  return out;
}

}  // namespace oracle
