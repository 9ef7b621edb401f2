#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <random>
#include <vector>

#include "ugf/ufunction.hpp"

namespace ugf::test {

inline std::filesystem::path data_dir() { return UGF_DATA_DIR; }

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline std::size_t pick(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

inline std::vector<double> random_simplex(std::mt19937_64& rng, std::size_t n) {
  std::vector<double> w(n);
  double total = 0.0;
  for (auto& x : w) {
    x = uniform(rng, 0.05, 1.0);
    total += x;
  }
  for (auto& x : w) x /= total;
  return w;
}

// Values are drawn from a coarse integer grid times `scale` so that like
// terms actually occur after composition.
inline UFunction random_ufunction(std::mt19937_64& rng, std::size_t max_terms, double scale = 1.0,
                                  int lo = -20, int hi = 50) {
  const std::size_t n = pick(rng, 1, max_terms);
  const auto p = random_simplex(rng, n);
  std::vector<Term> terms;
  for (std::size_t i = 0; i < n; ++i) {
    const int v = std::uniform_int_distribution<int>(lo, hi)(rng);
    terms.push_back({scale * v, p[i]});
  }
  return make_ufunction(terms);
}

// Nested-loop composition with exact grouping on the value key.
inline std::map<double, double> naive_compose(const UFunction& a, const UFunction& b, StructureFunction phi) {
  std::map<double, double> out;
  for (const auto& x : a) {
    for (const auto& y : b) out[phi(x.value, y.value)] += x.probability * y.probability;
  }
  return out;
}

inline double max_term_gap(const UFunction& a, const UFunction& b) {
  if (a.size() != b.size()) return INFINITY;
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    worst = std::max({worst, std::abs(a[i].value - b[i].value), std::abs(a[i].probability - b[i].probability)});
  }
  return worst;
}

inline double rel_diff(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

}  // namespace ugf::test
