#include "ugf/ufunction.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>

#include "ugf/error.hpp"
#include "ugf/summation.hpp"

namespace ugf {
namespace {

// Upper bound on dense grid length in gridded_compose_plus.
constexpr std::int64_t kMaxGridCells = std::int64_t{1} << 26;

double total_mass(std::span<const Term> terms) {
  CompensatedSum s;
  for (const auto& t : terms) s += t.probability;
  return s.value();
}

void validate_terms(std::span<const Term> terms) {
  if (terms.empty()) throw Error(ErrorCode::EmptyInput, "u-function needs at least one term");
  for (const auto& t : terms) {
    if (!std::isfinite(t.value)) {
      throw Error(ErrorCode::InvalidSpec, "u-function term value is not finite");
    }
    if (!std::isfinite(t.probability) || t.probability < 0.0) {
      std::ostringstream msg;
      msg << "negative or non-finite probability " << t.probability << " at value " << t.value;
      throw Error(ErrorCode::NegativeProbability, msg.str());
    }
  }
}

void sort_terms(std::vector<Term>& terms) {
  std::stable_sort(terms.begin(), terms.end(),
                   [](const Term& a, const Term& b) { return a.value < b.value; });
}

// Input must be sorted ascending.
std::vector<Term> collect_sorted(const std::vector<Term>& sorted, double tol) {
  std::vector<Term> out;
  out.reserve(sorted.size());
  std::size_t i = 0;
  while (i < sorted.size()) {
    const double anchor = sorted[i].value;
    std::size_t j = i + 1;
    while (j < sorted.size() && sorted[j].value - anchor <= tol) ++j;
    if (j == i + 1) {
      out.push_back(sorted[i]);
    } else {
      // Offsets from the anchor keep identical values bit-exact.
      CompensatedSum mass;
      CompensatedSum moment;
      for (std::size_t k = i; k < j; ++k) {
        mass += sorted[k].probability;
        moment += sorted[k].probability * (sorted[k].value - anchor);
      }
      const double p = mass.value();
      const double v = p > 0.0 ? anchor + moment.value() / p : anchor;
      out.push_back({v, p});
    }
    i = j;
  }
  return out;
}

}  // namespace

UFunction::UFunction(std::vector<Term> terms) : terms_(std::move(terms)) {
  validate_terms(terms_);
  const double m = total_mass(terms_);
  if (std::abs(m - 1.0) > kMassTolerance) {
    std::ostringstream msg;
    msg << "u-function mass " << m << " differs from 1";
    throw Error(ErrorCode::MassNotNormalized, msg.str());
  }
  sort_terms(terms_);
}

UFunction UFunction::degenerate(double value) { return UFunction({{value, 1.0}}); }

double UFunction::mass() const noexcept { return total_mass(terms_); }

double UFunction::mean() const noexcept {
  CompensatedSum s;
  for (const auto& t : terms_) s += t.probability * t.value;
  return s.value();
}

double default_collection_tolerance(std::span<const Term> terms) {
  if (terms.empty()) return 0.0;
  const auto [lo, hi] = std::minmax_element(
      terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.value < b.value; });
  return 1e-9 * std::max(1.0, hi->value - lo->value);
}

UFunction make_ufunction(std::span<const Term> pairs) {
  validate_terms(pairs);
  const double m = total_mass(pairs);
  if (std::abs(m - 1.0) > kConstructionMassTolerance) {
    std::ostringstream msg;
    msg << "probabilities sum to " << m << ", more than " << kConstructionMassTolerance
        << " away from 1";
    throw Error(ErrorCode::MassNotNormalized, msg.str());
  }
  std::vector<Term> terms;
  terms.reserve(pairs.size());
  for (const auto& t : pairs) {
    if (t.probability > 0.0) terms.push_back({t.value, t.probability / m});
  }
  sort_terms(terms);
  return UFunction(collect_sorted(terms, default_collection_tolerance(terms)));
}

UFunction collect_like_terms(const UFunction& u, double tol) {
  if (!(tol >= 0.0)) throw Error(ErrorCode::InvalidSpec, "collection tolerance must be >= 0");
  std::vector<Term> sorted(u.begin(), u.end());
  return UFunction(collect_sorted(sorted, tol));
}

UFunction compose(const UFunction& u1, const UFunction& u2, StructureFunction phi) {
  std::vector<Term> pairs;
  pairs.reserve(u1.size() * u2.size());
  for (const auto& a : u1) {
    for (const auto& b : u2) {
      pairs.push_back({phi(a.value, b.value), a.probability * b.probability});
    }
  }
  sort_terms(pairs);
  return UFunction(collect_sorted(pairs, default_collection_tolerance(pairs)));
}

UFunction compose_all(std::span<const UFunction> us, StructureFunction phi) {
  if (us.empty()) throw Error(ErrorCode::EmptyInput, "nothing to compose");
  UFunction acc = us.front();
  for (std::size_t i = 1; i < us.size(); ++i) acc = compose(acc, us[i], phi);
  return acc;
}

double psi_availability(const UFunction& u, double demand, bool strict) {
  CompensatedSum s;
  for (const auto& t : u) {
    if (strict ? t.value > demand : t.value >= demand) s += t.probability;
  }
  return std::min(s.value(), 1.0);
}

Shortfall shortfall(const UFunction& generation, const UFunction& load, bool strict) {
  CompensatedSum loss;
  CompensatedSum unserved;
  for (const auto& l : load) {
    // Generation is sorted, so qualifying terms form a prefix.
    for (const auto& g : generation) {
      const double deficit = l.value - g.value;
      if (strict ? !(deficit > 0.0) : !(deficit >= 0.0)) break;
      const double p = l.probability * g.probability;
      loss += p;
      unserved += p * deficit;
    }
  }
  // Rounding can push the pair sum a few ulps past one.
  return {std::min(loss.value(), 1.0), unserved.value()};
}

namespace {

std::int64_t grid_index(double value, double step) {
  const double q = std::nearbyint(value / step);
  if (!(std::abs(q) < 9.0e15)) {
    throw Error(ErrorCode::InvalidSpec, "value does not fit the quantization grid");
  }
  return static_cast<std::int64_t>(q);
}

void check_step(double step) {
  if (!(step > 0.0) || !std::isfinite(step)) {
    throw Error(ErrorCode::StepNotPositive, "grid step must be positive and finite");
  }
}

struct Grid {
  std::int64_t offset = 0;
  std::vector<double> mass;
};

Grid to_grid(const UFunction& u, double step) {
  const std::int64_t lo = grid_index(u.min_value(), step);
  const std::int64_t hi = grid_index(u.max_value(), step);
  if (hi - lo + 1 > kMaxGridCells) {
    throw Error(ErrorCode::InvalidSpec, "grid too fine for the value range");
  }
  Grid g{lo, std::vector<double>(static_cast<std::size_t>(hi - lo + 1), 0.0)};
  for (const auto& t : u) {
    g.mass[static_cast<std::size_t>(grid_index(t.value, step) - lo)] += t.probability;
  }
  return g;
}

}  // namespace

UFunction quantize(const UFunction& u, double step) {
  check_step(step);
  std::vector<Term> terms;
  terms.reserve(u.size());
  for (const auto& t : u) {
    const double v = static_cast<double>(grid_index(t.value, step)) * step;
    if (!terms.empty() && terms.back().value == v) {
      terms.back().probability += t.probability;
    } else {
      terms.push_back({v, t.probability});
    }
  }
  return UFunction(std::move(terms));
}

UFunction gridded_compose_plus(const UFunction& u1, const UFunction& u2, double step) {
  check_step(step);
  const Grid a = to_grid(u1, step);
  const Grid b = to_grid(u2, step);
  const std::size_t n = a.mass.size() + b.mass.size() - 1;
  if (static_cast<std::int64_t>(n) > kMaxGridCells) {
    throw Error(ErrorCode::InvalidSpec, "grid too fine for the value range");
  }
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < a.mass.size(); ++i) {
    const double pa = a.mass[i];
    if (pa == 0.0) continue;
    for (std::size_t j = 0; j < b.mass.size(); ++j) {
      out[i + j] += pa * b.mass[j];
    }
  }
  std::vector<Term> terms;
  for (std::size_t k = 0; k < n; ++k) {
    if (out[k] > 0.0) {
      terms.push_back({static_cast<double>(a.offset + b.offset + static_cast<std::int64_t>(k)) * step,
                       out[k]});
    }
  }
  return UFunction(std::move(terms));
}

}  // namespace ugf
