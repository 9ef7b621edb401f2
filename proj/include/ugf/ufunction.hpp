#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace ugf {

/// One term p * z^g of a u-function: performance level g reached with
/// probability p. Values may be negative (EV charging draws power).
struct Term {
  double value = 0.0;
  double probability = 0.0;

  friend bool operator==(const Term&, const Term&) = default;
};

/// Discrete probability mass function over real performance levels, kept as a
/// sparse list of terms sorted ascending by value.
///
/// The constructor validates and sorts but neither renormalizes nor merges
/// like terms; use make_ufunction() for the canonical form.
class UFunction {
 public:
  /// Mass must already be 1 within kMassTolerance.
  explicit UFunction(std::vector<Term> terms);

  /// 1.0 z^value
  static UFunction degenerate(double value);

  std::span<const Term> terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  const Term& operator[](std::size_t i) const { return terms_[i]; }
  auto begin() const noexcept { return terms_.begin(); }
  auto end() const noexcept { return terms_.end(); }

  double mass() const noexcept;
  double mean() const noexcept;
  double min_value() const noexcept { return terms_.front().value; }
  double max_value() const noexcept { return terms_.back().value; }

  friend bool operator==(const UFunction&, const UFunction&) = default;

  static constexpr double kMassTolerance = 1e-9;

 private:
  std::vector<Term> terms_;
};

/// Binary map over performance values used by the composition operator.
class StructureFunction {
 public:
  using Fn = double (*)(double, double);

  constexpr StructureFunction(std::string_view name, Fn fn) : name_(name), fn_(fn) {}

  double operator()(double a, double b) const { return fn_(a, b); }
  constexpr std::string_view name() const noexcept { return name_; }

 private:
  std::string_view name_;
  Fn fn_;
};

/// phi(a, b) = a + b: parallel capacities add.
inline constexpr StructureFunction kPlus{"plus", [](double a, double b) { return a + b; }};
/// phi(a, b) = a * b: source intensity scaled by the number of working units.
inline constexpr StructureFunction kTimes{"times", [](double a, double b) { return a * b; }};

/// Mass accepted by make_ufunction before renormalization.
inline constexpr double kConstructionMassTolerance = 1e-6;

/// Canonical constructor: validates, renormalizes mass to 1, sorts and
/// collects like terms at the default tolerance.
UFunction make_ufunction(std::span<const Term> pairs);

/// 1e-9 * max(1, max value - min value) over the given terms.
double default_collection_tolerance(std::span<const Term> terms);

/// Merges runs of terms whose values lie within tol of the first value of the
/// run. The merged value is the probability-weighted mean.
UFunction collect_like_terms(const UFunction& u, double tol);

/// u1 (x)_phi u2 over all term pairs, collected at the default tolerance.
UFunction compose(const UFunction& u1, const UFunction& u2, StructureFunction phi);

/// Left fold of compose over a non-empty list.
UFunction compose_all(std::span<const UFunction> us, StructureFunction phi);

/// Availability A(W): mass of terms with value >= demand, or > demand when
/// strict is set.
double psi_availability(const UFunction& u, double demand, bool strict);

struct Shortfall {
  double loss_probability = 0.0;
  double expected_unserved_kw = 0.0;
};

/// Loss-of-load probability and expected unserved power of generation against
/// load, both drawn independently. A pair counts as a loss when load - gen > 0
/// (strict) or >= 0 (non-strict).
Shortfall shortfall(const UFunction& generation, const UFunction& load, bool strict);

/// Moves every term's mass to the nearest multiple of step (ties to even).
UFunction quantize(const UFunction& u, double step);

/// PLUS composition on a uniform grid by dense array convolution. Inputs are
/// quantized to the grid first.
UFunction gridded_compose_plus(const UFunction& u1, const UFunction& u2, double step);

}  // namespace ugf
