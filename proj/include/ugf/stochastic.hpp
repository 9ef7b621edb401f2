#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <variant>
#include <vector>

namespace ugf {

/// Beta(alpha, beta) density on [0, 1] (normalized irradiance).
struct BetaParams {
  double alpha = 1.0;
  double beta = 1.0;
};

/// Weibull(k, c) density of wind speed; k = 2 is the Rayleigh case.
struct WeibullParams {
  double k = 2.0;
  double c = 1.0;
};

using SourceDensity = std::variant<BetaParams, WeibullParams>;

/// Equal-width discretization of a continuous source. State i covers
/// [(i-1) step, i step] and is represented by its midpoint.
struct DiscretizedDistribution {
  std::vector<double> state_values;
  std::vector<double> state_probs;
  double step = 0.0;  // 0 for tables that are not equally spaced
  double max_value = 0.0;

  std::size_t size() const noexcept { return state_values.size(); }

  /// Tabulated states. Mass within kTableMassTolerance of 1 is renormalized.
  static DiscretizedDistribution from_table(std::vector<double> values, std::vector<double> probs);

  static constexpr double kTableMassTolerance = 1e-2;
};

enum class RateUnit { PerHour, PerYear };

inline constexpr double kHoursPerYear = 8760.0;

struct TwoStateRates {
  double failure_rate = 0.0;
  double repair_rate = 0.0;
  RateUnit unit = RateUnit::PerHour;

  /// Both rates expressed per hour.
  TwoStateRates per_hour() const;
};

/// Continuous-time Markov chain generator. Off-diagonal entries are rates,
/// each row sums to zero.
class MarkovGenerator {
 public:
  /// Takes a full n x n row-major matrix; the diagonal is recomputed from the
  /// off-diagonal rates.
  MarkovGenerator(std::size_t n_states, std::vector<double> rates, RateUnit unit = RateUnit::PerHour);

  static MarkovGenerator two_state(const TwoStateRates& rates);

  std::size_t n_states() const noexcept { return n_; }
  double rate(std::size_t from, std::size_t to) const { return q_[from * n_ + to]; }
  RateUnit unit() const noexcept { return unit_; }
  std::span<const double> matrix() const noexcept { return q_; }

 private:
  std::size_t n_;
  std::vector<double> q_;
  RateUnit unit_;
};

/// Method of moments: Beta(alpha, beta) with the given mean and variance.
BetaParams fit_beta_moments(double mean, double variance);

/// Probability captured by each of n_states equal intervals of [0, max_value],
/// renormalized by the total captured mass.
DiscretizedDistribution discretize(const SourceDensity& density, std::size_t n_states, double max_value);

double source_cdf(const SourceDensity& density, double x);

/// Steady state of a two-state repairable unit as (p_work, p_fail).
std::pair<double, double> steady_state_two_state(const TwoStateRates& rates);

/// Stationary distribution pi with pi Q = 0 and sum(pi) = 1.
std::vector<double> steady_state_general(const MarkovGenerator& generator);

}  // namespace ugf
