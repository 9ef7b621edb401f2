#include "ugf/stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Dense>
#include <boost/math/special_functions/beta.hpp>

#include "ugf/error.hpp"
#include "ugf/summation.hpp"

namespace ugf {

DiscretizedDistribution DiscretizedDistribution::from_table(std::vector<double> values,
                                                            std::vector<double> probs) {
  if (values.empty()) throw Error(ErrorCode::EmptyInput, "source table is empty");
  if (values.size() != probs.size()) {
    throw Error(ErrorCode::InvalidSpec, "source table values and probabilities differ in length");
  }
  CompensatedSum mass;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) throw Error(ErrorCode::InvalidSpec, "source table value is not finite");
    if (!std::isfinite(probs[i]) || probs[i] < 0.0) {
      throw Error(ErrorCode::NegativeProbability, "source table probability is negative");
    }
    mass += probs[i];
  }
  const double m = mass.value();
  if (std::abs(m - 1.0) > kTableMassTolerance) {
    std::ostringstream msg;
    msg << "source table probabilities sum to " << m;
    throw Error(ErrorCode::MassNotNormalized, msg.str());
  }
  for (auto& p : probs) p /= m;

  // Recognize the midpoint layout produced by discretize().
  double step = 0.0;
  const double candidate = 2.0 * values.front();
  if (candidate > 0.0) {
    bool uniform = true;
    for (std::size_t i = 0; i < values.size() && uniform; ++i) {
      const double expected = (static_cast<double>(i) + 0.5) * candidate;
      uniform = std::abs(values[i] - expected) <= 1e-9 * std::max(1.0, expected);
    }
    if (uniform) step = candidate;
  }
  const double max_value = step > 0.0 ? step * static_cast<double>(values.size()) : values.back();
  return {std::move(values), std::move(probs), step, max_value};
}

TwoStateRates TwoStateRates::per_hour() const {
  if (unit == RateUnit::PerHour) return *this;
  return {failure_rate / kHoursPerYear, repair_rate / kHoursPerYear, RateUnit::PerHour};
}

MarkovGenerator::MarkovGenerator(std::size_t n_states, std::vector<double> rates, RateUnit unit)
    : n_(n_states), q_(std::move(rates)), unit_(unit) {
  if (n_ == 0) throw Error(ErrorCode::InvalidSpec, "Markov chain needs at least one state");
  if (q_.size() != n_ * n_) throw Error(ErrorCode::InvalidSpec, "rate matrix must be n x n");
  for (std::size_t i = 0; i < n_; ++i) {
    double out = 0.0;
    for (std::size_t j = 0; j < n_; ++j) {
      if (i == j) continue;
      const double r = q_[i * n_ + j];
      if (!std::isfinite(r) || r < 0.0) {
        throw Error(ErrorCode::InvalidSpec, "transition rates must be finite and >= 0");
      }
      out += r;
    }
    q_[i * n_ + i] = -out;
  }
}

MarkovGenerator MarkovGenerator::two_state(const TwoStateRates& rates) {
  // State 0 = working, state 1 = failed.
  return MarkovGenerator(2, {0.0, rates.failure_rate, rates.repair_rate, 0.0}, rates.unit);
}

BetaParams fit_beta_moments(double mean, double variance) {
  if (!(mean > 0.0 && mean < 1.0)) {
    throw Error(ErrorCode::MeanOutOfRange, "Beta mean must lie in (0, 1)");
  }
  const double spread = mean * (1.0 - mean);
  if (!(variance > 0.0)) throw Error(ErrorCode::VarianceTooLarge, "Beta variance must be > 0");
  if (variance >= spread) {
    throw Error(ErrorCode::VarianceTooLarge, "Beta variance must be below mean * (1 - mean)");
  }
  const double common = spread / variance - 1.0;
  return {mean * common, (1.0 - mean) * common};
}

namespace {

void validate_density(const SourceDensity& density) {
  std::visit(
      [](const auto& d) {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, BetaParams>) {
          if (!(d.alpha > 0.0 && d.beta > 0.0) || !std::isfinite(d.alpha) || !std::isfinite(d.beta)) {
            throw Error(ErrorCode::InvalidDensityParams, "Beta shapes must be positive and finite");
          }
        } else {
          if (!(d.k > 0.0 && d.c > 0.0) || !std::isfinite(d.k) || !std::isfinite(d.c)) {
            throw Error(ErrorCode::InvalidDensityParams, "Weibull k and c must be positive and finite");
          }
        }
      },
      density);
}

}  // namespace

double source_cdf(const SourceDensity& density, double x) {
  validate_density(density);
  if (x <= 0.0) return 0.0;
  return std::visit(
      [x](const auto& d) -> double {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, BetaParams>) {
          if (x >= 1.0) return 1.0;
          return boost::math::ibeta(d.alpha, d.beta, x);
        } else {
          return -std::expm1(-std::pow(x / d.c, d.k));
        }
      },
      density);
}

DiscretizedDistribution discretize(const SourceDensity& density, std::size_t n_states, double max_value) {
  validate_density(density);
  if (n_states == 0) throw Error(ErrorCode::InvalidSpec, "need at least one state");
  if (!(max_value > 0.0) || !std::isfinite(max_value)) {
    throw Error(ErrorCode::InvalidSpec, "max value must be positive");
  }
  const double step = max_value / static_cast<double>(n_states);
  DiscretizedDistribution out;
  out.step = step;
  out.max_value = max_value;
  out.state_values.reserve(n_states);
  out.state_probs.reserve(n_states);

  double lower_cdf = 0.0;
  for (std::size_t i = 1; i <= n_states; ++i) {
    const double lo = static_cast<double>(i - 1) * step;
    const double hi = i == n_states ? max_value : static_cast<double>(i) * step;
    const double upper_cdf = source_cdf(density, hi);
    out.state_values.push_back((hi + lo) / 2.0);
    out.state_probs.push_back(std::max(0.0, upper_cdf - lower_cdf));
    lower_cdf = upper_cdf;
  }
  CompensatedSum captured;
  for (double p : out.state_probs) captured += p;
  const double mass = captured.value();
  if (!(mass > 0.0)) {
    throw Error(ErrorCode::InvalidDensityParams, "density puts no mass on [0, max]");
  }
  for (auto& p : out.state_probs) p /= mass;
  return out;
}

std::pair<double, double> steady_state_two_state(const TwoStateRates& rates) {
  const TwoStateRates r = rates.per_hour();
  if (!(r.failure_rate >= 0.0) || !(r.repair_rate >= 0.0) || !std::isfinite(r.failure_rate) ||
      !std::isfinite(r.repair_rate)) {
    throw Error(ErrorCode::InvalidSpec, "rates must be finite and >= 0");
  }
  const double total = r.failure_rate + r.repair_rate;
  if (total == 0.0) throw Error(ErrorCode::BothRatesZero, "failure and repair rates are both zero");
  // Compute the smaller probability directly so the complement is exact.
  if (r.failure_rate <= r.repair_rate) {
    const double p_fail = r.failure_rate / total;
    return {1.0 - p_fail, p_fail};
  }
  const double p_work = r.repair_rate / total;
  return {p_work, 1.0 - p_work};
}

namespace {

bool strongly_connected(const MarkovGenerator& g) {
  const std::size_t n = g.n_states();
  auto reach_all = [&](bool forward) {
    std::vector<bool> seen(n, false);
    std::vector<std::size_t> stack{0};
    seen[0] = true;
    while (!stack.empty()) {
      const std::size_t i = stack.back();
      stack.pop_back();
      for (std::size_t j = 0; j < n; ++j) {
        const double r = forward ? g.rate(i, j) : g.rate(j, i);
        if (i != j && r > 0.0 && !seen[j]) {
          seen[j] = true;
          stack.push_back(j);
        }
      }
    }
    return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
  };
  return reach_all(true) && reach_all(false);
}

}  // namespace

std::vector<double> steady_state_general(const MarkovGenerator& generator) {
  const std::size_t n = generator.n_states();
  if (n == 1) return {1.0};
  if (!strongly_connected(generator)) {
    throw Error(ErrorCode::SingularOrReducible, "Markov chain is reducible");
  }
  double scale = 0.0;
  for (double q : generator.matrix()) scale = std::max(scale, std::abs(q));

  const auto size = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd a(size, size);
  for (Eigen::Index i = 0; i < size; ++i) {
    for (Eigen::Index j = 0; j < size; ++j) {
      a(i, j) = generator.rate(static_cast<std::size_t>(j), static_cast<std::size_t>(i)) / scale;
    }
  }
  a.row(size - 1).setOnes();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(size);
  b(size - 1) = 1.0;

  Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
  if (!lu.isInvertible()) throw Error(ErrorCode::SingularOrReducible, "balance equations are singular");
  const Eigen::VectorXd pi = lu.solve(b);

  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double p = pi(static_cast<Eigen::Index>(i));
    if (p < -1e-12) throw Error(ErrorCode::SingularOrReducible, "negative stationary probability");
    out[i] = std::clamp(p, 0.0, 1.0);
  }
  double residual = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += out[i] * generator.rate(i, j) / scale;
    residual = std::max(residual, std::abs(s));
  }
  if (residual > 1e-10) throw Error(ErrorCode::SingularOrReducible, "stationary solve did not converge");
  return out;
}

}  // namespace ugf
