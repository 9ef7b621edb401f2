#include "ugf/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ugf/error.hpp"
#include "ugf/summation.hpp"

namespace ugf {
namespace {

using Level = JointSpace::Level;

std::vector<Level> binomial_levels(std::size_t n, double a) {
  std::vector<Level> out;
  const long double nn = static_cast<long double>(n);
  for (std::size_t k = 0; k <= n; ++k) {
    const long double kk = static_cast<long double>(k);
    long double p = 0.0L;
    if (a == 1.0) {
      p = k == n ? 1.0L : 0.0L;
    } else if (a == 0.0) {
      p = k == 0 ? 1.0L : 0.0L;
    } else {
      p = std::exp(std::lgamma(nn + 1.0L) - std::lgamma(kk + 1.0L) - std::lgamma(nn - kk + 1.0L) +
                   kk * std::log(static_cast<long double>(a)) +
                   (nn - kk) * std::log1p(-static_cast<long double>(a)));
    }
    out.push_back({static_cast<double>(k), static_cast<double>(p)});
  }
  return out;
}

std::vector<Level> two_levels(double up_value, double p_work, double p_fail) {
  return {{0.0, p_fail}, {up_value, p_work}};
}

std::vector<Level> source_levels(const SourceStates& states) {
  std::vector<Level> out;
  for (std::size_t i = 0; i < states.dist.size(); ++i) {
    out.push_back({states.power_kw[i], states.dist.state_probs[i]});
  }
  return out;
}

std::vector<Level> load_levels(const LoadSpec& spec) {
  if (spec.hourly_kw.empty()) throw Error(ErrorCode::EmptyInput, "load series is empty");
  if (spec.n_states == 0 || spec.hourly_kw.size() < spec.n_states) {
    throw Error(ErrorCode::DegenerateSeries, "load series shorter than the number of states");
  }
  const double lo = *std::min_element(spec.hourly_kw.begin(), spec.hourly_kw.end());
  const double hi = *std::max_element(spec.hourly_kw.begin(), spec.hourly_kw.end());
  const double total = static_cast<double>(spec.hourly_kw.size());
  if (lo == hi) return {{lo, 1.0}};
  const std::size_t n = spec.n_states;
  const double width = (hi - lo) / static_cast<double>(n);
  std::vector<std::size_t> counts(n, 0);
  for (double x : spec.hourly_kw) {
    auto k = static_cast<std::size_t>(std::max(0.0, std::floor((x - lo) / width)));
    ++counts[std::min(k, n - 1)];
  }
  std::vector<Level> out;
  for (std::size_t k = 0; k < n; ++k) {
    if (counts[k] > 0) {
      out.push_back({lo + (static_cast<double>(k) + 0.5) * width, static_cast<double>(counts[k]) / total});
    }
  }
  return out;
}

// Zero-probability levels add joint states without adding mass.
void prune(std::vector<Level>& levels) {
  std::erase_if(levels, [](const Level& l) { return l.probability == 0.0; });
}

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) {
    return std::numeric_limits<std::uint64_t>::max();
  }
  return a * b;
}

std::uint64_t saturating_pow(std::uint64_t base, std::size_t exp) {
  std::uint64_t r = 1;
  for (std::size_t i = 0; i < exp; ++i) r = saturating_mul(r, base);
  return r;
}

// Odometer increment of one digit; true when it wrapped to zero.
bool bump(std::size_t& digit, std::size_t radix) {
  if (++digit < radix) return false;
  digit = 0;
  return true;
}

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::size_t draw(const std::vector<Level>& levels, std::mt19937_64& rng) {
  const double u = uniform01(rng);
  double cum = 0.0;
  for (std::size_t i = 0; i + 1 < levels.size(); ++i) {
    cum += levels[i].probability;
    if (u < cum) return i;
  }
  return levels.size() - 1;
}

}  // namespace

JointSpace::JointSpace(const SystemConfig& config) {
  validate(config);
  const BuildOptions& opts = config.build;
  irradiance_ = {{0.0, 1.0}};
  solar_mech_ = {{0.0, 1.0}};
  wind_speed_ = {{0.0, 1.0}};
  wind_mech_ = {{0.0, 1.0}};
  ev_operation_ = {{0.0, 1.0}};
  ev_mech_ = {{0.0, 1.0}};
  transformer_ = {{0.0, 1.0}};

  if (config.solar && config.solar->count > 0) {
    const auto& g = config.solar->generator;
    if (g.n_modules == 0) throw Error(ErrorCode::InvalidSpec, "solar generator needs at least one module", "solar");
    irradiance_ = source_levels(solar_source_states(g));
    const auto [work, fail] = unit_availability(g.mech, opts);
    solar_mech_ = g.mech_model == SolarMechanicalModel::PerModule
                      ? binomial_levels(g.n_modules, work)
                      : two_levels(static_cast<double>(g.n_modules), work, fail);
    solar_count_ = config.solar->count;
  }
  if (config.wind && config.wind->count > 0) {
    const auto& t = config.wind->turbine;
    wind_speed_ = source_levels(wind_source_states(t));
    const auto [work, fail] = unit_availability(t.mech, opts);
    wind_mech_ = two_levels(1.0, work, fail);
    wind_count_ = config.wind->count;
  }
  if (config.ev) {
    const auto& ev = *config.ev;
    const auto p = ev_operation_probabilities(ev, opts);
    ev_operation_ = {{-ev.p_v, p[0]}, {0.0, p[1]}, {ev.p_v, p[2]}};
    const auto [work, fail] = unit_availability(ev.mech, opts);
    ev_mech_ = ev.mech_model == EvMechanicalModel::PerEv ? binomial_levels(ev.n_ev, work)
                                                         : two_levels(static_cast<double>(ev.n_ev), work, fail);
  }
  if (config.transformer) {
    transformer_.clear();
    for (const auto& t : transformer_states(*config.transformer, opts)) {
      transformer_.push_back({t.value, t.probability});
    }
  }
  load_ = load_levels(config.load);
  for (auto* levels : {&irradiance_, &solar_mech_, &wind_speed_, &wind_mech_, &ev_operation_, &ev_mech_,
                       &transformer_, &load_}) {
    prune(*levels);
  }

  std::uint64_t n = 1;
  n = saturating_mul(n, irradiance_.size());
  n = saturating_mul(n, saturating_pow(solar_mech_.size(), solar_count_));
  n = saturating_mul(n, wind_speed_.size());
  n = saturating_mul(n, saturating_pow(wind_mech_.size(), wind_count_));
  n = saturating_mul(n, ev_operation_.size());
  n = saturating_mul(n, ev_mech_.size());
  n = saturating_mul(n, transformer_.size());
  n = saturating_mul(n, load_.size());
  size_ = n;
}

JointState JointSpace::first() const {
  JointState s;
  s.solar_mech.assign(solar_count_, 0);
  s.wind_mech.assign(wind_count_, 0);
  return s;
}

bool JointSpace::next(JointState& s) const {
  if (!bump(s.load, load_.size())) return true;
  if (!bump(s.transformer, transformer_.size())) return true;
  if (!bump(s.ev_mech, ev_mech_.size())) return true;
  if (!bump(s.ev_operation, ev_operation_.size())) return true;
  for (auto& m : s.wind_mech) {
    if (!bump(m, wind_mech_.size())) return true;
  }
  if (!bump(s.wind_speed, wind_speed_.size())) return true;
  for (auto& m : s.solar_mech) {
    if (!bump(m, solar_mech_.size())) return true;
  }
  return !bump(s.irradiance, irradiance_.size());
}

double JointSpace::probability(const JointState& s) const {
  double p = irradiance_[s.irradiance].probability;
  for (auto m : s.solar_mech) p *= solar_mech_[m].probability;
  p *= wind_speed_[s.wind_speed].probability;
  for (auto m : s.wind_mech) p *= wind_mech_[m].probability;
  p *= ev_operation_[s.ev_operation].probability;
  p *= ev_mech_[s.ev_mech].probability;
  p *= transformer_[s.transformer].probability;
  p *= load_[s.load].probability;
  return p;
}

double JointSpace::generation_kw(const JointState& s) const {
  double modules = 0.0;
  for (auto m : s.solar_mech) modules += solar_mech_[m].value;
  double turbines = 0.0;
  for (auto m : s.wind_mech) turbines += wind_mech_[m].value;
  const double solar = irradiance_[s.irradiance].value * modules;
  const double wind = wind_speed_[s.wind_speed].value * turbines;
  const double ev = ev_operation_[s.ev_operation].value * ev_mech_[s.ev_mech].value;
  return solar + wind + ev + transformer_[s.transformer].value;
}

JointState JointSpace::sample(std::mt19937_64& rng) const {
  JointState s = first();
  s.irradiance = draw(irradiance_, rng);
  for (auto& m : s.solar_mech) m = draw(solar_mech_, rng);
  s.wind_speed = draw(wind_speed_, rng);
  for (auto& m : s.wind_mech) m = draw(wind_mech_, rng);
  s.ev_operation = draw(ev_operation_, rng);
  s.ev_mech = draw(ev_mech_, rng);
  s.transformer = draw(transformer_, rng);
  s.load = draw(load_, rng);
  return s;
}

OracleResult enumerate_exact(const SystemConfig& config, std::uint64_t cap) {
  const JointSpace space(config);
  if (space.size() > cap) {
    throw Error(ErrorCode::SpaceTooLarge, "joint state space exceeds the enumeration cap");
  }
  CompensatedSum loss;
  CompensatedSum unserved;
  CompensatedSum total;
  const bool strict = config.strict_loss;
  JointState s = space.first();
  do {
    const double p = space.probability(s);
    total += p;
    const double deficit = space.load_kw(s) - space.generation_kw(s);
    if (strict ? deficit > 0.0 : deficit >= 0.0) {
      loss += p;
      unserved += p * deficit;
    }
  } while (space.next(s));
  return {loss.value(), unserved.value(), total.value(), space.size()};
}

MonteCarloResult monte_carlo(const SystemConfig& config, std::size_t n_samples, std::uint64_t seed) {
  if (n_samples == 0) throw Error(ErrorCode::InvalidSpec, "need at least one sample");
  const JointSpace space(config);
  std::mt19937_64 rng(seed);
  const bool strict = config.strict_loss;

  std::size_t hits = 0;
  // Welford running mean and variance of the per-sample deficit.
  double mean = 0.0;
  double m2 = 0.0;
  for (std::size_t i = 0; i < n_samples; ++i) {
    const JointState s = space.sample(rng);
    const double deficit = space.load_kw(s) - space.generation_kw(s);
    const bool lost = strict ? deficit > 0.0 : deficit >= 0.0;
    const double x = lost ? deficit : 0.0;
    hits += lost ? 1 : 0;
    const double delta = x - mean;
    mean += delta / static_cast<double>(i + 1);
    m2 += delta * (x - mean);
  }
  const double n = static_cast<double>(n_samples);
  MonteCarloResult r;
  r.n_samples = n_samples;
  r.loss_probability = static_cast<double>(hits) / n;
  r.expected_unserved_kw = mean;
  constexpr double z95 = 1.959963984540054;
  r.loss_half_width = z95 * std::sqrt(r.loss_probability * (1.0 - r.loss_probability) / n);
  r.unserved_half_width = n_samples > 1 ? z95 * std::sqrt(m2 / (n - 1.0) / n) : 0.0;
  return r;
}

}  // namespace ugf
