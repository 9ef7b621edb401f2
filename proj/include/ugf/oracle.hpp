#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "ugf/system.hpp"

namespace ugf {

/// One point of the joint sample space: a state index per random element.
/// Each source state is drawn once and shared by all generators of the fleet.
struct JointState {
  std::size_t irradiance = 0;
  std::vector<std::size_t> solar_mech;  // one per solar generator
  std::size_t wind_speed = 0;
  std::vector<std::size_t> wind_mech;  // one per turbine
  std::size_t ev_operation = 0;
  std::size_t ev_mech = 0;
  std::size_t transformer = 0;
  std::size_t load = 0;
};

/// Discrete joint space derived directly from the component specs, without
/// any u-function algebra.
class JointSpace {
 public:
  explicit JointSpace(const SystemConfig& config);

  /// Number of joint states; saturates at UINT64_MAX.
  std::uint64_t size() const noexcept { return size_; }

  double probability(const JointState& s) const;
  double generation_kw(const JointState& s) const;
  double load_kw(const JointState& s) const { return load_[s.load].value; }

  /// Advances s to the next state in odometer order; false after the last.
  bool next(JointState& s) const;
  JointState first() const;

  JointState sample(std::mt19937_64& rng) const;

  struct Level {
    double value = 0.0;
    double probability = 0.0;
  };

 private:
  std::vector<Level> irradiance_;  // per-module kW
  std::vector<Level> solar_mech_;  // working modules per generator
  std::size_t solar_count_ = 0;
  std::vector<Level> wind_speed_;  // per-turbine kW
  std::vector<Level> wind_mech_;   // 0 or 1
  std::size_t wind_count_ = 0;
  std::vector<Level> ev_operation_;
  std::vector<Level> ev_mech_;  // working EVs
  std::vector<Level> transformer_;
  std::vector<Level> load_;
  std::uint64_t size_ = 0;
};

inline constexpr std::uint64_t kDefaultJointStateCap = 100'000'000;

struct OracleResult {
  double loss_probability = 0.0;
  double expected_unserved_kw = 0.0;
  double total_probability = 0.0;
  std::uint64_t joint_states = 0;
};

/// Brute-force loss probability and expected unserved power over every joint
/// state, with compensated summation.
OracleResult enumerate_exact(const SystemConfig& config, std::uint64_t cap = kDefaultJointStateCap);

struct MonteCarloResult {
  double loss_probability = 0.0;
  double expected_unserved_kw = 0.0;
  double loss_half_width = 0.0;  // 95% normal-approximation CI
  double unserved_half_width = 0.0;
  std::size_t n_samples = 0;
};

/// Independent sampling of joint states with a seeded mt19937_64. Results are
/// bit-reproducible for a fixed seed.
MonteCarloResult monte_carlo(const SystemConfig& config, std::size_t n_samples, std::uint64_t seed);

}  // namespace ugf
