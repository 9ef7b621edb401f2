#pragma once

#include <random>

#include "support.hpp"
#include "ugf/system.hpp"

namespace ugf::test {

inline TableSource random_table(std::mt19937_64& rng, std::size_t max_states, double max_kw) {
  const std::size_t n = pick(rng, 1, max_states);
  const auto p = random_simplex(rng, n);
  TableSource t;
  for (std::size_t i = 0; i < n; ++i) {
    t.rows.push_back({static_cast<double>(i + 1), p[i], uniform(rng, 0.0, max_kw)});
  }
  return t;
}

inline TwoStateRates random_rates(std::mt19937_64& rng) {
  return {uniform(rng, 0.001, 0.5), uniform(rng, 0.01, 1.0), pick(rng, 0, 1) ? RateUnit::PerHour : RateUnit::PerYear};
}

// Every component has at most four states; fleets have at most three units.
// Each component is present with probability 3/4.
inline SystemConfig random_small_config(std::mt19937_64& rng) {
  SystemConfig c;
  const auto present = [&] { return pick(rng, 0, 3) != 0; };
  if (present()) {
    SolarGeneratorSpec g;
    g.n_modules = pick(rng, 1, 3);
    g.source = random_table(rng, 4, 40.0);
    g.mech = random_rates(rng);
    g.mech_model = pick(rng, 0, 1) ? SolarMechanicalModel::PerModule : SolarMechanicalModel::PerGenerator;
    c.solar = SolarFleet{g, pick(rng, 1, 3)};
  }
  if (present()) {
    c.wind = WindFleet{{random_table(rng, 4, 60.0), random_rates(rng)}, pick(rng, 1, 3)};
  }
  if (present()) {
    EVAggregationSpec ev;
    ev.n_ev = pick(rng, 1, 3);
    ev.p_v = uniform(rng, 1.0, 20.0);
    ev.residence = {uniform(rng, 0, 8), uniform(rng, 0, 16), uniform(rng, 0.1, 8)};
    ev.mech = random_rates(rng);
    ev.mech_model = pick(rng, 0, 1) ? EvMechanicalModel::PerEv : EvMechanicalModel::Block;
    c.ev = ev;
  }
  if (present()) {
    TransformerSpec t;
    t.rated_kw = uniform(rng, 50.0, 300.0);
    if (pick(rng, 0, 1)) {
      t.mech = random_rates(rng);
    } else {
      const std::size_t n = pick(rng, 2, 4);
      std::vector<double> q(n * n, 0.0);
      std::vector<double> fractions(n);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) q[i * n + j] = i == j ? 0.0 : uniform(rng, 0.01, 2.0);
        fractions[i] = uniform(rng, 0.0, 1.0);
      }
      t.mech = MultiStateTransformer{MarkovGenerator(n, q), fractions};
    }
    c.transformer = t;
  }
  const std::size_t hours = pick(rng, 4, 60);
  const double lo = uniform(rng, 10.0, 150.0);
  const double hi = lo + uniform(rng, 1.0, 250.0);
  for (std::size_t h = 0; h < hours; ++h) c.load.hourly_kw.push_back(uniform(rng, lo, hi));
  c.load.n_states = pick(rng, 1, 4);
  c.horizon_hours = hours;
  c.strict_loss = pick(rng, 0, 1) != 0;
  if (pick(rng, 0, 4) == 0) c.build.round_decimals = 2;
  return c;
}

}  // namespace ugf::test
