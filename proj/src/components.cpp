#include "ugf/components.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>
#include <string>

#include "ugf/error.hpp"

namespace ugf {

double round_probability(double p, const BuildOptions& opts) {
  if (!opts.round_decimals) return p;
  const double scale = std::pow(10.0, *opts.round_decimals);
  return std::round(p * scale) / scale;
}

std::pair<double, double> unit_availability(const TwoStateRates& rates, const BuildOptions& opts) {
  auto [work, fail] = steady_state_two_state(rates);
  if (opts.round_decimals) {
    work = round_probability(work, opts);
    fail = 1.0 - work;
  }
  return {work, fail};
}

// ---------------------------------------------------------------------------

void validate(const SolarPanelParams& panel) {
  if (!(panel.i_sc > 0.0) || !(panel.v_oc > 0.0)) {
    throw Error(ErrorCode::InvalidSpec, "panel needs positive I_sc and V_oc");
  }
  const double ff = panel.fill_factor();
  if (!(ff > 0.0 && ff < 1.0)) throw Error(ErrorCode::InvalidSpec, "panel fill factor must lie in (0, 1)");
}

double pv_module_power(double irradiance, const SolarPanelParams& panel) {
  const double cell_temp = panel.t_a + irradiance * (panel.n_ot - 20.0) / 0.8;
  const double current = irradiance * (panel.i_sc + panel.k_i * (cell_temp - 25.0));
  const double voltage = panel.v_oc - panel.k_v * cell_temp;
  const double watts = panel.fill_factor() * voltage * current;
  return std::max(0.0, watts) / 1000.0;
}

void validate(const WindCurveParams& curve) {
  if (!(curve.v_ci >= 0.0 && curve.v_ci < curve.v_r && curve.v_r < curve.v_co)) {
    throw Error(ErrorCode::InvalidSpec, "wind curve needs 0 <= v_ci < v_r < v_co");
  }
  if (!(curve.rated_kw > 0.0) || !std::isfinite(curve.rated_kw)) {
    throw Error(ErrorCode::InvalidSpec, "wind curve rated power must be positive");
  }
}

double wind_power(double speed, const WindCurveParams& curve) {
  if (speed < curve.v_ci || speed >= curve.v_co) return 0.0;
  if (speed < curve.v_r) return curve.rated_kw * (speed - curve.v_ci) / (curve.v_r - curve.v_ci);
  return curve.rated_kw;
}

// ---------------------------------------------------------------------------

std::optional<double> PowerTable::lookup(double state_value) const {
  for (const auto& [value, kw] : rows) {
    if (std::abs(value - state_value) <= 1e-9 * std::max(1.0, std::abs(value))) return kw;
  }
  return std::nullopt;
}

UFunction source_ufunction(const DiscretizedDistribution& dist, const PowerMap& power_map) {
  if (dist.size() == 0) throw Error(ErrorCode::EmptyInput, "source distribution has no states");
  if (dist.state_values.size() != dist.state_probs.size()) {
    throw Error(ErrorCode::InvalidSpec, "source distribution values and probabilities differ in length");
  }
  std::vector<Term> terms;
  terms.reserve(dist.size());
  for (std::size_t i = 0; i < dist.size(); ++i) {
    const double s = dist.state_values[i];
    double kw = 0.0;
    if (const auto* table = std::get_if<PowerTable>(&power_map)) {
      const auto hit = table->lookup(s);
      if (!hit) {
        std::ostringstream msg;
        msg << "no power output for source state " << s;
        throw Error(ErrorCode::UnmappedState, msg.str());
      }
      kw = *hit;
    } else {
      kw = std::get<PowerFunction>(power_map)(s);
    }
    if (!std::isfinite(kw)) throw Error(ErrorCode::InvalidSpec, "power map returned a non-finite value");
    terms.push_back({kw, dist.state_probs[i]});
  }
  return make_ufunction(terms);
}

UFunction mechanical_ufunction(std::size_t n_units, double per_unit_value, double availability) {
  if (n_units == 0) throw Error(ErrorCode::InvalidSpec, "need at least one unit");
  if (!(availability >= 0.0 && availability <= 1.0)) {
    throw Error(ErrorCode::InvalidSpec, "availability must lie in [0, 1]");
  }
  if (!std::isfinite(per_unit_value)) throw Error(ErrorCode::InvalidSpec, "per-unit value must be finite");
  const double n = static_cast<double>(n_units);
  if (availability == 1.0) return UFunction::degenerate(n * per_unit_value);
  if (availability == 0.0) return UFunction::degenerate(0.0);

  const double log_a = std::log(availability);
  const double log_b = std::log1p(-availability);
  const double log_n_fact = std::lgamma(n + 1.0);
  std::vector<Term> terms;
  terms.reserve(n_units + 1);
  for (std::size_t k = 0; k <= n_units; ++k) {
    const double kk = static_cast<double>(k);
    const double log_p = log_n_fact - std::lgamma(kk + 1.0) - std::lgamma(n - kk + 1.0) + kk * log_a +
                         (n - kk) * log_b;
    terms.push_back({kk * per_unit_value, std::exp(log_p)});
  }
  return make_ufunction(terms);
}

SourceStates resolve_table(const TableSource& table) {
  std::vector<double> values;
  std::vector<double> probs;
  std::vector<double> power;
  for (const auto& row : table.rows) {
    if (!std::isfinite(row.power_kw)) throw Error(ErrorCode::InvalidSpec, "table power must be finite");
    values.push_back(row.state_value);
    probs.push_back(row.probability);
    power.push_back(row.power_kw);
  }
  return {DiscretizedDistribution::from_table(std::move(values), std::move(probs)), std::move(power)};
}

namespace {

UFunction states_ufunction(const SourceStates& states) {
  PowerTable table;
  for (std::size_t i = 0; i < states.dist.size(); ++i) {
    table.rows.emplace_back(states.dist.state_values[i], states.power_kw[i]);
  }
  return source_ufunction(states.dist, table);
}

}  // namespace

// ---------------------------------------------------------------------------

SourceStates solar_source_states(const SolarGeneratorSpec& spec) {
  if (const auto* table = std::get_if<TableSource>(&spec.source)) {
    auto states = resolve_table(*table);
    for (double kw : states.power_kw) {
      if (kw < 0.0) throw Error(ErrorCode::InvalidSpec, "solar table power must be >= 0");
    }
    return states;
  }
  const auto& p = std::get<ParametricSolarSource>(spec.source);
  validate(p.panel);
  SourceStates out{discretize(p.irradiance, p.n_states, p.max_value), {}};
  for (double s : out.dist.state_values) out.power_kw.push_back(pv_module_power(s, p.panel));
  return out;
}

UFunction solar_irradiance_ufunction(const SolarGeneratorSpec& spec) {
  if (const auto* p = std::get_if<ParametricSolarSource>(&spec.source)) {
    validate(p->panel);
    const SolarPanelParams panel = p->panel;
    return source_ufunction(discretize(p->irradiance, p->n_states, p->max_value),
                            PowerFunction([panel](double s) { return pv_module_power(s, panel); }));
  }
  return states_ufunction(solar_source_states(spec));
}

UFunction solar_mechanical_ufunction(const SolarGeneratorSpec& spec, const BuildOptions& opts) {
  if (spec.n_modules == 0) throw Error(ErrorCode::InvalidSpec, "solar generator needs at least one module");
  const double a = unit_availability(spec.mech, opts).first;
  if (spec.mech_model == SolarMechanicalModel::PerModule) {
    return mechanical_ufunction(spec.n_modules, 1.0, a);
  }
  return mechanical_ufunction(1, static_cast<double>(spec.n_modules), a);
}

// ---------------------------------------------------------------------------

double wind_max_speed(const ParametricWindSource& source) {
  if (source.max_value) return *source.max_value;
  if (source.n_states > 1) {
    const double n = static_cast<double>(source.n_states);
    return source.curve.v_co * n / (n - 1.0);
  }
  return 4.0 * source.wind.c;
}

SourceStates wind_source_states(const WindTurbineSpec& spec) {
  if (const auto* table = std::get_if<TableSource>(&spec.source)) {
    auto states = resolve_table(*table);
    for (double kw : states.power_kw) {
      if (kw < 0.0) throw Error(ErrorCode::InvalidSpec, "wind table power must be >= 0");
    }
    return states;
  }
  const auto& p = std::get<ParametricWindSource>(spec.source);
  validate(p.curve);
  SourceStates out{discretize(p.wind, p.n_states, wind_max_speed(p)), {}};
  for (double v : out.dist.state_values) out.power_kw.push_back(wind_power(v, p.curve));
  return out;
}

UFunction wind_speed_ufunction(const WindTurbineSpec& spec) {
  if (const auto* p = std::get_if<ParametricWindSource>(&spec.source)) {
    validate(p->curve);
    const WindCurveParams curve = p->curve;
    return source_ufunction(discretize(p->wind, p->n_states, wind_max_speed(*p)),
                            PowerFunction([curve](double v) { return wind_power(v, curve); }));
  }
  return states_ufunction(wind_source_states(spec));
}

UFunction wind_mechanical_ufunction(const WindTurbineSpec& spec, const BuildOptions& opts) {
  return mechanical_ufunction(1, 1.0, unit_availability(spec.mech, opts).first);
}

// ---------------------------------------------------------------------------

void validate(const EVAggregationSpec& spec) {
  if (spec.n_ev == 0) throw Error(ErrorCode::InvalidSpec, "EV aggregation needs at least one EV");
  if (!(spec.p_v > 0.0) || !std::isfinite(spec.p_v)) {
    throw Error(ErrorCode::InvalidSpec, "EV power must be positive");
  }
  const auto& h = spec.residence;
  for (double t : {h.charging, h.disconnected, h.discharging}) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw Error(ErrorCode::InvalidSpec, "residence hours must be >= 0");
  }
  if (h.charging + h.disconnected + h.discharging == 0.0) {
    throw Error(ErrorCode::AllResidenceZero, "EV residence hours are all zero");
  }
}

std::vector<double> ev_operation_probabilities(const EVAggregationSpec& spec, const BuildOptions& opts) {
  validate(spec);
  const auto& h = spec.residence;
  const double total = h.charging + h.disconnected + h.discharging;
  std::vector<double> p{round_probability(h.charging / total, opts),
                        round_probability(h.disconnected / total, opts),
                        round_probability(h.discharging / total, opts)};
  if (opts.round_decimals) {
    const double s = p[0] + p[1] + p[2];
    for (auto& x : p) x /= s;
  }
  return p;
}

UFunction ev_operation_ufunction(const EVAggregationSpec& spec, const BuildOptions& opts) {
  const auto p = ev_operation_probabilities(spec, opts);
  const std::vector<Term> terms{{-spec.p_v, p[0]}, {0.0, p[1]}, {spec.p_v, p[2]}};
  return make_ufunction(terms);
}

UFunction ev_mechanical_ufunction(const EVAggregationSpec& spec, const BuildOptions& opts) {
  validate(spec);
  const double a = unit_availability(spec.mech, opts).first;
  if (spec.mech_model == EvMechanicalModel::PerEv) return mechanical_ufunction(spec.n_ev, 1.0, a);
  return mechanical_ufunction(1, static_cast<double>(spec.n_ev), a);
}

UFunction ev_aggregation_ufunction(const EVAggregationSpec& spec, const BuildOptions& opts) {
  return compose(ev_operation_ufunction(spec, opts), ev_mechanical_ufunction(spec, opts), kTimes);
}

// ---------------------------------------------------------------------------

std::vector<Term> transformer_states(const TransformerSpec& spec, const BuildOptions& opts) {
  if (!(spec.rated_kw > 0.0) || !std::isfinite(spec.rated_kw)) {
    throw Error(ErrorCode::InvalidSpec, "transformer rating must be positive");
  }
  if (const auto* rates = std::get_if<TwoStateRates>(&spec.mech)) {
    const auto [work, fail] = unit_availability(*rates, opts);
    return {{0.0, fail}, {spec.rated_kw, work}};
  }
  const auto& multi = std::get<MultiStateTransformer>(spec.mech);
  if (multi.capacity_fractions.size() != multi.chain.n_states()) {
    throw Error(ErrorCode::InvalidSpec, "one capacity fraction per transformer state is required");
  }
  for (double f : multi.capacity_fractions) {
    if (!(f >= 0.0 && f <= 1.0)) throw Error(ErrorCode::InvalidSpec, "capacity fractions must lie in [0, 1]");
  }
  auto pi = steady_state_general(multi.chain);
  if (opts.round_decimals) {
    double s = 0.0;
    for (auto& p : pi) s += (p = round_probability(p, opts));
    for (auto& p : pi) p /= s;
  }
  std::vector<Term> out;
  for (std::size_t i = 0; i < pi.size(); ++i) {
    out.push_back({multi.capacity_fractions[i] * spec.rated_kw, pi[i]});
  }
  return out;
}

UFunction transformer_ufunction(const TransformerSpec& spec, const BuildOptions& opts) {
  return make_ufunction(transformer_states(spec, opts));
}

// ---------------------------------------------------------------------------

LoadHistogram load_histogram(const LoadSpec& spec) {
  if (spec.hourly_kw.empty()) throw Error(ErrorCode::EmptyInput, "load series is empty");
  if (spec.n_states == 0) throw Error(ErrorCode::InvalidSpec, "load model needs at least one state");
  if (spec.hourly_kw.size() < spec.n_states) {
    throw Error(ErrorCode::DegenerateSeries, "load series is shorter than the number of load states");
  }
  for (double x : spec.hourly_kw) {
    if (!(x >= 0.0) || !std::isfinite(x)) throw Error(ErrorCode::InvalidSpec, "load values must be finite and >= 0");
  }
  const auto [lo_it, hi_it] = std::minmax_element(spec.hourly_kw.begin(), spec.hourly_kw.end());
  const double lo = *lo_it;
  const double hi = *hi_it;

  LoadHistogram h;
  h.min_kw = lo;
  if (hi == lo) {
    h.width_kw = 0.0;
    h.midpoints = {lo};
    h.counts = {spec.hourly_kw.size()};
    return h;
  }
  const std::size_t n = spec.n_states;
  h.width_kw = (hi - lo) / static_cast<double>(n);
  h.counts.assign(n, 0);
  for (double x : spec.hourly_kw) {
    const double pos = std::floor((x - lo) / h.width_kw);
    const auto k = static_cast<std::size_t>(std::clamp(pos, 0.0, static_cast<double>(n - 1)));
    ++h.counts[k];
  }
  for (std::size_t k = 0; k < n; ++k) {
    const double lower = lo + static_cast<double>(k) * h.width_kw;
    const double upper = k + 1 == n ? hi : lo + static_cast<double>(k + 1) * h.width_kw;
    h.midpoints.push_back((lower + upper) / 2.0);
  }
  return h;
}

UFunction load_ufunction(const LoadSpec& spec) {
  const LoadHistogram h = load_histogram(spec);
  const double total = static_cast<double>(spec.hourly_kw.size());
  std::vector<Term> terms;
  for (std::size_t k = 0; k < h.counts.size(); ++k) {
    if (h.counts[k] > 0) terms.push_back({h.midpoints[k], static_cast<double>(h.counts[k]) / total});
  }
  return make_ufunction(terms);
}

std::vector<double> read_load_csv(std::istream& in) {
  std::vector<double> out;
  std::string line;
  std::size_t line_no = 0;
  bool seen_content = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t");
    const char* begin = line.data() + first;
    const char* end = line.data() + last + 1;
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end) {
      if (!seen_content) {
        seen_content = true;  // header
        continue;
      }
      std::ostringstream msg;
      msg << "load CSV line " << line_no << " is not a number";
      throw Error(ErrorCode::InvalidConfig, msg.str());
    }
    seen_content = true;
    out.push_back(value);
  }
  if (out.empty()) throw Error(ErrorCode::EmptyInput, "load CSV has no values");
  return out;
}

}  // namespace ugf
