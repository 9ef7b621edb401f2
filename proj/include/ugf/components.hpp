#pragma once

#include <cstddef>
#include <functional>
#include <istream>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "ugf/stochastic.hpp"
#include "ugf/ufunction.hpp"

namespace ugf {

/// Optional rounding of derived probabilities (Markov steady states, EV
/// occupancy fractions) to a fixed number of decimals. Used to replay
/// published case studies that were computed from rounded intermediates.
struct BuildOptions {
  std::optional<int> round_decimals;
};

double round_probability(double p, const BuildOptions& opts);

/// (p_work, p_fail) of a two-state unit, rounded per opts. Rounding keeps the
/// pair summing to one.
std::pair<double, double> unit_availability(const TwoStateRates& rates, const BuildOptions& opts);

// ---------------------------------------------------------------------------
// Physical power models

struct SolarPanelParams {
  double k_v = 0.0;    // V/degC
  double k_i = 0.0;    // A/degC
  double i_sc = 0.0;   // A
  double v_oc = 0.0;   // V
  double i_mpp = 0.0;  // A
  double v_mpp = 0.0;  // V
  double n_ot = 20.0;  // nominal operating temperature, degC
  double t_a = 25.0;   // ambient temperature, degC

  double fill_factor() const { return (v_mpp * i_mpp) / (v_oc * i_sc); }
};

void validate(const SolarPanelParams& panel);

/// Output of one module in kW at irradiance s (kW/m^2). Negative results
/// from extreme temperature coefficients are clamped to zero.
double pv_module_power(double irradiance, const SolarPanelParams& panel);

struct WindCurveParams {
  double v_ci = 0.0;  // cut-in, km/hr
  double v_r = 0.0;   // rated, km/hr
  double v_co = 0.0;  // cut-out, km/hr
  double rated_kw = 0.0;
};

void validate(const WindCurveParams& curve);

/// Piecewise-linear turbine curve: zero below cut-in, linear ramp to rated
/// speed, flat to cut-out, zero at and beyond cut-out.
double wind_power(double speed, const WindCurveParams& curve);

// ---------------------------------------------------------------------------
// Source u-functions

/// Per-state output keyed by state value.
struct PowerTable {
  std::vector<std::pair<double, double>> rows;  // (state value, kW)

  /// Matches state values to within 1e-9 relative.
  std::optional<double> lookup(double state_value) const;
};

using PowerFunction = std::function<double(double)>;
using PowerMap = std::variant<PowerFunction, PowerTable>;

UFunction source_ufunction(const DiscretizedDistribution& dist, const PowerMap& power_map);

/// Binomial u-function of n independent two-state units: k working units
/// reach k * per_unit_value with probability C(n,k) a^k (1-a)^(n-k).
UFunction mechanical_ufunction(std::size_t n_units, double per_unit_value, double availability);

/// One tabulated source state.
struct TableRow {
  double state_value = 0.0;
  double probability = 0.0;
  double power_kw = 0.0;
};

struct TableSource {
  std::vector<TableRow> rows;
};

struct ParametricSolarSource {
  BetaParams irradiance;
  std::size_t n_states = 5;
  double max_value = 1.0;
  SolarPanelParams panel;
};

struct ParametricWindSource {
  WeibullParams wind;
  std::size_t n_states = 5;
  std::optional<double> max_value;  // defaults to v_co plus one step
  WindCurveParams curve;
};

/// Resolved source: discrete states and the unit output in each.
struct SourceStates {
  DiscretizedDistribution dist;
  std::vector<double> power_kw;
};

SourceStates resolve_table(const TableSource& table);

// ---------------------------------------------------------------------------
// Solar generator

enum class SolarMechanicalModel {
  PerGenerator,  // all modules up or all down
  PerModule,     // independent modules, binomial count
};

struct SolarGeneratorSpec {
  std::size_t n_modules = 1;
  std::variant<TableSource, ParametricSolarSource> source;
  TwoStateRates mech;
  SolarMechanicalModel mech_model = SolarMechanicalModel::PerGenerator;
};

SourceStates solar_source_states(const SolarGeneratorSpec& spec);
UFunction solar_irradiance_ufunction(const SolarGeneratorSpec& spec);
/// Mechanical u-function of one generator: value = number of working modules.
UFunction solar_mechanical_ufunction(const SolarGeneratorSpec& spec, const BuildOptions& opts);

// ---------------------------------------------------------------------------
// Wind turbine

struct WindTurbineSpec {
  std::variant<TableSource, ParametricWindSource> source;
  TwoStateRates mech;
};

/// Upper truncation bound for a parametric wind source.
double wind_max_speed(const ParametricWindSource& source);

SourceStates wind_source_states(const WindTurbineSpec& spec);
UFunction wind_speed_ufunction(const WindTurbineSpec& spec);
/// 0/1 mechanical u-function of one turbine.
UFunction wind_mechanical_ufunction(const WindTurbineSpec& spec, const BuildOptions& opts);

// ---------------------------------------------------------------------------
// EV aggregation

struct ResidenceHours {
  double charging = 0.0;
  double disconnected = 0.0;
  double discharging = 0.0;
};

enum class EvMechanicalModel {
  Block,  // whole aggregation up (n_ev working) or down (0)
  PerEv,  // independent EVs, binomial count
};

struct EVAggregationSpec {
  std::size_t n_ev = 1;
  double p_v = 0.0;  // kW per EV
  ResidenceHours residence;
  TwoStateRates mech;
  EvMechanicalModel mech_model = EvMechanicalModel::Block;
};

void validate(const EVAggregationSpec& spec);

/// Occupancy fractions (charging, disconnected, discharging).
std::vector<double> ev_operation_probabilities(const EVAggregationSpec& spec, const BuildOptions& opts);
UFunction ev_operation_ufunction(const EVAggregationSpec& spec, const BuildOptions& opts = {});
UFunction ev_mechanical_ufunction(const EVAggregationSpec& spec, const BuildOptions& opts = {});
UFunction ev_aggregation_ufunction(const EVAggregationSpec& spec, const BuildOptions& opts = {});

// ---------------------------------------------------------------------------
// Transformer

struct MultiStateTransformer {
  MarkovGenerator chain;
  std::vector<double> capacity_fractions;  // one per chain state, in [0, 1]
};

struct TransformerSpec {
  double rated_kw = 0.0;
  std::variant<TwoStateRates, MultiStateTransformer> mech;
};

/// (capacity kW, probability) per mechanical state, before collection.
std::vector<Term> transformer_states(const TransformerSpec& spec, const BuildOptions& opts);
UFunction transformer_ufunction(const TransformerSpec& spec, const BuildOptions& opts = {});

// ---------------------------------------------------------------------------
// Load

struct LoadSpec {
  std::vector<double> hourly_kw;
  std::size_t n_states = 10;
};

/// Equal-width histogram of the series over [min, max]. The last interval is
/// closed on the right.
struct LoadHistogram {
  double min_kw = 0.0;
  double width_kw = 0.0;
  std::vector<double> midpoints;
  std::vector<std::size_t> counts;
};

LoadHistogram load_histogram(const LoadSpec& spec);
UFunction load_ufunction(const LoadSpec& spec);

/// One kW value per line. A non-numeric first line is taken as a header.
std::vector<double> read_load_csv(std::istream& in);

}  // namespace ugf
