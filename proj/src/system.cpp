#include "ugf/system.hpp"

#include <array>
#include <string>
#include <vector>

#include "ugf/error.hpp"

namespace ugf {

void validate(const SystemConfig& config) {
  if (config.horizon_hours < 1) throw Error(ErrorCode::InvalidSpec, "horizon must be at least one hour");
  if (config.build.round_decimals && (*config.build.round_decimals < 0 || *config.build.round_decimals > 15)) {
    throw Error(ErrorCode::InvalidSpec, "rounding decimals must lie in [0, 15]");
  }
}

UFunction combined_renewables(const UFunction& source, std::span<const UFunction> mechanical) {
  if (mechanical.empty()) throw Error(ErrorCode::EmptyMechList, "fleet has no mechanical u-functions");
  return compose(source, compose_all(mechanical, kPlus), kTimes);
}

UFunction system_generation(const UFunction& solar, const UFunction& wind, const UFunction& ev,
                            const UFunction& transformer) {
  const std::array<UFunction, 4> parts{solar, wind, ev, transformer};
  return compose_all(parts, kPlus);
}

double lole(const UFunction& generation, const UFunction& load, std::size_t horizon_hours, bool strict) {
  return static_cast<double>(horizon_hours) * shortfall(generation, load, strict).loss_probability;
}

double eens(const UFunction& generation, const UFunction& load, std::size_t horizon_hours, bool strict) {
  return static_cast<double>(horizon_hours) * shortfall(generation, load, strict).expected_unserved_kw;
}

namespace {

template <typename Fn>
auto tagged(const char* component, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    if (!e.component().empty()) throw;
    throw Error(e.code(), std::string(component) + ": " + e.what(), component);
  }
}

}  // namespace

ComponentUFunctions build_components(const SystemConfig& config) {
  validate(config);
  const BuildOptions& opts = config.build;
  ComponentUFunctions out;
  if (config.solar && config.solar->count > 0) {
    out.solar = tagged("solar", [&] {
      const auto& g = config.solar->generator;
      const std::vector<UFunction> mech(config.solar->count, solar_mechanical_ufunction(g, opts));
      return combined_renewables(solar_irradiance_ufunction(g), mech);
    });
  }
  if (config.wind && config.wind->count > 0) {
    out.wind = tagged("wind", [&] {
      const auto& t = config.wind->turbine;
      const std::vector<UFunction> mech(config.wind->count, wind_mechanical_ufunction(t, opts));
      return combined_renewables(wind_speed_ufunction(t), mech);
    });
  }
  if (config.ev) {
    out.ev = tagged("ev", [&] { return ev_aggregation_ufunction(*config.ev, opts); });
  }
  if (config.transformer) {
    out.transformer = tagged("transformer", [&] { return transformer_ufunction(*config.transformer, opts); });
  }
  out.load = tagged("load", [&] { return load_ufunction(config.load); });
  return out;
}

ReliabilityReport assess(const SystemConfig& config) {
  ReliabilityReport report;
  report.components = build_components(config);
  const auto& c = report.components;
  report.generation = system_generation(c.solar, c.wind, c.ev, c.transformer);
  report.horizon_hours = config.horizon_hours;
  report.strict_loss = config.strict_loss;

  const Shortfall s = shortfall(report.generation, c.load, config.strict_loss);
  report.loss_probability = s.loss_probability;
  report.expected_unserved_kw = s.expected_unserved_kw;
  const auto horizon = static_cast<double>(config.horizon_hours);
  report.lole_hours = horizon * s.loss_probability;
  report.eens_kwh = horizon * s.expected_unserved_kw;

  report.state_counts = {c.solar.size(),      c.wind.size(), c.ev.size(), c.transformer.size(),
                         report.generation.size(), c.load.size()};
  return report;
}

}  // namespace ugf
