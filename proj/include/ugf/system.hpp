#pragma once

#include <cstddef>
#include <optional>
#include <span>

#include "ugf/components.hpp"
#include "ugf/ufunction.hpp"

namespace ugf {

struct SolarFleet {
  SolarGeneratorSpec generator;
  std::size_t count = 0;  // generators sharing one irradiance state
};

struct WindFleet {
  WindTurbineSpec turbine;
  std::size_t count = 0;  // turbines sharing one wind state
};

/// Full distributed-generation system: every generator feeds a common bus in
/// parallel with the grid transformer.
struct SystemConfig {
  std::optional<SolarFleet> solar;
  std::optional<WindFleet> wind;
  std::optional<EVAggregationSpec> ev;
  std::optional<TransformerSpec> transformer;
  LoadSpec load;
  std::size_t horizon_hours = 8736;
  bool strict_loss = true;
  BuildOptions build;
};

void validate(const SystemConfig& config);

struct StateCounts {
  std::size_t solar = 0;
  std::size_t wind = 0;
  std::size_t ev = 0;
  std::size_t transformer = 0;
  std::size_t generation = 0;
  std::size_t load = 0;
};

struct ComponentUFunctions {
  UFunction solar = UFunction::degenerate(0.0);
  UFunction wind = UFunction::degenerate(0.0);
  UFunction ev = UFunction::degenerate(0.0);
  UFunction transformer = UFunction::degenerate(0.0);
  UFunction load = UFunction::degenerate(0.0);
};

struct ReliabilityReport {
  double lole_hours = 0.0;
  double eens_kwh = 0.0;
  double loss_probability = 0.0;
  double expected_unserved_kw = 0.0;
  std::size_t horizon_hours = 0;
  bool strict_loss = true;
  ComponentUFunctions components;
  UFunction generation = UFunction::degenerate(0.0);
  StateCounts state_counts;
};

/// Shared-source fleet: the mechanical u-functions are summed (parallel
/// units) and the total scaled by the one source state all units see.
UFunction combined_renewables(const UFunction& source, std::span<const UFunction> mechanical);

UFunction system_generation(const UFunction& solar, const UFunction& wind, const UFunction& ev,
                            const UFunction& transformer);

/// Expected hours with load exceeding generation over the horizon.
double lole(const UFunction& generation, const UFunction& load, std::size_t horizon_hours, bool strict);
/// Expected unserved energy over the horizon, kWh.
double eens(const UFunction& generation, const UFunction& load, std::size_t horizon_hours, bool strict);

/// Builds every component u-function. Absent components contribute 1.0 z^0.
ComponentUFunctions build_components(const SystemConfig& config);

ReliabilityReport assess(const SystemConfig& config);

}  // namespace ugf
