#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "ugf/oracle.hpp"
#include "ugf/system.hpp"

namespace ugf {

inline constexpr int kConfigVersion = 1;

/// A parsed and validated configuration document.
struct ConfigDocument {
  std::string name;
  SystemConfig system;
};

/// Parses a version-1 configuration. Unknown keys are rejected. A load
/// `csv` path is resolved against base_dir; load_csv overrides it.
ConfigDocument parse_config(const nlohmann::json& doc, const std::filesystem::path& base_dir,
                            const std::optional<std::filesystem::path>& load_csv = std::nullopt);

ConfigDocument load_config_file(const std::filesystem::path& path,
                                const std::optional<std::filesystem::path>& load_csv = std::nullopt);

std::vector<double> read_load_csv_file(const std::filesystem::path& path);

nlohmann::ordered_json ufunction_to_json(const UFunction& u);
/// Inverse of ufunction_to_json; terms are taken verbatim.
UFunction ufunction_from_json(const nlohmann::json& terms);

struct ReportExtras {
  std::optional<OracleResult> oracle;
  std::optional<MonteCarloResult> monte_carlo;
  double oracle_tolerance = 1e-9;
};

/// Stable key order; doubles printed in shortest round-trip form.
nlohmann::ordered_json report_to_json(const ConfigDocument& doc, const ReliabilityReport& report,
                                      const ReportExtras& extras = {});

/// |a - b| / max(|a|, |b|), zero when both are zero.
double relative_difference(double a, double b);

}  // namespace ugf
