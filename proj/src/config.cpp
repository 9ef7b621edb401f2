#include "ugf/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

#include "ugf/error.hpp"

namespace ugf {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::InvalidConfig, where + ": " + what);
}

/// Read-only view of one JSON object that knows its path and the keys it may
/// contain.
class Section {
 public:
  Section(const json& j, std::string path, std::initializer_list<const char*> allowed)
      : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail(path_, "expected an object");
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& item : j_.items()) {
      if (!ok.count(item.key())) fail(path_, "unknown key '" + item.key() + "'");
    }
  }

  bool has(const char* key) const { return j_.contains(key); }
  const json& raw(const char* key) const {
    if (!has(key)) fail(path_, std::string("missing key '") + key + "'");
    return j_.at(key);
  }
  std::string at(const char* key) const { return path_ + "." + key; }

  double number(const char* key) const {
    const json& v = raw(key);
    if (!v.is_number()) fail(at(key), "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) fail(at(key), "expected a finite number");
    return x;
  }
  double number_or(const char* key, double fallback) const { return has(key) ? number(key) : fallback; }

  std::size_t count(const char* key) const {
    const json& v = raw(key);
    if (!v.is_number_integer() || v.get<long long>() < 0) fail(at(key), "expected a non-negative integer");
    return v.get<std::size_t>();
  }

  bool boolean(const char* key) const {
    const json& v = raw(key);
    if (!v.is_boolean()) fail(at(key), "expected true or false");
    return v.get<bool>();
  }

  std::string string(const char* key) const {
    const json& v = raw(key);
    if (!v.is_string()) fail(at(key), "expected a string");
    return v.get<std::string>();
  }

  Section object(const char* key, std::initializer_list<const char*> allowed) const {
    return Section(raw(key), at(key), allowed);
  }

  std::vector<double> numbers(const char* key) const {
    const json& v = raw(key);
    if (!v.is_array()) fail(at(key), "expected an array of numbers");
    std::vector<double> out;
    for (const auto& x : v) {
      if (!x.is_number()) fail(at(key), "expected an array of numbers");
      out.push_back(x.get<double>());
    }
    return out;
  }

  void exactly_one(std::initializer_list<const char*> keys) const {
    int n = 0;
    std::string names;
    for (const char* k : keys) {
      n += has(k) ? 1 : 0;
      names += names.empty() ? k : std::string("|") + k;
    }
    if (n != 1) fail(path_, "exactly one of " + names + " is required");
  }

  const std::string& path() const { return path_; }

 private:
  const json& j_;
  std::string path_;
};

TwoStateRates parse_rates(const Section& s) {
  const std::string per = s.string("per");
  TwoStateRates r;
  if (per == "hour") {
    r.unit = RateUnit::PerHour;
  } else if (per == "year") {
    r.unit = RateUnit::PerYear;
  } else {
    fail(s.at("per"), "expected \"hour\" or \"year\"");
  }
  r.failure_rate = s.number("failure_rate");
  r.repair_rate = s.number("repair_rate");
  if (r.failure_rate < 0.0 || r.repair_rate < 0.0) fail(s.path(), "rates must be >= 0");
  if (r.failure_rate + r.repair_rate == 0.0) fail(s.path(), "failure and repair rates are both zero");
  return r;
}

TwoStateRates parse_mech(const Section& parent) {
  return parse_rates(parent.object("mech", {"failure_rate", "repair_rate", "per"}));
}

TableSource parse_table(const Section& parent) {
  const json& rows = parent.raw("table");
  const std::string where = parent.at("table");
  if (!rows.is_array() || rows.empty()) fail(where, "expected a non-empty array of [state, probability, kW]");
  TableSource t;
  for (const auto& row : rows) {
    if (!row.is_array() || row.size() != 3 || !row[0].is_number() || !row[1].is_number() || !row[2].is_number()) {
      fail(where, "each row must be [state_value, probability, power_kw]");
    }
    t.rows.push_back({row[0].get<double>(), row[1].get<double>(), row[2].get<double>()});
  }
  return t;
}

SolarFleet parse_solar(const Section& s) {
  SolarFleet fleet;
  fleet.count = s.count("count");
  auto& g = fleet.generator;
  g.n_modules = s.count("modules_per_generator");
  if (g.n_modules == 0) fail(s.at("modules_per_generator"), "must be >= 1");
  g.mech = parse_mech(s);
  if (s.has("mechanical_model")) {
    const std::string m = s.string("mechanical_model");
    if (m == "per_generator") {
      g.mech_model = SolarMechanicalModel::PerGenerator;
    } else if (m == "per_module") {
      g.mech_model = SolarMechanicalModel::PerModule;
    } else {
      fail(s.at("mechanical_model"), "expected \"per_generator\" or \"per_module\"");
    }
  }
  s.exactly_one({"table", "beta"});
  if (s.has("table")) {
    for (const char* k : {"n_states", "max", "panel"}) {
      if (s.has(k)) fail(s.at(k), "not allowed with a table source");
    }
    g.source = parse_table(s);
    return fleet;
  }
  ParametricSolarSource p;
  const Section beta = s.object("beta", {"alpha", "beta", "mean", "variance"});
  if (beta.has("mean") || beta.has("variance")) {
    if (beta.has("alpha") || beta.has("beta")) fail(beta.path(), "give either alpha/beta or mean/variance");
    p.irradiance = fit_beta_moments(beta.number("mean"), beta.number("variance"));
  } else {
    p.irradiance = {beta.number("alpha"), beta.number("beta")};
  }
  p.n_states = s.count("n_states");
  p.max_value = s.number_or("max", 1.0);
  const Section panel =
      s.object("panel", {"k_v", "k_i", "i_sc", "v_oc", "i_mpp", "v_mpp", "n_ot", "t_a"});
  p.panel = {panel.number("k_v"),   panel.number("k_i"),   panel.number("i_sc"), panel.number("v_oc"),
             panel.number("i_mpp"), panel.number("v_mpp"), panel.number("n_ot"), panel.number("t_a")};
  g.source = p;
  return fleet;
}

WindFleet parse_wind(const Section& s) {
  WindFleet fleet;
  fleet.count = s.count("count");
  auto& t = fleet.turbine;
  t.mech = parse_mech(s);
  s.exactly_one({"table", "weibull"});
  if (s.has("table")) {
    for (const char* k : {"n_states", "max", "curve"}) {
      if (s.has(k)) fail(s.at(k), "not allowed with a table source");
    }
    t.source = parse_table(s);
    return fleet;
  }
  ParametricWindSource p;
  const Section w = s.object("weibull", {"k", "c"});
  p.wind = {w.number("k"), w.number("c")};
  p.n_states = s.count("n_states");
  if (s.has("max")) p.max_value = s.number("max");
  const Section curve = s.object("curve", {"v_ci", "v_r", "v_co", "rated_kw"});
  p.curve = {curve.number("v_ci"), curve.number("v_r"), curve.number("v_co"), curve.number("rated_kw")};
  t.source = p;
  return fleet;
}

EVAggregationSpec parse_ev(const Section& s) {
  EVAggregationSpec ev;
  ev.n_ev = s.count("n_ev");
  ev.p_v = s.number("power_kw");
  const Section h = s.object("residence_hours", {"charging", "disconnected", "discharging"});
  ev.residence = {h.number("charging"), h.number("disconnected"), h.number("discharging")};
  ev.mech = parse_mech(s);
  if (s.has("mechanical_model")) {
    const std::string m = s.string("mechanical_model");
    if (m == "block") {
      ev.mech_model = EvMechanicalModel::Block;
    } else if (m == "per_ev") {
      ev.mech_model = EvMechanicalModel::PerEv;
    } else {
      fail(s.at("mechanical_model"), "expected \"block\" or \"per_ev\"");
    }
  }
  return ev;
}

TransformerSpec parse_transformer(const Section& s) {
  TransformerSpec t;
  t.rated_kw = s.number("rated_kw");
  s.exactly_one({"mech", "markov"});
  if (s.has("mech")) {
    t.mech = parse_mech(s);
    return t;
  }
  const Section m = s.object("markov", {"rates", "per", "capacity_fractions"});
  const std::string per = m.string("per");
  if (per != "hour" && per != "year") fail(m.at("per"), "expected \"hour\" or \"year\"");
  const json& rows = m.raw("rates");
  if (!rows.is_array() || rows.empty()) fail(m.at("rates"), "expected a square matrix");
  const std::size_t n = rows.size();
  std::vector<double> q;
  for (const auto& row : rows) {
    if (!row.is_array() || row.size() != n) fail(m.at("rates"), "expected a square matrix");
    for (const auto& x : row) {
      if (!x.is_number()) fail(m.at("rates"), "expected numbers");
      q.push_back(x.get<double>());
    }
  }
  const RateUnit unit = per == "hour" ? RateUnit::PerHour : RateUnit::PerYear;
  t.mech = MultiStateTransformer{MarkovGenerator(n, std::move(q), unit), m.numbers("capacity_fractions")};
  return t;
}

}  // namespace

std::vector<double> read_load_csv_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::InvalidConfig, "cannot open load CSV " + path.string());
  return read_load_csv(in);
}

ConfigDocument parse_config(const json& doc, const std::filesystem::path& base_dir,
                            const std::optional<std::filesystem::path>& load_csv) {
  const Section root(doc, "config",
                     {"version", "name", "description", "probability_rounding_decimals", "solar", "wind", "ev",
                      "transformer", "load", "indices"});
  const json& version = root.raw("version");
  if (!version.is_number_integer() || version.get<int>() != kConfigVersion) {
    fail(root.at("version"), "unsupported version (expected 1)");
  }
  ConfigDocument out;
  if (root.has("name")) out.name = root.string("name");
  if (root.has("description")) (void)root.string("description");
  SystemConfig& sys = out.system;
  if (root.has("probability_rounding_decimals")) {
    const std::size_t d = root.count("probability_rounding_decimals");
    if (d > 15) fail(root.at("probability_rounding_decimals"), "must be at most 15");
    sys.build.round_decimals = static_cast<int>(d);
  }
  if (root.has("solar")) {
    sys.solar = parse_solar(root.object("solar", {"count", "modules_per_generator", "mechanical_model", "mech",
                                                  "table", "beta", "n_states", "max", "panel"}));
  }
  if (root.has("wind")) {
    sys.wind = parse_wind(root.object("wind", {"count", "mech", "table", "weibull", "n_states", "max", "curve"}));
  }
  if (root.has("ev")) {
    sys.ev = parse_ev(
        root.object("ev", {"n_ev", "power_kw", "residence_hours", "mech", "mechanical_model"}));
  }
  if (root.has("transformer")) {
    sys.transformer = parse_transformer(root.object("transformer", {"rated_kw", "mech", "markov"}));
  }

  const Section load = root.object("load", {"n_states", "csv", "hourly_kw"});
  sys.load.n_states = load.count("n_states");
  if (load_csv) {
    sys.load.hourly_kw = read_load_csv_file(*load_csv);
  } else {
    load.exactly_one({"csv", "hourly_kw"});
    if (load.has("csv")) {
      std::filesystem::path p = load.string("csv");
      if (p.is_relative()) p = base_dir / p;
      sys.load.hourly_kw = read_load_csv_file(p);
    } else {
      sys.load.hourly_kw = load.numbers("hourly_kw");
    }
  }

  sys.horizon_hours = sys.load.hourly_kw.size();
  if (root.has("indices")) {
    const Section idx = root.object("indices", {"horizon_hours", "strict_loss"});
    if (idx.has("horizon_hours")) {
      sys.horizon_hours = idx.count("horizon_hours");
      if (sys.horizon_hours == 0) fail(idx.at("horizon_hours"), "must be >= 1");
    }
    if (idx.has("strict_loss")) sys.strict_loss = idx.boolean("strict_loss");
  }
  return out;
}

ConfigDocument load_config_file(const std::filesystem::path& path,
                                const std::optional<std::filesystem::path>& load_csv) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::InvalidConfig, "cannot open config " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::InvalidConfig, path.string() + ": " + e.what());
  }
  return parse_config(doc, path.parent_path(), load_csv);
}

nlohmann::ordered_json ufunction_to_json(const UFunction& u) {
  auto out = nlohmann::ordered_json::array();
  for (const auto& t : u) out.push_back({t.value, t.probability});
  return out;
}

UFunction ufunction_from_json(const nlohmann::json& terms) {
  if (!terms.is_array()) throw Error(ErrorCode::InvalidConfig, "u-function must be an array of [value, probability]");
  std::vector<Term> out;
  for (const auto& t : terms) {
    if (!t.is_array() || t.size() != 2 || !t[0].is_number() || !t[1].is_number()) {
      throw Error(ErrorCode::InvalidConfig, "u-function term must be [value, probability]");
    }
    out.push_back({t[0].get<double>(), t[1].get<double>()});
  }
  return UFunction(std::move(out));
}

double relative_difference(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

nlohmann::ordered_json report_to_json(const ConfigDocument& doc, const ReliabilityReport& report,
                                      const ReportExtras& extras) {
  nlohmann::ordered_json j;
  j["version"] = kConfigVersion;
  j["name"] = doc.name;
  j["lole_hr_per_yr"] = report.lole_hours;
  j["eens_mwh_per_yr"] = report.eens_kwh / 1000.0;
  j["eens_kwh_per_yr"] = report.eens_kwh;
  j["loss_probability"] = report.loss_probability;
  j["expected_unserved_kw"] = report.expected_unserved_kw;
  j["horizon_hours"] = report.horizon_hours;
  j["strict_loss"] = report.strict_loss;
  const auto& c = report.state_counts;
  j["state_counts"] = {{"solar", c.solar},           {"wind", c.wind},
                       {"ev", c.ev},                 {"transformer", c.transformer},
                       {"generation", c.generation}, {"load", c.load}};
  j["generation_terms"] = ufunction_to_json(report.generation);
  j["load_terms"] = ufunction_to_json(report.components.load);
  if (extras.oracle) {
    const auto& o = *extras.oracle;
    const double h = static_cast<double>(report.horizon_hours);
    const double lole_err = relative_difference(report.loss_probability, o.loss_probability);
    const double eens_err = relative_difference(report.expected_unserved_kw, o.expected_unserved_kw);
    j["oracle"] = {{"joint_states", o.joint_states},
                   {"total_probability", o.total_probability},
                   {"loss_probability", o.loss_probability},
                   {"expected_unserved_kw", o.expected_unserved_kw},
                   {"lole_hr_per_yr", h * o.loss_probability},
                   {"eens_mwh_per_yr", h * o.expected_unserved_kw / 1000.0},
                   {"lole_relative_difference", lole_err},
                   {"eens_relative_difference", eens_err},
                   {"tolerance", extras.oracle_tolerance},
                   {"agrees", lole_err <= extras.oracle_tolerance && eens_err <= extras.oracle_tolerance}};
  }
  if (extras.monte_carlo) {
    const auto& m = *extras.monte_carlo;
    const double h = static_cast<double>(report.horizon_hours);
    j["monte_carlo"] = {{"samples", m.n_samples},
                        {"loss_probability", m.loss_probability},
                        {"loss_probability_ci95", m.loss_half_width},
                        {"expected_unserved_kw", m.expected_unserved_kw},
                        {"expected_unserved_kw_ci95", m.unserved_half_width},
                        {"lole_hr_per_yr", h * m.loss_probability},
                        {"eens_mwh_per_yr", h * m.expected_unserved_kw / 1000.0}};
  }
  return j;
}

}  // namespace ugf
