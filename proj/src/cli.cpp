#include "ugf/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "ugf/config.hpp"
#include "ugf/error.hpp"
#include "ugf/oracle.hpp"
#include "ugf/stochastic.hpp"

namespace ugf {
namespace {

struct AssessArgs {
  std::string config;
  std::string load_csv;
  std::string out;
  std::string format = "text";
  std::string strict_loss;
  bool verify_oracle = false;
  std::uint64_t oracle_cap = kDefaultJointStateCap;
  std::size_t mc_samples = 0;
  std::uint64_t seed = 1;
};

struct DiscretizeArgs {
  std::string dist;
  std::string params;
  std::size_t n = 0;
  double max = 0.0;
  std::string format = "text";
};

struct InspectArgs {
  std::string config;
  std::string load_csv;
  std::string component;
  std::string format = "text";
};

std::optional<std::filesystem::path> optional_path(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return std::filesystem::path(s);
}

void print_terms(std::ostream& out, const UFunction& u) {
  out << std::setw(16) << "value" << std::setw(16) << "probability" << '\n';
  for (const auto& t : u) {
    out << std::setw(16) << std::setprecision(6) << t.value << std::setw(16) << std::setprecision(4)
        << t.probability << '\n';
  }
}

void write_output(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::InvalidConfig, "cannot write " + path);
  f << text;
}

int run_assess(const AssessArgs& a, std::ostream& out) {
  ConfigDocument doc = load_config_file(a.config, optional_path(a.load_csv));
  if (a.strict_loss == "true") doc.system.strict_loss = true;
  if (a.strict_loss == "false") doc.system.strict_loss = false;

  const ReliabilityReport report = assess(doc.system);
  ReportExtras extras;
  if (a.verify_oracle) extras.oracle = enumerate_exact(doc.system, a.oracle_cap);
  if (a.mc_samples > 0) extras.monte_carlo = monte_carlo(doc.system, a.mc_samples, a.seed);

  bool mismatch = false;
  if (extras.oracle) {
    mismatch = relative_difference(report.loss_probability, extras.oracle->loss_probability) >
                   extras.oracle_tolerance ||
               relative_difference(report.expected_unserved_kw, extras.oracle->expected_unserved_kw) >
                   extras.oracle_tolerance;
  }

  std::ostringstream text;
  if (a.format == "json") {
    text << report_to_json(doc, report, extras).dump(2) << '\n';
  } else {
    const auto& c = report.state_counts;
    text << std::setprecision(4);
    if (!doc.name.empty()) text << doc.name << '\n';
    text << "LOLE              " << report.lole_hours << " hr/yr\n"
         << "EENS              " << report.eens_kwh / 1000.0 << " MWh/yr\n"
         << "loss probability  " << report.loss_probability << '\n'
         << "horizon           " << report.horizon_hours << " h (" << (report.strict_loss ? "strict" : "non-strict")
         << " loss)\n"
         << "states            solar " << c.solar << ", wind " << c.wind << ", ev " << c.ev << ", transformer "
         << c.transformer << ", generation " << c.generation << ", load " << c.load << '\n';
    if (extras.oracle) {
      const double h = static_cast<double>(report.horizon_hours);
      text << "oracle            LOLE " << h * extras.oracle->loss_probability << " hr/yr, EENS "
           << h * extras.oracle->expected_unserved_kw / 1000.0 << " MWh/yr over " << extras.oracle->joint_states
           << " joint states: " << (mismatch ? "MISMATCH" : "agrees") << '\n';
    }
    if (extras.monte_carlo) {
      const auto& m = *extras.monte_carlo;
      const double h = static_cast<double>(report.horizon_hours);
      text << "monte carlo       LOLE " << h * m.loss_probability << " +/- " << h * m.loss_half_width
           << " hr/yr, EENS " << h * m.expected_unserved_kw / 1000.0 << " +/- "
           << h * m.unserved_half_width / 1000.0 << " MWh/yr (" << m.n_samples << " samples)\n";
    }
  }
  write_output(text.str(), a.out, out);
  return mismatch ? kExitOracleMismatch : kExitOk;
}

std::map<std::string, double> parse_params(const std::string& s) {
  std::map<std::string, double> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::InvalidConfig, "parameter '" + item + "' is not key=value");
    const std::string key = item.substr(0, eq);
    try {
      std::size_t used = 0;
      const std::string v = item.substr(eq + 1);
      out[key] = std::stod(v, &used);
      if (used != v.size()) throw std::invalid_argument(v);
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::InvalidConfig, "parameter '" + key + "' is not a number");
    }
  }
  return out;
}

double param(const std::map<std::string, double>& p, const char* key) {
  const auto it = p.find(key);
  if (it == p.end()) throw Error(ErrorCode::InvalidConfig, std::string("missing parameter '") + key + "'");
  return it->second;
}

int run_discretize(const DiscretizeArgs& a, std::ostream& out) {
  const auto p = parse_params(a.params);
  SourceDensity density;
  if (a.dist == "beta") {
    for (const auto& [k, v] : p) {
      if (k != "alpha" && k != "beta" && k != "mean" && k != "variance") {
        throw Error(ErrorCode::InvalidConfig, "unknown beta parameter '" + k + "'");
      }
    }
    density = p.count("mean") ? fit_beta_moments(param(p, "mean"), param(p, "variance"))
                              : BetaParams{param(p, "alpha"), param(p, "beta")};
  } else {
    for (const auto& [k, v] : p) {
      if (k != "k" && k != "c") throw Error(ErrorCode::InvalidConfig, "unknown weibull parameter '" + k + "'");
    }
    density = WeibullParams{param(p, "k"), param(p, "c")};
  }
  const DiscretizedDistribution d = discretize(density, a.n, a.max);
  if (a.format == "json") {
    nlohmann::ordered_json j;
    j["step"] = d.step;
    j["max"] = d.max_value;
    j["state_values"] = d.state_values;
    j["state_probs"] = d.state_probs;
    out << j.dump(2) << '\n';
    return kExitOk;
  }
  out << std::setw(6) << "state" << std::setw(14) << "value" << std::setw(14) << "probability" << '\n';
  for (std::size_t i = 0; i < d.size(); ++i) {
    out << std::setw(6) << i + 1 << std::setw(14) << std::setprecision(6) << d.state_values[i] << std::setw(14)
        << std::setprecision(4) << d.state_probs[i] << '\n';
  }
  return kExitOk;
}

int run_inspect(const InspectArgs& a, std::ostream& out) {
  const ConfigDocument doc = load_config_file(a.config, optional_path(a.load_csv));
  UFunction u = UFunction::degenerate(0.0);
  if (a.component == "system") {
    u = assess(doc.system).generation;
  } else {
    const ComponentUFunctions c = build_components(doc.system);
    if (a.component == "solar") u = c.solar;
    if (a.component == "wind") u = c.wind;
    if (a.component == "ev") u = c.ev;
    if (a.component == "transformer") u = c.transformer;
    if (a.component == "load") u = c.load;
  }
  if (a.format == "json") {
    nlohmann::ordered_json j;
    j["component"] = a.component;
    j["terms"] = ufunction_to_json(u);
    out << j.dump(2) << '\n';
  } else {
    print_terms(out, u);
  }
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multi-state adequacy assessment of distributed generation systems"};
  app.name("ugfrel");
  app.require_subcommand(1);

  AssessArgs assess_args;
  auto* assess_cmd = app.add_subcommand("assess", "Compute LOLE and EENS for a system configuration");
  assess_cmd->add_option("--config", assess_args.config, "Configuration JSON")->required();
  assess_cmd->add_option("--load-csv", assess_args.load_csv, "Hourly load series, overrides the config");
  assess_cmd->add_option("--out", assess_args.out, "Write the report to this file");
  assess_cmd->add_option("--format", assess_args.format)->check(CLI::IsMember({"json", "text"}));
  assess_cmd->add_option("--strict-loss", assess_args.strict_loss, "Count L > G (true) or L >= G (false)")
      ->check(CLI::IsMember({"true", "false"}));
  assess_cmd->add_flag("--verify-oracle", assess_args.verify_oracle, "Cross-check by exact enumeration");
  assess_cmd->add_option("--oracle-cap", assess_args.oracle_cap, "Largest joint space to enumerate");
  auto* mc = assess_cmd->add_option("--mc-samples", assess_args.mc_samples, "Monte Carlo sample count");
  assess_cmd->add_option("--seed", assess_args.seed, "Monte Carlo seed")->needs(mc);

  DiscretizeArgs disc_args;
  auto* disc_cmd = app.add_subcommand("discretize", "Equal-width discretization of a source distribution");
  disc_cmd->add_option("--dist", disc_args.dist)->required()->check(CLI::IsMember({"beta", "weibull"}));
  disc_cmd->add_option("--params", disc_args.params, "alpha=,beta= | mean=,variance= | k=,c=")->required();
  disc_cmd->add_option("--n", disc_args.n)->required()->check(CLI::PositiveNumber);
  disc_cmd->add_option("--max", disc_args.max)->required()->check(CLI::PositiveNumber);
  disc_cmd->add_option("--format", disc_args.format)->check(CLI::IsMember({"json", "text"}));

  InspectArgs inspect_args;
  auto* inspect_cmd = app.add_subcommand("inspect", "Print one component's u-function");
  inspect_cmd->add_option("--config", inspect_args.config)->required();
  inspect_cmd->add_option("--load-csv", inspect_args.load_csv);
  inspect_cmd->add_option("--component", inspect_args.component)
      ->required()
      ->check(CLI::IsMember({"solar", "wind", "ev", "transformer", "load", "system"}));
  inspect_cmd->add_option("--format", inspect_args.format)->check(CLI::IsMember({"json", "text"}));

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    if (const auto* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front()) {
      err << sub->help();
    }
    return kExitUsage;
  }

  try {
    if (assess_cmd->parsed()) return run_assess(assess_args, out);
    if (disc_cmd->parsed()) return run_discretize(disc_args, out);
    return run_inspect(inspect_args, out);
  } catch (const Error& e) {
    err << "error [" << to_string(e.code()) << "]: " << e.what() << '\n';
    return kExitInvalid;
  }
}

}  // namespace ugf
