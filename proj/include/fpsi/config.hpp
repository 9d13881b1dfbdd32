#pragma once

#include "fpsi/kinematics.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>

namespace fpsi {

inline const std::set<std::string>& known_scenarios() {
  static const std::set<std::string> s{"pressure_wave_2d", "decay", "mms_stokes", "mms_biot",
                                       "mms_time"};
  return s;
}

/// Everything a run needs, in g / mm / s units.
struct RunConfig {
  // [run]
  std::string scenario = "pressure_wave_2d";
  std::string mesh = "channel";  // built-in generator or a mesh file path
  int resolution = 16;
  int order = 1;
  double dt = 1e-4;
  double t_end = 1e-2;
  std::string output_dir = "fpsi_out";
  int output_every = 10;  // VTK cadence in steps, 0 disables
  int quadrature_degree = 6;
  double residual_tolerance = 1e-9;
  double energy_tolerance = 1e-3;

  // [material]
  double rho_f = 1e-3;
  double rho_s = 1.2e-3;
  double mu_f = 3e-3;
  double young = 3e5;
  double poisson = 0.3;
  double phi = 0.3;
  double s0 = 5e-5;
  double permeability = 5e-13;
  double gamma = 1.0;

  // [interface]
  double tau_scale = 1.0;
  std::optional<double> tau;

  // [load]
  double p_ext = 1.333e3;
  double pulse_end = 3e-3;
  double sign_pext = 1.0;
  double initial_velocity = 0.0;

  // [mms]
  int levels = 4;
  int base_resolution = 8;

  void validate() const {
    auto require = [](bool ok, const std::string& what) {
      if (!ok) throw ConfigError(what);
    };
    require(known_scenarios().count(scenario) > 0, "unknown scenario '" + scenario + "'");
    require(dt > 0.0, "dt must be positive");
    require(t_end >= dt, "t_end must be at least dt");
    require(order == 1 || order == 2, "order must be 1 or 2");
    require(resolution >= 2 && resolution <= 128, "resolution must lie in [2, 128]");
    require(output_every >= 0, "output_every must be non-negative");
    require(quadrature_degree >= 4 && quadrature_degree <= 20, "quadrature_degree must lie in [4, 20]");
    require(residual_tolerance > 0.0, "residual_tolerance must be positive");
    require(energy_tolerance >= 0.0, "energy_tolerance must be non-negative");
    require(young > 0.0 && poisson > -1.0 && poisson < 0.5, "invalid Young modulus or Poisson ratio");
    require(permeability > 0.0, "permeability must be positive");
    require(tau_scale > 0.0, "tau_scale must be positive");
    require(!tau || *tau > 0.0, "tau must be positive");
    require(sign_pext == 1.0 || sign_pext == -1.0, "sign_pext must be +1 or -1");
    require(pulse_end >= 0.0, "pulse_end must be non-negative");
    require(levels >= 3, "need >= 3 levels");
    require(base_resolution >= 1, "base_resolution must be positive");
    material().validate();
  }

  MaterialParams<2> material() const {
    MaterialParams<2> m;
    m.rho_f = rho_f;
    m.rho_s = rho_s;
    m.mu_f = mu_f;
    const auto lame = lame_from_young(young, poisson);
    m.lambda_s = lame.lambda;
    m.mu_s = lame.mu;
    m.phi = phi;
    m.s0 = s0;
    m.K = permeability * Mat<2>::Identity();
    m.gamma = gamma;
    return m;
  }

  /// Inlet pressure at time t: p_ext on (0, pulse_end), zero afterwards.
  double inlet_pressure(double t) const {
    return t > 0.0 && t < pulse_end - 1e-9 * dt ? p_ext : 0.0;
  }
};

namespace detail {

/// Key table: section.key -> accessor pair.
struct ConfigKey {
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

inline std::string format_double(double v) {
  std::ostringstream s;
  s << std::setprecision(17) << v;
  return s.str();
}

template <class T>
T parse_value(const std::string& key, const std::string& text) {
  std::istringstream in(text);
  T v{};
  in >> v;
  if (!in.fail() && !in.eof()) in >> std::ws;
  if (in.fail() || !in.eof()) throw ConfigError("invalid value '" + text + "' for " + key);
  return v;
}

inline const std::map<std::string, ConfigKey>& config_keys() {
  static const std::map<std::string, ConfigKey> keys = [] {
    std::map<std::string, ConfigKey> k;
    auto num = [&k](const std::string& name, auto member) {
      using T = std::remove_reference_t<decltype(std::declval<RunConfig&>().*member)>;
      k[name] = {[name, member](RunConfig& c, const std::string& v) { c.*member = parse_value<T>(name, v); },
                 [member](const RunConfig& c) {
                   if constexpr (std::is_same_v<T, double>) return format_double(c.*member);
                   else return std::to_string(c.*member);
                 }};
    };
    auto str = [&k](const std::string& name, std::string RunConfig::*member) {
      k[name] = {[member](RunConfig& c, const std::string& v) { c.*member = v; },
                 [member](const RunConfig& c) { return c.*member; }};
    };
    str("run.scenario", &RunConfig::scenario);
    str("run.mesh", &RunConfig::mesh);
    num("run.resolution", &RunConfig::resolution);
    num("run.order", &RunConfig::order);
    num("run.dt", &RunConfig::dt);
    num("run.t_end", &RunConfig::t_end);
    str("run.output_dir", &RunConfig::output_dir);
    num("run.output_every", &RunConfig::output_every);
    num("run.quadrature_degree", &RunConfig::quadrature_degree);
    num("run.residual_tolerance", &RunConfig::residual_tolerance);
    num("run.energy_tolerance", &RunConfig::energy_tolerance);
    num("material.rho_f", &RunConfig::rho_f);
    num("material.rho_s", &RunConfig::rho_s);
    num("material.mu_f", &RunConfig::mu_f);
    num("material.young", &RunConfig::young);
    num("material.poisson", &RunConfig::poisson);
    num("material.phi", &RunConfig::phi);
    num("material.s0", &RunConfig::s0);
    num("material.permeability", &RunConfig::permeability);
    num("material.gamma", &RunConfig::gamma);
    num("interface.tau_scale", &RunConfig::tau_scale);
    k["interface.tau"] = {
        [](RunConfig& c, const std::string& v) { c.tau = parse_value<double>("interface.tau", v); },
        [](const RunConfig& c) { return c.tau ? format_double(*c.tau) : std::string(); }};
    num("load.p_ext", &RunConfig::p_ext);
    num("load.pulse_end", &RunConfig::pulse_end);
    num("load.sign_pext", &RunConfig::sign_pext);
    num("load.initial_velocity", &RunConfig::initial_velocity);
    num("mms.levels", &RunConfig::levels);
    num("mms.base_resolution", &RunConfig::base_resolution);
    return k;
  }();
  return keys;
}

}  // namespace detail

/// Parse INI text. Unknown sections or keys are errors.
inline RunConfig parse_config(const std::string& text) {
  boost::property_tree::ptree tree;
  std::istringstream in(text);
  try {
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  RunConfig c;
  const auto& keys = detail::config_keys();
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty())
      throw ConfigError("key '" + section + "' outside of a section");
    for (const auto& [key, value] : body) {
      const std::string name = section + "." + key;
      const auto it = keys.find(name);
      if (it == keys.end()) throw ConfigError("unknown config key '" + name + "'");
      it->second.set(c, value.data());
    }
  }
  c.validate();
  return c;
}

inline RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config '" + path.string() + "'");
  std::stringstream s;
  s << in.rdbuf();
  return parse_config(s.str());
}

inline std::string serialize_config(const RunConfig& c) {
  std::map<std::string, std::vector<std::pair<std::string, std::string>>> sections;
  for (const auto& [name, key] : detail::config_keys()) {
    const std::string v = key.get(c);
    if (v.empty() && name == "interface.tau") continue;
    const auto dot = name.find('.');
    sections[name.substr(0, dot)].emplace_back(name.substr(dot + 1), v);
  }
  std::ostringstream out;
  for (const char* s : {"run", "material", "interface", "load", "mms"}) {
    out << '[' << s << "]\n";
    for (const auto& [k, v] : sections[s]) out << k << " = " << v << '\n';
    out << '\n';
  }
  return out.str();
}

}  // namespace fpsi
