#include "farflow/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

namespace farflow {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing junk");
    return v;
  } catch (const std::exception&) {
    throw ConfigurationError("config: key '" + key + "' needs a number, got '" +
                             value + "'");
  }
}

int to_int(const std::string& key, const std::string& value) {
  const double v = to_double(key, value);
  const int i = static_cast<int>(v);
  if (static_cast<double>(i) != v) {
    throw ConfigurationError("config: key '" + key + "' needs an integer");
  }
  return i;
}

bool to_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "on") return true;
  if (value == "false" || value == "0" || value == "off") return false;
  throw ConfigurationError("config: key '" + key + "' needs true/false");
}

const std::set<std::string> kKnownKeys = {
    "scenario", "name",
    "gas.mode", "gas.gamma", "gas.bernoulli_B", "gas.rho_bar",
    "domain.obstacle_radius", "domain.half_angle_deg", "domain.inner_radius",
    "flow.u_infinity", "flow.mach_infinity", "flow.mass_flux", "flow.inflow",
    "flow.perturbation",
    "mesh.n_r", "mesh.n_theta",
    "solver.max_picard_iters", "solver.picard_tolerance", "solver.relaxation",
    "solver.subsonic_margin", "solver.linear_tolerance",
    "solver.max_linear_iters",
    "shells.r0", "shells.count",
    "oracle.kind",
    "checks.oracle", "checks.oracle_tol",
    "checks.lemma21", "checks.lemma21_tol", "checks.lemma21_samples",
    "checks.lemma21_planted_min",
    "checks.barrier", "checks.barrier_r_prime",
    "checks.cone_orthogonality_tol",
    "checks.decay_speed", "checks.decay_speed_expect", "checks.decay_speed_tol",
    "checks.decay_speed_min",
    "checks.decay_potential", "checks.decay_potential_expect",
    "checks.decay_potential_tol", "checks.decay_potential_min",
    "checks.multipole", "checks.multipole_g_tol", "checks.multipole_g1_rel_tol",
    "checks.multipole_small_tol", "checks.expansion_min_exponent",
    "checks.optimality", "checks.conservation_tol",
    "output.write_field_csv",
};

}  // namespace

ConfigMap parse_config_text(const std::string& text) {
  ConfigMap map;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigurationError("config line " + std::to_string(lineno) +
                                 ": unterminated section header");
      }
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigurationError("config line " + std::to_string(lineno) +
                               ": expected key = value");
    }
    const std::string key =
        (section.empty() ? "" : section + ".") + trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!kKnownKeys.count(key)) {
      throw ConfigurationError("config line " + std::to_string(lineno) +
                               ": unknown key '" + key + "'");
    }
    map[key] = value;
  }
  return map;
}

ConfigMap parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigurationError("config: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

double ExperimentConfig::resolved_u_infinity() const {
  if (mach_infinity) return speed_from_mach(gas, *mach_infinity);
  return u_infinity;
}

ExperimentConfig build_experiment_config(const ConfigMap& map) {
  ExperimentConfig cfg;
  const auto get = [&](const std::string& key) -> std::optional<std::string> {
    const auto it = map.find(key);
    if (it == map.end()) return std::nullopt;
    return it->second;
  };

  if (const auto v = get("name")) cfg.name = *v;
  if (const auto v = get("scenario")) {
    if (*v == "airfoil") {
      cfg.scenario = Scenario::Airfoil;
    } else if (*v == "nozzle") {
      cfg.scenario = Scenario::Nozzle;
    } else if (*v == "oracle-only") {
      cfg.scenario = Scenario::OracleOnly;
    } else {
      throw ConfigurationError("config: unknown scenario '" + *v + "'");
    }
  } else {
    throw ConfigurationError("config: missing 'scenario'");
  }

  const std::string mode = get("gas.mode").value_or("incompressible");
  if (mode == "compressible") {
    const auto gamma = get("gas.gamma");
    const auto bern = get("gas.bernoulli_B");
    if (!gamma || !bern) {
      throw ConfigurationError(
          "config: compressible gas needs gas.gamma and gas.bernoulli_B");
    }
    cfg.gas = GasModel::compressible(to_double("gas.gamma", *gamma),
                                     to_double("gas.bernoulli_B", *bern));
  } else if (mode == "incompressible") {
    cfg.gas = GasModel::incompressible(
        get("gas.rho_bar") ? to_double("gas.rho_bar", *get("gas.rho_bar"))
                           : 1.0);
  } else {
    throw ConfigurationError("config: gas.mode must be compressible or "
                             "incompressible");
  }

  if (const auto v = get("domain.obstacle_radius")) {
    cfg.obstacle_radius = to_double("domain.obstacle_radius", *v);
  }
  if (const auto v = get("domain.half_angle_deg")) {
    cfg.half_angle = to_double("domain.half_angle_deg", *v) * kPi / 180.0;
  }
  if (const auto v = get("domain.inner_radius")) {
    cfg.inner_radius = to_double("domain.inner_radius", *v);
  }

  if (const auto v = get("flow.u_infinity")) {
    cfg.u_infinity = to_double("flow.u_infinity", *v);
  }
  if (const auto v = get("flow.mach_infinity")) {
    cfg.mach_infinity = to_double("flow.mach_infinity", *v);
  }
  if (const auto v = get("flow.mass_flux")) {
    cfg.mass_flux = to_double("flow.mass_flux", *v);
  }
  if (const auto v = get("flow.inflow")) {
    if (*v == "radial") {
      cfg.inflow = InflowShape::Radial;
    } else if (*v == "perturbed") {
      cfg.inflow = InflowShape::Perturbed;
    } else {
      throw ConfigurationError("config: flow.inflow must be radial|perturbed");
    }
  }
  if (const auto v = get("flow.perturbation")) {
    cfg.perturbation = to_double("flow.perturbation", *v);
  }

  if (const auto v = get("mesh.n_r")) cfg.n_r = to_int("mesh.n_r", *v);
  if (const auto v = get("mesh.n_theta")) {
    cfg.n_theta = to_int("mesh.n_theta", *v);
  }

  if (const auto v = get("solver.max_picard_iters")) {
    cfg.solver.max_picard_iters = to_int("solver.max_picard_iters", *v);
  }
  if (const auto v = get("solver.picard_tolerance")) {
    cfg.solver.picard_tolerance = to_double("solver.picard_tolerance", *v);
  }
  if (const auto v = get("solver.relaxation")) {
    cfg.solver.relaxation = to_double("solver.relaxation", *v);
    if (cfg.solver.relaxation <= 0.0 || cfg.solver.relaxation > 1.0) {
      throw ConfigurationError("config: relaxation must lie in (0, 1]");
    }
  }
  if (const auto v = get("solver.subsonic_margin")) {
    cfg.solver.subsonic_margin = to_double("solver.subsonic_margin", *v);
    if (cfg.solver.subsonic_margin <= 0.0 || cfg.solver.subsonic_margin >= 1.0) {
      throw ConfigurationError("config: subsonic_margin must lie in (0, 1)");
    }
  }
  if (const auto v = get("solver.linear_tolerance")) {
    cfg.solver.linear_tolerance = to_double("solver.linear_tolerance", *v);
  }
  if (const auto v = get("solver.max_linear_iters")) {
    cfg.solver.max_linear_iters = to_int("solver.max_linear_iters", *v);
  }

  if (const auto v = get("shells.r0")) cfg.shell_r0 = to_double("shells.r0", *v);
  if (const auto v = get("shells.count")) {
    cfg.shell_count = to_int("shells.count", *v);
  }

  if (const auto v = get("oracle.kind")) {
    if (*v == "sphere_dipole") {
      cfg.oracle_kind = OracleKind::SphereDipole;
    } else if (*v == "radial_cone") {
      cfg.oracle_kind = OracleKind::RadialCone;
    } else if (*v == "point_source") {
      cfg.oracle_kind = OracleKind::PointSource;
    } else {
      throw ConfigurationError("config: unknown oracle.kind '" + *v + "'");
    }
  }

  const auto fill_decay = [&](const std::string& prefix, DecayCheck& check) {
    if (const auto v = get("checks." + prefix)) {
      check.enabled = to_bool(prefix, *v);
    }
    if (const auto v = get("checks." + prefix + "_expect")) {
      check.expect = to_double(prefix, *v);
    }
    if (const auto v = get("checks." + prefix + "_tol")) {
      check.tol = to_double(prefix, *v);
    }
    if (const auto v = get("checks." + prefix + "_min")) {
      check.min = to_double(prefix, *v);
    }
    if (check.enabled && !check.expect && !check.min) {
      throw ConfigurationError("config: " + prefix +
                               " needs _expect or _min to judge the fit");
    }
  };
  fill_decay("decay_speed", cfg.decay_speed);
  fill_decay("decay_potential", cfg.decay_potential);

  if (const auto v = get("checks.oracle")) cfg.check_oracle = to_bool("oracle", *v);
  if (const auto v = get("checks.oracle_tol")) {
    cfg.oracle_tol = to_double("oracle_tol", *v);
  }
  if (const auto v = get("checks.lemma21")) {
    cfg.check_lemma21 = to_bool("lemma21", *v);
  }
  if (const auto v = get("checks.lemma21_tol")) {
    cfg.lemma21_tol = to_double("lemma21_tol", *v);
  }
  if (const auto v = get("checks.lemma21_samples")) {
    cfg.lemma21_samples = to_int("lemma21_samples", *v);
  }
  if (const auto v = get("checks.lemma21_planted_min")) {
    cfg.lemma21_planted_min = to_double("lemma21_planted_min", *v);
  }
  if (const auto v = get("checks.barrier")) {
    cfg.check_barrier = to_bool("barrier", *v);
  }
  if (const auto v = get("checks.barrier_r_prime")) {
    cfg.barrier_r_prime = to_double("barrier_r_prime", *v);
  }
  if (const auto v = get("checks.cone_orthogonality_tol")) {
    cfg.cone_orthogonality_tol = to_double("cone_orthogonality_tol", *v);
  }
  if (const auto v = get("checks.multipole")) {
    cfg.check_multipole = to_bool("multipole", *v);
  }
  if (const auto v = get("checks.multipole_g_tol")) {
    cfg.multipole_g_tol = to_double("multipole_g_tol", *v);
  }
  if (const auto v = get("checks.multipole_g1_rel_tol")) {
    cfg.multipole_g1_rel_tol = to_double("multipole_g1_rel_tol", *v);
  }
  if (const auto v = get("checks.multipole_small_tol")) {
    cfg.multipole_small_tol = to_double("multipole_small_tol", *v);
  }
  if (const auto v = get("checks.expansion_min_exponent")) {
    cfg.expansion_min_exponent = to_double("expansion_min_exponent", *v);
  }
  if (const auto v = get("checks.optimality")) {
    cfg.check_optimality = to_bool("optimality", *v);
  }
  if (const auto v = get("checks.conservation_tol")) {
    cfg.conservation_tol = to_double("conservation_tol", *v);
  }
  if (const auto v = get("output.write_field_csv")) {
    cfg.write_field_csv = to_bool("write_field_csv", *v);
  }

  // cross-field validation
  if (cfg.check_multipole) {
    const bool incompressible_airfoil =
        !cfg.gas.is_compressible() &&
        (cfg.scenario == Scenario::Airfoil ||
         (cfg.scenario == Scenario::OracleOnly &&
          cfg.oracle_kind == OracleKind::SphereDipole));
    if (!incompressible_airfoil) {
      throw ConfigurationError(
          "config: multipole extraction needs an incompressible airfoil "
          "scenario");
    }
  }
  if (cfg.scenario == Scenario::Nozzle && cfg.mass_flux < 0.0) {
    throw ConfigurationError("config: nozzle needs mass_flux >= 0");
  }
  if (cfg.mach_infinity && !cfg.gas.is_compressible()) {
    throw ConfigurationError(
        "config: mach_infinity set for an incompressible gas");
  }
  return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  return build_experiment_config(parse_config_file(path));
}

bool is_known_config_key(const std::string& key) {
  return kKnownKeys.count(key) > 0;
}

}  // namespace farflow
