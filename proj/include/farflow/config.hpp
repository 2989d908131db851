#ifndef FARFLOW_CONFIG_HPP
#define FARFLOW_CONFIG_HPP

#include <map>
#include <optional>
#include <string>

#include "farflow/gas.hpp"
#include "farflow/solver.hpp"

namespace farflow {

// Flat "section.key" -> raw value view of a config file; the unit sweeps
// override entries here and rebuild.
using ConfigMap = std::map<std::string, std::string>;

ConfigMap parse_config_text(const std::string& text);
ConfigMap parse_config_file(const std::string& path);

enum class Scenario { Airfoil, Nozzle, OracleOnly };
enum class OracleKind { SphereDipole, RadialCone, PointSource };
enum class InflowShape { Radial, Perturbed };

struct DecayCheck {
  bool enabled = false;
  // two-sided |exponent - expect| <= tol when expect is set, else exponent >= min
  std::optional<double> expect;
  double tol = 0.1;
  std::optional<double> min;
};

struct ExperimentConfig {
  std::string name = "experiment";
  Scenario scenario = Scenario::Airfoil;
  GasModel gas = GasModel::incompressible(1.0);

  // domain
  double obstacle_radius = 1.0;
  double half_angle = kPi / 6.0;
  double inner_radius = 1.0;

  // flow
  double u_infinity = 0.0;
  std::optional<double> mach_infinity;
  double mass_flux = 0.0;
  InflowShape inflow = InflowShape::Radial;
  double perturbation = 0.0;

  int n_r = 64;
  int n_theta = 32;
  SolverConfig solver;

  double shell_r0 = 0.0;  // 0: 2 x inner radius
  int shell_count = 10;

  OracleKind oracle_kind = OracleKind::SphereDipole;

  // checks
  bool check_oracle = false;
  double oracle_tol = 1e-4;
  bool check_lemma21 = false;
  double lemma21_tol = 1e-10;
  int lemma21_samples = 1000;
  double lemma21_planted_min = 4.4;
  bool check_barrier = false;
  double barrier_r_prime = 0.0;  // 0: automatic
  double cone_orthogonality_tol = 1e-12;
  DecayCheck decay_speed;
  DecayCheck decay_potential;
  bool check_multipole = false;
  double multipole_g_tol = 1e-5;
  double multipole_g1_rel_tol = 0.02;
  double multipole_small_tol = 1e-4;
  double expansion_min_exponent = 3.7;
  bool check_optimality = false;
  double conservation_tol = 1e-6;

  bool write_field_csv = true;

  // Axial speed resolved from u_infinity or mach_infinity.
  double resolved_u_infinity() const;
};

ExperimentConfig build_experiment_config(const ConfigMap& map);

ExperimentConfig load_experiment_config(const std::string& path);

bool is_known_config_key(const std::string& key);

}  // namespace farflow

#endif  // FARFLOW_CONFIG_HPP
