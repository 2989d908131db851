#include "farflow/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <memory>
#include <random>

#include "farflow/farfield.hpp"
#include "farflow/oracles.hpp"
#include "farflow/postproc.hpp"

namespace farflow {

namespace {

namespace fs = std::filesystem;

Mat random_spd(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Mat g(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) g(i, j) = gauss(rng);
  }
  const Eigen::HouseholderQR<Mat> qr(g);
  Mat q = qr.householderQ();
  std::uniform_real_distribution<double> loglam(std::log(0.4), std::log(2.5));
  Vec lam(n);
  for (int i = 0; i < n; ++i) lam(i) = std::exp(loglam(rng));
  return q * lam.asDiagonal() * q.transpose();
}

}  // namespace

Lemma21Suite run_lemma21_suite(int samples, unsigned seed) {
  Lemma21Suite suite;
  suite.samples = samples;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> radius(0.5, 8.0);
  std::uniform_real_distribution<double> ell(0.2, 4.0);
  std::uniform_real_distribution<double> beta_dist(0.1, 0.9);

  for (int k = 0; k < samples; ++k) {
    const int n = 3 + (k % 2);
    EllipticCoeffs a_inf;
    a_inf.dim = n;
    a_inf.a = random_spd(rng, n);
    const QuadraticForm form = QuadraticForm::from_coeffs(a_inf, Vec::Zero(n));
    Vec x(n);
    do {
      for (int i = 0; i < n; ++i) x(i) = unit(rng);
    } while (x.norm() < 1e-3);
    x *= radius(rng) / x.norm();

    const double l = ell(rng);
    suite.max_identity_residual = std::max(
        suite.max_identity_residual, std::abs(lemma21_residual(x, l, a_inf, form)));

    ComparisonFunction cmp{form, beta_dist(rng)};
    const double q = q_value(x, form);
    const double scale =
        cmp.beta * (n - 2.0 + cmp.beta) * std::pow(q, -n - cmp.beta);
    suite.max_lpsi_residual =
        std::max(suite.max_lpsi_residual,
                 std::abs(lpsi_residual(x, a_inf.a, cmp)) / scale);
  }

  // Planted perturbation a = a_inf + Q^{-1-sigma} E along a ray, n = 3,
  // sigma = 1/2: the residual decays like Q^{-(n+1+sigma)}.
  {
    const int n = 3;
    const double sigma = 0.5;
    EllipticCoeffs a_inf;
    a_inf.dim = n;
    a_inf.a = random_spd(rng, n);
    const QuadraticForm form = QuadraticForm::from_coeffs(a_inf, Vec::Zero(n));
    ComparisonFunction cmp{form, 0.5};
    Mat e(n, n);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) e(i, j) = gauss(rng);
    }
    e = (0.05 * (e + e.transpose())).eval();
    Vec dir(n);
    dir << 1.0, 0.7, -0.4;
    dir.normalize();
    std::vector<double> radii, resid;
    for (int k = 0; k < 12; ++k) {
      // far window: the beta-order tail of psi biases the first decade
      const double r = 64.0 * std::pow(2.0, 0.5 * k);
      const Vec x = r * dir;
      const double q = q_value(x, form);
      const Mat a_x = a_inf.a + std::pow(q, -1.0 - sigma) * e;
      radii.push_back(r);
      resid.push_back(std::abs(lpsi_residual(x, a_x, cmp)));
    }
    suite.planted_exponent = fit_rate(radii, resid).exponent;
  }
  return suite;
}

namespace {

struct CheckRow {
  std::string name;
  bool pass = false;
  Json detail;
};

void print_check(const CheckRow& row) {
  std::cout << (row.pass ? "[PASS] " : "[FAIL] ") << row.name;
  if (row.detail.is_object()) {
    for (const auto& key : {"value", "tolerance", "exponent", "expected"}) {
      if (row.detail.contains(key)) {
        std::cout << "  " << key << "=" << row.detail[key].dump();
      }
    }
  }
  std::cout << '\n';
}

bool judge_decay(const DecayCheck& check, const RateFit& fit, Json& detail) {
  detail["exponent"] = fit.exponent;
  detail["stderr_slope"] = fit.stderr_slope;
  bool ok = true;
  if (check.expect) {
    detail["expected"] = *check.expect;
    detail["tolerance"] = check.tol;
    ok = std::abs(fit.exponent - *check.expect) <= check.tol;
  } else if (check.min) {
    detail["min"] = *check.min;
    ok = fit.exponent >= *check.min;
  }
  return ok;
}

double auto_r_prime(const ExperimentConfig& cfg, const QuadraticForm& form) {
  if (cfg.barrier_r_prime > 0.0) return cfg.barrier_r_prime;
  const double inner =
      cfg.scenario == Scenario::Nozzle ? cfg.inner_radius : cfg.obstacle_radius;
  return std::max(2.0 * inner, 1.25 * form.comparability_constant());
}

}  // namespace

RunOutcome run_experiment(const ExperimentConfig& cfg,
                          const std::string& out_dir, bool verbose) {
  RunOutcome outcome;
  Json& report = outcome.report;
  report["schema_version"] = 1;
  report["name"] = cfg.name;

  try {
    fs::create_directories(out_dir);

    const double u_inf =
        cfg.scenario == Scenario::Nozzle ? 0.0 : cfg.resolved_u_infinity();

    std::unique_ptr<FlowField> field;
    std::unique_ptr<FieldSampler> oracle_field;
    const ConeDomain cone(Eigen::Vector3d::Zero(), cfg.half_angle,
                          cfg.inner_radius);
    const ExteriorDomain exterior{cfg.obstacle_radius, 3};

    switch (cfg.scenario) {
      case Scenario::Airfoil: {
        report["scenario"] = "airfoil";
        field = std::make_unique<FlowField>(solve_airfoil(
            exterior, cfg.gas, u_inf, cfg.n_r, cfg.n_theta, cfg.solver));
        break;
      }
      case Scenario::Nozzle: {
        report["scenario"] = "nozzle";
        std::function<double(double)> shape;
        if (cfg.inflow == InflowShape::Perturbed) {
          const double p = cfg.perturbation;
          const double t0 = cfg.half_angle;
          shape = [p, t0](double theta) {
            return 1.0 + p * std::cos(kPi * theta / t0);
          };
        }
        field = std::make_unique<FlowField>(
            solve_nozzle(cone, cfg.gas, cfg.mass_flux, cfg.n_r, cfg.n_theta,
                         cfg.solver, shape));
        break;
      }
      case Scenario::OracleOnly: {
        report["scenario"] = "oracle-only";
        switch (cfg.oracle_kind) {
          case OracleKind::SphereDipole:
            oracle_field = std::make_unique<SphereDipoleField>(
                u_inf, cfg.obstacle_radius,
                cfg.gas.is_compressible() ? 1.0 : cfg.gas.rho_bar());
            break;
          case OracleKind::RadialCone:
            oracle_field =
                std::make_unique<RadialConeField>(cfg.mass_flux, cone, cfg.gas);
            break;
          case OracleKind::PointSource:
            oracle_field = std::make_unique<PointSourceField>(
                cfg.mass_flux, cfg.gas.rho_bar(), cfg.obstacle_radius);
            break;
        }
        break;
      }
    }

    const FieldSampler& sampler =
        field ? static_cast<const FieldSampler&>(*field) : *oracle_field;

    if (field) {
      Json solve;
      solve["history"] = history_to_json(field->history());
      solve["max_speed"] = field->max_speed();
      const auto& mach = field->mach_nodes();
      solve["max_mach"] = *std::max_element(mach.begin(), mach.end());
      if (cfg.scenario == Scenario::Nozzle) {
        double worst = 0.0;
        for (int i = 0; i < field->mesh().n_r(); ++i) {
          worst = std::max(worst, std::abs(field->discrete_shell_flux(i) -
                                           cfg.mass_flux));
        }
        solve["flux_error"] =
            cfg.mass_flux > 0.0 ? worst / cfg.mass_flux : worst;
      }
      report["solve"] = solve;
      if (cfg.write_field_csv) field->write_csv(out_dir + "/field.csv");
    }

    const double inner = cfg.scenario == Scenario::Nozzle ? cfg.inner_radius
                                                          : cfg.obstacle_radius;
    const double shell_r0 = cfg.shell_r0 > 0.0 ? cfg.shell_r0 : 2.0 * inner;
    const std::vector<double> shells = dyadic_shells(shell_r0, cfg.shell_count);

    std::vector<CheckRow> checks;
    double oracle_error = 0.0;
    bool have_oracle_error = false;

    if (cfg.check_oracle && field) {
      CheckRow row;
      row.name = "oracle_match";
      if (cfg.scenario == Scenario::Airfoil && !cfg.gas.is_compressible()) {
        const SphereDipoleField dip(u_inf, cfg.obstacle_radius,
                                    cfg.gas.rho_bar());
        double worst = 0.0;
        const auto& mesh = field->mesh();
        for (int i = 1; i <= mesh.n_r(); ++i) {
          for (int j = 0; j <= mesh.n_theta(); ++j) {
            const double r = mesh.r(i), theta = mesh.theta(j);
            worst = std::max(
                worst, std::abs(field->phi_nodes()[mesh.idx(i, j)] -
                                dip.phi(r, theta)));
          }
        }
        oracle_error = worst;
        have_oracle_error = true;
        row.detail["quantity"] = "Linf(Phi - dipole)";
      } else if (cfg.scenario == Scenario::Nozzle &&
                 cfg.inflow == InflowShape::Radial) {
        double worst = 0.0;
        const auto& mesh = field->mesh();
        for (int i = 1; i <= mesh.n_r(); ++i) {
          const double r = mesh.r(i);
          const double q_exact =
              radial_cone_speed(cfg.mass_flux, cone, cfg.gas, r);
          for (int j = 0; j <= mesh.n_theta(); ++j) {
            const std::size_t p = mesh.idx(i, j);
            const double ur = field->u_r_nodes()[p];
            const double ut = field->u_theta_nodes()[p];
            const double q = std::sqrt(ur * ur + ut * ut);
            worst = std::max(worst, std::abs(q - q_exact) / q_exact);
          }
        }
        oracle_error = worst;
        have_oracle_error = true;
        row.detail["quantity"] = "max relative speed error vs radial flow";
      } else {
        row.detail["quantity"] = "no closed-form oracle for this scenario";
      }
      row.detail["value"] = oracle_error;
      row.detail["tolerance"] = cfg.oracle_tol;
      row.pass = !have_oracle_error || oracle_error <= cfg.oracle_tol;
      checks.push_back(row);
    }

    if (cfg.decay_speed.enabled) {
      CheckRow row;
      row.name = "decay_speed";
      const RateFit fit =
          decay_fit(sampler, DecayQuantity::SpeedError, shells);
      row.pass = judge_decay(cfg.decay_speed, fit, row.detail);
      row.detail["fit"] = rate_fit_to_json(fit);
      write_rate_csv(out_dir + "/decay_speed.csv", fit);
      checks.push_back(row);
    }

    if (cfg.decay_potential.enabled) {
      CheckRow row;
      row.name = "decay_potential";
      const RateFit fit =
          decay_fit(sampler, DecayQuantity::PotentialError, shells);
      row.pass = judge_decay(cfg.decay_potential, fit, row.detail);
      row.detail["fit"] = rate_fit_to_json(fit);
      write_rate_csv(out_dir + "/decay_potential.csv", fit);
      checks.push_back(row);
    }

    if (cfg.check_multipole) {
      CheckRow row;
      row.name = "multipole";
      const MultipoleCoefficients coeffs = multipole_extract(sampler);
      row.detail["coefficients"] = multipole_to_json(coeffs);
      const double g1_exact =
          -u_inf * std::pow(cfg.obstacle_radius, 3) / 2.0;
      row.detail["g1_exact"] = g1_exact;
      bool ok = std::abs(coeffs.G) <= cfg.multipole_g_tol;
      ok = ok && std::abs(coeffs.G_i(0) - g1_exact) <=
                     cfg.multipole_g1_rel_tol * std::abs(g1_exact);
      ok = ok && std::abs(coeffs.G_i(1)) <= cfg.multipole_small_tol &&
           std::abs(coeffs.G_i(2)) <= cfg.multipole_small_tol;
      ok = ok && coeffs.G_ij.cwiseAbs().maxCoeff() <= cfg.multipole_small_tol;
      const double floor = have_oracle_error ? 2.0 * oracle_error : 0.0;
      const RateFit resid =
          expansion_residual_fit(sampler, coeffs, shells, 128, floor);
      row.detail["expansion_residual"] = rate_fit_to_json(resid);
      write_rate_csv(out_dir + "/expansion_residual.csv", resid);
      const bool resid_ok = resid.exact || resid.noise_floor ||
                            resid.exponent >= cfg.expansion_min_exponent;
      row.detail["expansion_min_exponent"] = cfg.expansion_min_exponent;
      row.pass = ok && resid_ok && !coeffs.accuracy_warning;
      checks.push_back(row);
    }

    if (cfg.check_barrier) {
      CheckRow row;
      row.name = "barrier";
      Vec u_vec = Vec::Zero(3);
      u_vec(0) = u_inf;
      const EllipticCoeffs a_inf = coeffs_at_infinity(u_vec, cfg.gas);
      const QuadraticForm form =
          QuadraticForm::from_coeffs(a_inf, Vec::Zero(3));
      ComparisonFunction cmp{form, 0.5};
      BarrierCheckConfig bcfg;
      bcfg.r_prime = auto_r_prime(cfg, form);
      const BarrierReport barrier = barrier_sign_check(sampler, cmp, bcfg);
      row.detail["barrier"] = barrier_report_to_json(barrier);
      row.pass = barrier.pass;
      if (cfg.scenario == Scenario::Nozzle ||
          (cfg.scenario == Scenario::OracleOnly &&
           cfg.oracle_kind == OracleKind::RadialCone)) {
        const auto orth = cone_orthogonality_check(cone, form);
        row.detail["cone_orthogonality_max"] = orth.max_abs;
        row.detail["cone_orthogonality_tol"] = cfg.cone_orthogonality_tol;
        row.pass = row.pass && orth.max_abs <= cfg.cone_orthogonality_tol;
      }
      checks.push_back(row);
    }

    if (cfg.check_optimality) {
      CheckRow row;
      row.name = "optimality";
      std::vector<double> usable;
      for (double r : shells) {
        if (r >= inner && r <= sampler.r_resolved()) usable.push_back(r);
      }
      const OptimalityReport cert = optimality_certificate(
          sampler, cone, cfg.mass_flux, usable, cfg.conservation_tol);
      row.detail["certificate"] = optimality_report_to_json(cert);
      row.pass = cert.conservation_pass && cert.margin_pass;
      checks.push_back(row);
    }

    if (cfg.check_lemma21) {
      CheckRow row;
      row.name = "lemma21";
      const Lemma21Suite suite = run_lemma21_suite(cfg.lemma21_samples);
      row.detail["max_identity_residual"] = suite.max_identity_residual;
      row.detail["max_lpsi_residual"] = suite.max_lpsi_residual;
      row.detail["planted_exponent"] = suite.planted_exponent;
      row.detail["tolerance"] = cfg.lemma21_tol;
      row.detail["planted_min"] = cfg.lemma21_planted_min;
      row.pass = suite.max_identity_residual <= cfg.lemma21_tol &&
                 suite.max_lpsi_residual <= cfg.lemma21_tol &&
                 suite.planted_exponent >= cfg.lemma21_planted_min;
      checks.push_back(row);
    }

    bool all_pass = true;
    Json check_json = Json::array();
    for (const auto& row : checks) {
      all_pass = all_pass && row.pass;
      Json j = row.detail;
      j["name"] = row.name;
      j["pass"] = row.pass;
      check_json.push_back(j);
      if (verbose) print_check(row);
    }
    report["checks"] = check_json;
    report["pass"] = all_pass;
    outcome.status = all_pass ? kStatusPass : kStatusCheckFailed;
  } catch (const ConfigurationError& err) {
    report["error"] = err.what();
    report["pass"] = false;
    outcome.status = kStatusConfigError;
  } catch (const std::invalid_argument& err) {
    report["error"] = err.what();
    report["pass"] = false;
    outcome.status = kStatusConfigError;
  } catch (const std::exception& err) {
    report["error"] = err.what();
    report["pass"] = false;
    outcome.status = kStatusSolverError;
  }

  try {
    write_json_file(out_dir + "/report.json", report);
  } catch (const std::exception&) {
    // out_dir may be invalid when the config error was about paths
  }
  return outcome;
}

int run_sweep(const ConfigMap& base, const std::string& parameter,
              const std::vector<std::string>& values,
              const std::string& out_dir, int workers, bool verbose) {
  if (values.empty()) {
    throw ConfigurationError("sweep: empty value list");
  }
  if (!is_known_config_key(parameter)) {
    throw ConfigurationError("sweep: unknown parameter '" + parameter + "'");
  }
  fs::create_directories(out_dir);

  struct Row {
    std::string value;
    int status = 0;
    std::string error;
    Json report;
  };
  std::vector<Row> rows(values.size());

  const auto run_one = [&](std::size_t k) {
    Row row;
    row.value = values[k];
    ConfigMap map = base;
    map[parameter] = values[k];
    try {
      const ExperimentConfig cfg = build_experiment_config(map);
      RunOutcome sub = run_experiment(
          cfg, out_dir + "/sweep_" + std::to_string(k), verbose && workers <= 1);
      row.status = sub.status;
      row.report = std::move(sub.report);
      if (row.report.contains("error")) {
        row.error = row.report["error"].get<std::string>();
      }
    } catch (const std::exception& err) {
      row.status = kStatusConfigError;
      row.error = err.what();
    }
    rows[k] = std::move(row);
  };

  if (workers <= 1) {
    for (std::size_t k = 0; k < values.size(); ++k) run_one(k);
  } else {
    for (std::size_t start = 0; start < values.size();
         start += static_cast<std::size_t>(workers)) {
      std::vector<std::future<void>> batch;
      const std::size_t stop =
          std::min(values.size(), start + static_cast<std::size_t>(workers));
      for (std::size_t k = start; k < stop; ++k) {
        batch.push_back(std::async(std::launch::async, run_one, k));
      }
      for (auto& f : batch) f.get();
    }
  }

  const auto check_value = [](const Json& report, const char* name,
                              const char* key) -> std::string {
    if (!report.contains("checks")) return "";
    for (const auto& c : report["checks"]) {
      if (c["name"] == name && c.contains(key)) return c[key].dump();
    }
    return "";
  };

  std::ofstream csv(out_dir + "/sweep.csv");
  csv << "value,status,oracle_error,decay_speed_exponent,"
         "decay_potential_exponent,picard_iterations,error\n";
  bool all_pass = true;
  for (const auto& row : rows) {
    all_pass = all_pass && row.status == kStatusPass;
    std::string iters;
    if (row.report.contains("solve")) {
      iters = row.report["solve"]["history"]["iterations"].dump();
    }
    csv << row.value << ',' << row.status << ','
        << check_value(row.report, "oracle_match", "value") << ','
        << check_value(row.report, "decay_speed", "exponent") << ','
        << check_value(row.report, "decay_potential", "exponent") << ','
        << iters << ",\"" << row.error << "\"\n";
  }
  return all_pass ? kStatusPass : kStatusCheckFailed;
}

}  // namespace farflow
