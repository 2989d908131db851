#include "farflow/report.hpp"

#include <cmath>
#include <fstream>

namespace farflow {

Json rate_fit_to_json(const RateFit& fit) {
  Json j;
  j["exponent"] = fit.exponent;
  j["intercept"] = fit.intercept;
  j["stderr_slope"] = fit.stderr_slope;
  j["radii"] = fit.radii;
  j["sup_values"] = fit.sup_values;
  j["n_excluded_zero"] = fit.n_excluded_zero;
  j["exact"] = fit.exact;
  j["noise_floor"] = fit.noise_floor;
  if (fit.noise_floor) j["noise_floor_value"] = fit.noise_floor_value;
  return j;
}

Json barrier_report_to_json(const BarrierReport& report) {
  Json j;
  j["c1"] = report.c1;
  j["r_prime"] = report.r_prime;
  j["tolerance"] = report.tolerance;
  j["max_h_plus"] = report.max_h_plus;
  j["max_h_minus"] = report.max_h_minus;
  j["min_subsolution"] = report.min_subsolution;
  j["subsolution_tolerance"] = report.subsolution_tolerance;
  j["subsolution_pass"] = report.subsolution_pass;
  j["n_samples"] = report.n_samples;
  j["n_subsolution_samples"] = report.n_subsolution_samples;
  j["pass"] = report.pass;
  return j;
}

Json optimality_report_to_json(const OptimalityReport& report) {
  Json j;
  j["m"] = report.m;
  j["lambda_upper"] = report.lambda_upper;
  j["conservation_tolerance"] = report.conservation_tolerance;
  j["conservation_pass"] = report.conservation_pass;
  j["margin_pass"] = report.margin_pass;
  j["vacuous"] = report.vacuous;
  Json shells = Json::array();
  for (const auto& s : report.shells) {
    shells.push_back({{"radius", s.radius},
                      {"flux", s.flux},
                      {"flux_rel_error", s.flux_rel_error},
                      {"best_theta", s.best_theta},
                      {"lower_bound", s.lower_bound},
                      {"margin", s.margin}});
  }
  j["shells"] = shells;
  return j;
}

Json multipole_to_json(const MultipoleCoefficients& coeffs) {
  Json j;
  j["G"] = coeffs.G;
  j["G_i"] = std::vector<double>(coeffs.G_i.data(),
                                 coeffs.G_i.data() + coeffs.G_i.size());
  Json gij = Json::array();
  for (int i = 0; i < coeffs.G_ij.rows(); ++i) {
    std::vector<double> row(coeffs.G_ij.cols());
    for (int k = 0; k < coeffs.G_ij.cols(); ++k) row[k] = coeffs.G_ij(i, k);
    gij.push_back(row);
  }
  j["G_ij"] = gij;
  j["normalization"] = coeffs.normalization;
  j["net_flux"] = coeffs.net_flux;
  j["flux_violation"] = coeffs.flux_violation;
  j["richardson_rel_error"] = coeffs.richardson_rel_error;
  j["accuracy_warning"] = coeffs.accuracy_warning;
  return j;
}

Json history_to_json(const PicardHistory& history) {
  Json j;
  j["iterations"] = history.update_norms.size();
  j["update_norms"] = history.update_norms;
  j["linear_residuals"] = history.linear_residuals;
  j["total_linear_iterations"] = history.total_linear_iterations;
  j["converged"] = history.converged;
  return j;
}

void write_rate_csv(const std::string& path, const RateFit& fit) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "r,sup_value,log_r,log_sup\n";
  for (std::size_t k = 0; k < fit.radii.size(); ++k) {
    out << fit.radii[k] << ',' << fit.sup_values[k] << ','
        << std::log(fit.radii[k]) << ',' << std::log(fit.sup_values[k])
        << '\n';
  }
}

void write_json_file(const std::string& path, const Json& value) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << value.dump(2) << '\n';
}

}  // namespace farflow
