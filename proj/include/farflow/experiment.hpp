#ifndef FARFLOW_EXPERIMENT_HPP
#define FARFLOW_EXPERIMENT_HPP

#include <string>
#include <vector>

#include "farflow/config.hpp"
#include "farflow/report.hpp"

namespace farflow {

// Exit statuses shared by the library pipeline and the CLI.
inline constexpr int kStatusPass = 0;
inline constexpr int kStatusCheckFailed = 1;
inline constexpr int kStatusConfigError = 2;
inline constexpr int kStatusSolverError = 3;

struct RunOutcome {
  int status = kStatusPass;
  Json report;
};

// Solves (if the scenario asks for one), runs every enabled check, writes
// report.json and the CSV data files into out_dir.
RunOutcome run_experiment(const ExperimentConfig& cfg,
                          const std::string& out_dir, bool verbose = false);

// Randomized identity suite for the Q-calculus: max relative residual of the
// a_inf-contraction identity, max relative L psi residual at a = a_inf, and
// the fitted decay exponent of the planted-perturbation residual (n = 3,
// sigma = 1/2, expected n + 1 + sigma).
struct Lemma21Suite {
  double max_identity_residual = 0.0;
  double max_lpsi_residual = 0.0;
  double planted_exponent = 0.0;
  int samples = 0;
};

Lemma21Suite run_lemma21_suite(int samples, unsigned seed = 20240801u);

// Per-value runs with the parameter overridden; one CSV row per value into
// out_dir/sweep.csv.  Sub-run failures are recorded per row and the sweep
// continues.
int run_sweep(const ConfigMap& base, const std::string& parameter,
              const std::vector<std::string>& values,
              const std::string& out_dir, int workers, bool verbose = false);

}  // namespace farflow

#endif  // FARFLOW_EXPERIMENT_HPP
