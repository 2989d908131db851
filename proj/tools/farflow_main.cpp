#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "farflow/experiment.hpp"

#ifndef FARFLOW_CONFIG_DIR
#define FARFLOW_CONFIG_DIR "configs"
#endif

namespace {

namespace fs = std::filesystem;

int cmd_run(const std::string& config_path, const std::string& out_dir,
            bool verbose) {
  try {
    const farflow::ExperimentConfig cfg =
        farflow::load_experiment_config(config_path);
    const farflow::RunOutcome outcome =
        farflow::run_experiment(cfg, out_dir, verbose);
    if (outcome.report.contains("error")) {
      std::cerr << "error: " << outcome.report["error"].get<std::string>()
                << '\n';
    }
    std::cout << (outcome.status == farflow::kStatusPass ? "PASS" : "FAIL")
              << "  report: " << out_dir << "/report.json\n";
    return outcome.status;
  } catch (const farflow::ConfigurationError& err) {
    std::cerr << "config error: " << err.what() << '\n';
    return farflow::kStatusConfigError;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return farflow::kStatusSolverError;
  }
}

int cmd_sweep(const std::string& config_path, const std::string& parameter,
              const std::vector<std::string>& values,
              const std::string& out_dir, int workers, bool verbose) {
  try {
    const farflow::ConfigMap base = farflow::parse_config_file(config_path);
    const int status =
        farflow::run_sweep(base, parameter, values, out_dir, workers, verbose);
    std::cout << "sweep table: " << out_dir << "/sweep.csv\n";
    return status;
  } catch (const farflow::ConfigurationError& err) {
    std::cerr << "config error: " << err.what() << '\n';
    return farflow::kStatusConfigError;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return farflow::kStatusSolverError;
  }
}

int cmd_list_configs(const std::string& dir) {
  if (!fs::is_directory(dir)) {
    std::cerr << "config error: no such directory " << dir << '\n';
    return farflow::kStatusConfigError;
  }
  std::vector<std::string> names;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.path().extension() == ".cfg") {
      names.push_back(entry.path().filename().string());
    }
  }
  std::sort(names.begin(), names.end());
  for (const auto& name : names) std::cout << name << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"farflow: subsonic potential flow far-field laboratory"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "out", parameter;
  std::string config_dir = FARFLOW_CONFIG_DIR;
  std::vector<std::string> values;
  int workers = 1;
  bool verbose = false;

  CLI::App* run = app.add_subcommand("run", "run one experiment config");
  run->add_option("--config", config_path, "experiment config file")
      ->required();
  run->add_option("--out-dir", out_dir, "output directory");
  run->add_flag("--verbose", verbose, "print one line per check");

  CLI::App* sweep =
      app.add_subcommand("sweep", "run a config across parameter values");
  sweep->add_option("--config", config_path, "experiment config file")
      ->required();
  sweep->add_option("--parameter", parameter, "config key, e.g. mesh.n_r")
      ->required();
  sweep->add_option("--values", values, "values to sweep")->required();
  sweep->add_option("--out-dir", out_dir, "output directory");
  sweep->add_option("--workers", workers, "concurrent sub-runs");
  sweep->add_flag("--verbose", verbose, "print one line per check");

  CLI::App* list = app.add_subcommand("list-configs", "list bundled configs");
  list->add_option("--config-dir", config_dir, "directory to scan");

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) return cmd_run(config_path, out_dir, verbose);
  if (sweep->parsed()) {
    return cmd_sweep(config_path, parameter, values, out_dir, workers, verbose);
  }
  return cmd_list_configs(config_dir);
}
