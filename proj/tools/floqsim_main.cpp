// floqsim <scenario> --config <path> [--out <dir>] [--workers k] [--override key=value ...]
//
// Exit status: 0 ok, 2 configuration error, 3 convergence failure, 1 other.

#include "floqsim/config.hpp"
#include "floqsim/error.hpp"
#include "floqsim/experiments.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitConvergence = 3;

std::string key_list() {
  std::string out;
  for (const auto& k : floqsim::config_schema()) {
    out += "  " + k.name + ": " + k.doc + "\n";
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Driven spin-chain and transmon annealing simulations"};
  app.footer("Config keys:\n" + key_list());

  std::string scenario;
  std::string config_path;
  std::string out_dir;
  int workers = 1;
  std::vector<std::string> overrides;

  app.add_option("scenario", scenario, "scenario to run")
      ->required()
      ->check(CLI::IsMember(floqsim::scenario_names()));
  app.add_option("--config", config_path, "flat key=value config file")->required();
  app.add_option("--out", out_dir, "output directory (default results/<scenario>)");
  app.add_option("--workers", workers, "worker threads for sweep points")
      ->check(CLI::Range(1, 256));
  app.add_option("--override", overrides, "key=value applied after the config file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  floqsim::ExperimentConfig cfg;
  try {
    cfg = floqsim::ExperimentConfig::load(config_path, scenario);
    for (const auto& o : overrides) cfg.apply_override(o);
  } catch (const floqsim::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
  if (out_dir.empty()) out_dir = "results/" + scenario;

  try {
    const floqsim::ResultRecord rec = floqsim::run_scenario(cfg, workers);
    floqsim::write_outputs(rec, out_dir, workers);
    std::cout << floqsim::summary_json(rec)["headline_numbers"].dump(2) << "\n";
    if (!rec.converged()) {
      std::cerr << "convergence check failed; see " << out_dir << "/summary.json\n";
      return kExitConvergence;
    }
  } catch (const floqsim::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const floqsim::ConvergenceError& e) {
    std::cerr << "convergence failure: " << e.what() << "\n";
    return kExitConvergence;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitOk;
}
