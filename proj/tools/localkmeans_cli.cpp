// Command-line driver: runs one or more LocalKMeans variants over seeded trials
// and writes raw and summary CSV files.
//
// Exit codes: 0 success, 1 configuration error, 2 I/O error.

#include <array>
#include <cstdlib>
#include <iostream>

#include "CLI11.hpp"
#include "localkmeans/localkmeans.hpp"

namespace {

constexpr int kConfigError = 1;
constexpr int kIoError = 2;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LocalKMeans experiment harness"};

  std::string config_path;
  app.add_option("--config", config_path, "key=value config file; flags override its entries");

  // Flag, config key, help. Values stay strings until the config is built.
  const std::vector<std::array<std::string, 3>> flags = {{
      {"--mode", "mode", "local|central|noagg|sym2, comma list to compare"},
      {"--L", "L", "local steps per round, comma list; T/2 allowed"},
      {"--iters", "iters", "total iterations T"},
      {"--trials", "trials", "number of seeded trials"},
      {"--seed", "seed", "base seed; trial i uses seed + i"},
      {"--d", "d", "dimension"},
      {"--K", "K", "number of clusters"},
      {"--m", "m", "number of machines"},
      {"--n", "n", "points per machine (synthetic data)"},
      {"--snr", "snr", "target SNR r; sets sigma"},
      {"--sigma", "sigma", "noise standard deviation"},
      {"--init", "init", "kmpp|perturb|file"},
      {"--rho", "rho", "perturbation scale for init=perturb"},
      {"--data", "data", "CSV file of points"},
      {"--label-col", "label-col", "0-based label column in the CSV"},
      {"--out", "out", "output directory"},
      {"--record-every", "record-every", "metric cadence in iterations"},
      {"--center-scale", "center-scale", "norm of the true centers"},
      {"--init-file", "init-file", "CSV of initial centers for init=file"},
      {"--score", "score", "seeding score: squared|plain"},
      {"--csv-header", "csv-header", "true if the CSV has a header row"},
      {"--threads", "threads", "worker threads for trials"},
  }};
  std::map<std::string, std::string> values;
  for (const auto& [flag, key, help] : flags) app.add_option(flag, values[key], help);
  bool dump = false;
  app.add_flag("--dump-config", dump, "print the resolved configuration and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }

  try {
    localkmeans::ConfigMap map;
    if (!config_path.empty()) {
      try {
        map = localkmeans::load_config_file(config_path);
      } catch (const localkmeans::ParseError& e) {
        std::cerr << "config error: " << config_path << ": " << e.what() << '\n';
        return kConfigError;
      }
    }
    if (const char* env = std::getenv("LOCALKMEANS_SEED")) map["seed"] = env;
    for (const auto& [flag, key, help] : flags)
      if (app.count(flag) > 0) map[key] = values[key];

    const auto configs = localkmeans::build_experiments(map);
    if (dump) {
      for (const auto& c : configs) std::cout << localkmeans::to_config_text(c) << '\n';
      return 0;
    }
    const auto results = configs.size() == 1
                             ? std::vector{localkmeans::run_experiment(configs.front())}
                             : localkmeans::compare_modes(configs);
    for (const auto& r : results) {
      const auto& last = r.summary.final_row();
      std::cout << r.config.label() << ": t=" << last.t;
      if (last.has_truth) std::cout << " A_aligned=" << last.mean[1] << " (std " << last.stddev[1] << ")";
      std::cout << " objective=" << last.mean[5] << " rounds=" << last.mean[6] << '\n';
    }
    return 0;
  } catch (const localkmeans::IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kIoError;
  } catch (const localkmeans::ParseError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kIoError;
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  }
}
