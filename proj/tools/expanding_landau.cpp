#include "elandau/harness.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"Landau damping in an expanding background: experiment runner"};
  std::string experiment;
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  app.add_option("experiment", experiment, "penrose | resolvent | lg_verify | linear_decay | nonlinear_sim")
      ->required();
  app.add_option("--config", config_path, "JSON config file")->required()->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "artifact directory (default: out/<experiment>)");
  app.add_option("--seed", seed, "overrides the config seed");
  CLI11_PARSE(app, argc, argv);

  elandau::json cfg;
  try {
    std::ifstream is(config_path);
    cfg = elandau::json::parse(is);
  } catch (const elandau::json::exception& e) {
    std::cerr << "error: cannot parse " << config_path << ": " << e.what() << '\n';
    return 2;
  }

  try {
    const auto res = elandau::run_experiment(experiment, cfg, out_dir, seed);
    std::cout << res.summary.dump(2) << '\n';
    if (res.exit_code != 0) return res.exit_code;
    return 0;
  } catch (const elandau::SchemaError& e) {
    std::cerr << "error: invalid config\n";
    for (const auto& f : e.fields()) std::cerr << "  " << f << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
