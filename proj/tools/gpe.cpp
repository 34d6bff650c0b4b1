#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "dgpe/cli.hpp"
#include "dgpe/config.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Spectral solver for the dipolar Gross-Pitaevskii equation"};
  app.require_subcommand(1);

  std::string config_path;
  std::string initial;
  std::string output_dir;
  dgpe::RunOptions options;

  const char* descriptions[][2] = {
      {"classify", "Print the regime tag and margin for (lambda1, lambda2)"},
      {"ground", "Compute the constrained ground state"},
      {"witness", "Evaluate the anisotropic collapse family over the epsilon sweep"},
      {"evolve", "Propagate in real time and record mass and energy"},
      {"stability", "Perturb the ground state and record the orbit distance"},
  };
  for (const auto& [name, desc] : descriptions) {
    CLI::App* sub = app.add_subcommand(name, desc);
    sub->add_option("-c,--config", config_path, "key = value configuration file")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("-o,--output-dir", output_dir, "Overrides output_dir from the config");
    if (std::string(name) == "evolve" || std::string(name) == "stability") {
      sub->add_option("-i,--initial", initial,
                      "Snapshot used as initial datum (evolve) or ground state (stability)")
          ->check(CLI::ExistingFile);
      sub->add_option("--monitor-stride", options.monitor_stride, "Steps between CSV rows")
          ->check(CLI::PositiveNumber);
    }
    if (std::string(name) == "evolve") {
      sub->add_option("--snapshot-stride", options.snapshot_stride,
                      "Steps between field snapshots (0 = none)")
          ->check(CLI::NonNegativeNumber);
    }
  }

  CLI11_PARSE(app, argc, argv);

  try {
    dgpe::RunConfig config = dgpe::load_config(config_path);
    if (!output_dir.empty()) config.output_dir = output_dir;
    if (!initial.empty()) options.initial = initial;
    const std::string sub = app.get_subcommands().front()->get_name();
    return dgpe::run(sub, config, std::cout, std::cerr, options);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return dgpe::kExitError;
  }
}
