#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "ionsim/config.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Digital open-system simulator for trapped-ion stabilizer pumping"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  bool has_seed = false;
  std::uint64_t seed = 0;
  ionsim::RunOptions options;

  app.add_option("--config", config_path, "JSON experiment configuration");
  app.add_option("--seed", seed, "Override the config seed")
      ->each([&](const std::string&) { has_seed = true; });
  app.add_option("--out", out_dir, "Output directory (default from config)");
  app.add_flag("--dump-circuit", options.dump_circuit,
               "Print the experiment's primary circuit to stdout");
  app.add_flag("--refocus", options.refocus,
               "Realize subset MS gates with refocusing sequences");
  app.add_flag("--strict-phase", options.strict_phase,
               "Check identities including the global phase");

  const char* experiments[] = {"verify-identities", "coherent-evolve",
                               "pump",              "cool-toric",
                               "cool-colorcode",    "logical-demo",
                               "qnd-measure",       "noise-mc",
                               "trotter-vs-ode"};
  for (const char* name : experiments) app.add_subcommand(name)->fallthrough();

  CLI11_PARSE(app, argc, argv);

  try {
    ionsim::ExperimentConfig config;
    if (!config_path.empty()) config = ionsim::load_config(config_path);
    config.experiment = app.get_subcommands().front()->get_name();
    if (has_seed) config.seed = seed;
    if (!out_dir.empty()) config.out = out_dir;
    return ionsim::run(config, options);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "{\"error\":\"config\",\"detail\":\"%s\"}\n", e.what());
    return 2;
  }
}
