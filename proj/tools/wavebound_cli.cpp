#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

#include "wavebound/cli.hpp"
#include "wavebound/io.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Certified uniform error bounds for truncated wavelet expansions of stationary Gaussian processes"};
  app.set_version_flag("--version", std::string(WAVEBOUND_VERSION));
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::string> output_dir;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;

  const std::vector<std::pair<std::string, std::string>> subs{
      {"check", "Check the wavelet and spectral conditions"},
      {"constants", "Compute the constant ledger"},
      {"bound", "Tail bound for the configured plan"},
      {"plan", "Select a plan for the configured (u, p) target"},
      {"simulate", "Write jointly simulated sample paths as CSV"},
      {"verify", "Monte Carlo and mean-square verification of the bound"},
  };
  for (const auto& [name, help] : subs) {
    auto* sc = app.add_subcommand(name, help);
    sc->add_option("--config", config_path, "JSON run configuration")->required();
    sc->add_option("--output", output_dir, "Output directory (overrides output_dir)");
    sc->add_option("--seed", seed, "Random seed (overrides seed)");
    sc->add_option("--threads", threads, "Worker threads, 0 = all cores (overrides threads)");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : wavebound::cli::config_error;
  }
  const std::string sub = app.get_subcommands().front()->get_name();

  wavebound::RunConfig cfg;
  try {
    cfg = wavebound::load_config(config_path);
  } catch (const wavebound::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return wavebound::cli::config_error;
  }
  if (output_dir) cfg.output_dir = *output_dir;
  if (seed) cfg.seed = *seed;
  if (threads) cfg.threads = *threads;
  return wavebound::cli::run(sub, cfg);
}
