#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#ifdef ROTSTAR_HAVE_OPENMP
#include <omp.h>
#endif

#include "commands.hpp"
#include "config.hpp"
#include "rotstar/errors.hpp"

int main(int argc, char** argv) {
  namespace cli = rotstar::cli;
  CLI::App app{"Rotating gaseous star equilibria on ellipsoidally symmetric densities"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  app.add_option("--config", config_path, "JSON run configuration")->required();
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--seed", seed, "random seed (overrides the config)");
  app.add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);

  auto* check = app.add_subcommand("check", "verify the structural conditions");
  auto* solve = app.add_subcommand("solve", "compute an equilibrium");
  auto* scan = app.add_subcommand("scan-b", "scan the minimum energy over the ellipticity");
  auto* validate = app.add_subcommand("validate", "run the oracle cross-checks");
  auto* energy = app.add_subcommand("energy", "evaluate the energy of a stored profile");
  std::string profile_path;
  energy->add_option("profile", profile_path, "profile CSV")->required();
  app.fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

#ifdef ROTSTAR_HAVE_OPENMP
  if (threads) omp_set_num_threads(*threads);
#endif

  try {
    auto config = cli::load_config(config_path);
    if (seed) config.seed = *seed;
    const std::filesystem::path out(out_dir);
    if (check->parsed()) return cli::cmd_check(config, out, std::cout);
    if (solve->parsed()) return cli::cmd_solve(config, out, std::cout);
    if (scan->parsed()) return cli::cmd_scan_b(config, out, std::cout);
    if (validate->parsed()) return cli::cmd_validate(config, out, std::cout);
    if (energy->parsed()) return cli::cmd_energy(config, profile_path, out, std::cout);
  } catch (const cli::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const rotstar::UnsolvableConstraint& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const rotstar::EvaluationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
