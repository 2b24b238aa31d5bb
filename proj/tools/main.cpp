#include <cstdint>
#include <cstdio>
#include <string>

#include "CLI11.hpp"

#include "catldp/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"simulation and verification bench for a compound growth process "
               "with almost-uniform catastrophes"};
  app.set_version_flag("--version", catldp::cli::kToolVersion);
  app.require_subcommand(1);

  struct {
    const char* name;
    const char* help;
  } const kinds[] = {
      {"simulate", "draw one path and write it as CSV"},
      {"rate", "evaluate the large-deviation rate of a target function"},
      {"tube", "Monte Carlo probability of staying eps-close to a target"},
      {"slope", "fit the exponential decay of tube probabilities across horizons"},
      {"maxgrowth", "frequency of the running max beating eps*T^b"},
      {"equivalence", "compare all three samplers against the exact law"},
      {"bounds", "check the chain moment bound and the clock lower-tail bound"},
      {"plotdata", "flatten a run directory into plot-ready series"},
  };

  std::string config_path, out_dir, input_dir;
  std::uint64_t seed = 0;
  int workers = 0;
  for (const auto& k : kinds) {
    CLI::App* sub = app.add_subcommand(k.name, k.help);
    auto* copt = sub->add_option("--config", config_path, "JSON config file");
    if (std::string(k.name) != "plotdata") copt->required();
    sub->add_option("--seed", seed, "override the config seed");
    sub->add_option("--workers", workers, "worker threads (0 = hardware)")
        ->check(CLI::NonNegativeNumber);
    sub->add_option("--out", out_dir, "output directory");
    if (std::string(k.name) == "plotdata")
      sub->add_option("--input", input_dir, "run directory to read");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : catldp::cli::kExitConfig;
  }

  CLI::App* sub = app.get_subcommands().front();
  catldp::cli::CliOverrides ov;
  if (sub->count("--seed")) ov.seed = seed;
  if (sub->count("--workers")) ov.workers = workers;
  if (sub->count("--out")) ov.out_dir = out_dir;
  if (sub->get_name() == "plotdata" && sub->count("--input")) ov.input_dir = input_dir;

  try {
    return catldp::cli::run(sub->get_name(), config_path, ov);
  } catch (const catldp::cli::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return catldp::cli::kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return catldp::cli::kExitRuntime;
  }
}
