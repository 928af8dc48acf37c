// Command-line driver for the potential-theory toolkit: reproducible named
// scenarios with key=value configs, seeded runs and CSV/JSON outputs.

#include <cstdio>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "ptk/experiments.hpp"

int main(int argc, char** argv) {
  CLI::App app{"ptk: computational potential theory toolkit"};
  app.require_subcommand(1);

  std::string scenario;
  std::string config_path;
  std::string out_dir = "out";
  std::uint64_t seed = 0;
  bool seed_given = false;

  CLI::App* run = app.add_subcommand("run", "execute a scenario");
  run->add_option("scenario", scenario, "scenario name")->required();
  run->add_option("--config", config_path, "key=value config file");
  run->add_option("--out", out_dir, "output directory");
  run->add_option("--seed", seed, "seed (config file takes precedence)")
      ->each([&seed_given](const std::string&) { seed_given = true; });

  std::string describe_name;
  CLI::App* describe = app.add_subcommand("describe", "print a scenario's schema");
  describe->add_option("scenario", describe_name, "scenario name")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      ptk::KvConfig config;
      if (seed_given) config.set("seed", std::to_string(seed));
      if (!config_path.empty()) {
        // Config file entries override command-line flags.
        const ptk::KvConfig from_file = ptk::KvConfig::load(config_path);
        for (const auto& [key, value] : from_file.entries()) config.set(key, value);
      }
      const ptk::RunManifest manifest = ptk::run_scenario(scenario, config, out_dir);
      std::printf("scenario %s done, config hash %s\n", scenario.c_str(),
                  manifest.config_hash.c_str());
      for (const auto& stage : manifest.stages)
        std::printf("  stage %-12s %8.3f s\n", stage.name.c_str(), stage.seconds);
      for (const auto& name : manifest.outputs)
        std::printf("  wrote %s/%s\n", out_dir.c_str(), name.c_str());
      std::printf("  wrote %s/manifest.json\n", out_dir.c_str());
      return 0;
    }
    if (describe->parsed()) {
      std::printf("%s", ptk::describe_scenario(describe_name).c_str());
      return 0;
    }
  } catch (const ptk::validation_error& err) {
    std::fprintf(stderr, "validation error: %s\n", err.what());
    return 2;
  } catch (const ptk::numeric_error& err) {
    std::fprintf(stderr, "numeric failure: %s\n", err.what());
    return 3;
  } catch (const std::exception& err) {
    std::fprintf(stderr, "error: %s\n", err.what());
    return 1;
  }
  return 0;
}
