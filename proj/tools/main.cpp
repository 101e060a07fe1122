#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ttp/commands.hpp"
#include "ttp/config.hpp"

namespace {

void add_common(CLI::App* sub, ttp::RunManifest& mf, std::uint64_t& seed) {
  sub->add_option("-c,--config", mf.config_path, "Configuration file (key = value lines)")
      ->check(CLI::ExistingFile);
  sub->add_option("-o,--out", mf.output_path,
                  "Write the JSON report here and a TSV table to <path>.tsv");
  sub->add_option("--set", mf.overrides, "Override a configuration key (key=value); repeatable")
      ->take_all();
  sub->add_option("-w,--workers", mf.workers, "Worker threads for campaigns (0 = all cores)");
  sub->add_option("--seed", seed, "Master seed; overrides the `seed` key");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Equivalence test-then-pool: kernel MMD fusion and causality tests"};
  app.require_subcommand(1);

  ttp::RunManifest mf;
  std::uint64_t seed = 0;

  auto* test = app.add_subcommand("test", "Run equivalence (or classic) TTP on a CSV dataset");
  auto* sim = app.add_subcommand("simulate", "Run Monte Carlo campaigns over a scenario grid");
  auto* null = app.add_subcommand("null-study", "Compare null distributions with method references");
  auto* keys = app.add_subcommand("keys", "List configuration keys and their defaults");
  for (auto* sub : {test, sim, null}) add_common(sub, mf, seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return ttp::exit_code::kConfig;
  }

  if (keys->parsed()) {
    for (const auto& [key, fallback] : ttp::Config::documented_keys()) {
      std::cout << key << " = " << fallback << '\n';
    }
    return ttp::exit_code::kSuccess;
  }

  for (auto* sub : {test, sim, null}) {
    if (sub->parsed() && sub->count("--seed") > 0) mf.seed = seed;
  }
  if (test->parsed()) mf.command = ttp::Command::Test;
  if (sim->parsed()) mf.command = ttp::Command::Simulate;
  if (null->parsed()) mf.command = ttp::Command::NullStudy;
  return ttp::run_command(mf, std::cout, std::cerr);
}
