#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fused/cli/commands.hpp"

namespace {

void add_common(CLI::App *cmd, fused::cli::CommonOptions &o, bool with_out = true) {
  if (with_out) cmd->add_option("--out", o.out, "Output directory (overrides FUSED_OUT and the config)");
  cmd->add_option("--seed", o.seed, "Search RNG seed");
  cmd->add_option("--parallel", o.parallel, "Maximum concurrent simulations")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--pre-crash-m", o.pre_crash_m, "Pre-crash window length in seconds")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--fusion", o.fusion, "Fusion method: default|mathworks|mathworks_plus|best_sensor");
  cmd->add_flag("--overwrite", o.overwrite, "Replace an existing, non-empty output directory");
}

}  // namespace

int main(int argc, char **argv) {
  using namespace fused::cli;
  CLI::App app{"Search-based fuzzing of ADAS sensor-fusion logic"};
  app.require_subcommand(1);

  CommonOptions fuzz_o;
  std::string fuzz_config;
  auto *fuzz = app.add_subcommand("fuzz", "Run one search campaign and store every evaluation");
  fuzz->add_option("--config", fuzz_config, "Campaign config file")->required();
  fuzz->add_option("--algorithm", fuzz_o.algorithm, "Search algorithm: ga_fusion|ga|random");
  add_common(fuzz, fuzz_o);

  CommonOptions an_o;
  std::string results;
  int sanity = 0;
  auto *analyze = app.add_subcommand(
      "analyze", "Replay every stored collision with a replacement fusion and write reports");
  analyze->add_option("results", results, "Campaign directory or its results.jsonl")->required();
  analyze->add_option("--sanity", sanity, "Rerun this many collision and non-collision genomes")
      ->check(CLI::NonNegativeNumber);
  add_common(analyze, an_o);

  CommonOptions cmp_o;
  std::vector<std::string> cmp_configs, cmp_algorithms;
  auto *compare = app.add_subcommand("compare", "Run campaign variants over repeated seeds");
  compare->add_option("--config", cmp_configs, "Campaign config; repeat for more variants")
      ->required();
  compare->add_option("--algorithm", cmp_algorithms,
                      "Expand each config over these algorithms; repeatable");
  add_common(compare, cmp_o);

  CommonOptions fx_o;
  std::string fixture_name;
  auto *fixture = app.add_subcommand("fixture", "Run a packaged scenario and explain its frames");
  fixture->add_option("name", fixture_name, "Fixture name")->required();
  add_common(fixture, fx_o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kConfigError;
  }

  try {
    if (*fuzz) return cmd_fuzz(fuzz_config, fuzz_o, std::cout);
    if (*analyze) return cmd_analyze(results, an_o, sanity, std::cout);
    if (*compare) return cmd_compare(cmp_configs, cmp_algorithms, cmp_o, std::cout);
    if (*fixture) return cmd_fixture(fixture_name, fx_o, std::cout);
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
  return kOk;
}
