// Command-line front end: map, emit-smt, bench, gen, validate.

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "cgramap/commands.hpp"

namespace {

void add_override_flags(CLI::App* cmd, cgramap::CliOverrides& o) {
  cmd->add_option("--rows", o.rows, "Grid rows")->check(CLI::PositiveNumber);
  cmd->add_option("--cols", o.cols, "Grid columns")->check(CLI::PositiveNumber);
  cmd->add_option("--ii-max", o.ii_max, "Last II of the sweep")->check(CLI::PositiveNumber);
  cmd->add_option("--time-budget", o.time_budget, "Time-phase budget in seconds")->check(CLI::PositiveNumber);
  cmd->add_option("--space-budget", o.space_budget, "Space-phase budget in seconds")->check(CLI::PositiveNumber);
  cmd->add_option("--retry-cap", o.retry_cap, "Extra time solutions per II (negative: unlimited)");
  cmd->add_option("--seed", o.seed, "Seed recorded in reports");
  cmd->add_option("--time-policy", o.time_policy, "persistent_modular | consecutive_only");
  cmd->add_option("--degree-policy", o.degree_policy, "paper_max | conservative_min");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"CGRA mapper: decoupled time (KMS constraint solving) and space (MRRG monomorphism) search"};
  app.require_subcommand(1);

  cgramap::CliOverrides overrides;
  std::string dfg_path, config_path, out_path, mapping_path, suite_dir;
  bool timings = false;
  int ii = 1;

  auto* map = app.add_subcommand("map", "Map a DFG onto the CGRA and write the mapping as JSON");
  map->add_option("dfg", dfg_path, "DFG JSON file")->required();
  map->add_option("-c,--config", config_path, "Config JSON (default: $CGRAMAP_CONFIG)");
  map->add_option("-o,--out", out_path, "Output file (default: stdout)");
  map->add_flag("--timings", timings, "Include wall-clock phase times");
  add_override_flags(map, overrides);

  auto* smt = app.add_subcommand("emit-smt", "Print the SMT-LIB2 time model for one II");
  smt->add_option("dfg", dfg_path, "DFG JSON file")->required();
  smt->add_option("-c,--config", config_path, "Config JSON (default: $CGRAMAP_CONFIG)");
  smt->add_option("--ii", ii, "Iteration interval")->required()->check(CLI::PositiveNumber);
  add_override_flags(smt, overrides);

  auto* bench = app.add_subcommand("bench", "Map every DFG of a directory on every configured grid");
  bench->add_option("suite", suite_dir, "Directory of DFG JSON files")->required();
  bench->add_option("-c,--config", config_path, "Config JSON (default: $CGRAMAP_CONFIG)");
  bench->add_option("-o,--out", out_path, "Report CSV")->required();
  add_override_flags(bench, overrides);

  cgramap::RandomDfgParams params;
  auto* gen = app.add_subcommand("gen", "Generate a random DFG");
  gen->add_option("--seed", params.seed, "Generator seed");
  gen->add_option("--nodes", params.nodes, "Node count")->check(CLI::PositiveNumber);
  gen->add_option("--edge-prob", params.data_edge_prob, "Data edge probability")->check(CLI::Range(0.0, 1.0));
  gen->add_option("--backedges", params.backedges, "Loop-carried edges")->check(CLI::NonNegativeNumber);
  gen->add_option("-o,--out", out_path, "Output file (default: stdout)");

  auto* validate = app.add_subcommand("validate", "Check a mapping file against a DFG");
  validate->add_option("dfg", dfg_path, "DFG JSON file")->required();
  validate->add_option("mapping", mapping_path, "Mapping JSON written by `map`")->required();
  validate->add_option("-c,--config", config_path, "Config JSON (default: $CGRAMAP_CONFIG)");
  validate->add_option("-o,--out", out_path, "Report output (default: stdout)");
  add_override_flags(validate, overrides);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cgramap::kExitInputError;
  }

  if (*map) return cgramap::cmd_map(dfg_path, config_path, out_path, overrides, timings, std::cout, std::cerr);
  if (*smt) return cgramap::cmd_emit_smt(dfg_path, config_path, ii, overrides, std::cout, std::cerr);
  if (*bench) return cgramap::cmd_bench(suite_dir, config_path, out_path, overrides, std::cerr);
  if (*gen) return cgramap::cmd_gen(params, out_path, std::cout, std::cerr);
  if (*validate) {
    return cgramap::cmd_validate(dfg_path, config_path, mapping_path, out_path, overrides, std::cout, std::cerr);
  }
  return cgramap::kExitInputError;
}
