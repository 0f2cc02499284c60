#include "cgramap/commands.hpp"

#include <cstdlib>
#include <filesystem>

#include <fmt/format.h>

#include "cgramap/bench.hpp"
#include "cgramap/errors.hpp"
#include "cgramap/pipeline.hpp"
#include "cgramap/scheduling.hpp"
#include "cgramap/smtlib.hpp"
#include "cgramap/timesolver.hpp"
#include "cgramap/validator.hpp"

namespace cgramap {

namespace {

void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) {
    out << text;
  } else {
    write_file(path, text);
  }
}

}  // namespace

RunConfig load_run_config(const std::string& config_path, const CliOverrides& o) {
  std::string path = config_path;
  if (path.empty()) {
    if (const char* env = std::getenv(kConfigEnvVar); env && *env) path = env;
  }
  RunConfig c = path.empty() ? RunConfig{} : parse_config(read_file(path));
  if (o.rows) c.cgra.rows = *o.rows;
  if (o.cols) c.cgra.cols = *o.cols;
  if (o.ii_max) c.ii_max = *o.ii_max;
  if (o.retry_cap) c.retry_cap = *o.retry_cap;
  if (o.time_budget) c.time_budget = *o.time_budget;
  if (o.space_budget) c.space_budget = *o.space_budget;
  if (o.seed) c.seed = *o.seed;
  if (o.time_policy) c.time_policy = parse_time_policy(*o.time_policy);
  if (o.degree_policy) c.cgra.degree_policy = parse_degree_policy(*o.degree_policy);
  if (c.time_budget <= 0 || c.space_budget <= 0) throw InputError("budgets must be positive");
  if (c.ii_max && *c.ii_max < 1) throw InputError("--ii-max must be positive");
  c.cgra.validate();
  return c;
}

int cmd_map(const std::string& dfg_path, const std::string& config_path, const std::string& out_path,
            const CliOverrides& overrides, bool timings, std::ostream& out, std::ostream& err) {
  try {
    const RunConfig config = load_run_config(config_path, overrides);
    const Dfg dfg = parse_dfg(read_file(dfg_path));
    const MapOutcome outcome = map_kernel(dfg, config.cgra, config.map_options());
    emit(out_path, mapping_to_json(outcome, dfg, config, timings), out);
    if (!outcome.ok()) {
      err << fmt::format("mapping failed: {} (mII {}, tried up to II {})\n", to_string(outcome.failure), outcome.mii,
                         outcome.stats.iis_tried.empty() ? outcome.mii : outcome.stats.iis_tried.back());
      return kExitFailure;
    }
    return outcome.result->report.valid() ? kExitOk : kExitFailure;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const StructuralError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }
}

int cmd_emit_smt(const std::string& dfg_path, const std::string& config_path, int ii, const CliOverrides& overrides,
                 std::ostream& out, std::ostream& err) {
  try {
    if (ii < 1) throw InputError("--ii must be positive");
    const RunConfig config = load_run_config(config_path, overrides);
    const Dfg dfg = parse_dfg(read_file(dfg_path));
    const auto kms = build_kms(mobility_schedule(dfg), ii);
    out << emit_smtlib(encode(kms, dfg, config.cgra));
    return kExitOk;
  } catch (const UnsatForThisIi& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  } catch (const std::runtime_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }
}

int cmd_bench(const std::string& suite_dir, const std::string& config_path, const std::string& out_csv,
              const CliOverrides& overrides, std::ostream& err) {
  try {
    const RunConfig config = load_run_config(config_path, overrides);
    const auto suite = load_suite(suite_dir);
    const auto rows = run_bench(suite, config);
    write_file(out_csv, report_rows_to_csv(rows));
    std::filesystem::path table(out_csv);
    table.replace_extension();
    write_file(table.string() + "_grid.csv", grid_time_table(rows, config.grids));
    for (const auto& b : suite) {
      if (!b.dfg) err << fmt::format("warning: {}: {}\n", b.name, b.load_error);
    }
    return kExitOk;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }
}

int cmd_gen(const RandomDfgParams& params, const std::string& out_path, std::ostream& out, std::ostream& err) {
  try {
    emit(out_path, dfg_to_json(random_dfg(params)), out);
    return kExitOk;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }
}

int cmd_validate(const std::string& dfg_path, const std::string& config_path, const std::string& mapping_path,
                 const std::string& out_path, const CliOverrides& overrides, std::ostream& out, std::ostream& err) {
  try {
    const RunConfig config = load_run_config(config_path, overrides);
    const Dfg dfg = parse_dfg(read_file(dfg_path));
    const MappingFile m = parse_mapping(read_file(mapping_path), config.cgra);
    if (m.image.size() != dfg.size()) {
      throw InputError(fmt::format("mapping covers {} nodes, DFG has {}", m.image.size(), dfg.size()));
    }
    const auto report = validate_all(dfg, config.cgra, m.ii, m.time, m.image, config.time_policy);
    emit(out_path, report_to_json(report), out);
    return report.valid() ? kExitOk : kExitFailure;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }
}

}  // namespace cgramap
