#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

#include "cgramap/io.hpp"
#include "cgramap/random_dfg.hpp"

namespace cgramap {

/// Environment variable naming the default configuration file.
inline constexpr const char* kConfigEnvVar = "CGRAMAP_CONFIG";

enum ExitCode : int { kExitOk = 0, kExitInputError = 1, kExitFailure = 2 };

/// Command-line flags that override configuration-file values.
struct CliOverrides {
  std::optional<int> rows;
  std::optional<int> cols;
  std::optional<int> ii_max;
  std::optional<int> retry_cap;
  std::optional<double> time_budget;
  std::optional<double> space_budget;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> time_policy;
  std::optional<std::string> degree_policy;
};

/// Reads `config_path`, or the file named by CGRAMAP_CONFIG when the path is
/// empty, or built-in defaults when neither is given; then applies flags.
RunConfig load_run_config(const std::string& config_path, const CliOverrides& overrides);

// Each command returns its process exit code. Results go to `out_path`, or
// to `out` when the path is empty; diagnostics go to `err`.

int cmd_map(const std::string& dfg_path, const std::string& config_path, const std::string& out_path,
            const CliOverrides& overrides, bool timings, std::ostream& out, std::ostream& err);

int cmd_emit_smt(const std::string& dfg_path, const std::string& config_path, int ii, const CliOverrides& overrides,
                 std::ostream& out, std::ostream& err);

int cmd_bench(const std::string& suite_dir, const std::string& config_path, const std::string& out_csv,
              const CliOverrides& overrides, std::ostream& err);

int cmd_gen(const RandomDfgParams& params, const std::string& out_path, std::ostream& out, std::ostream& err);

int cmd_validate(const std::string& dfg_path, const std::string& config_path, const std::string& mapping_path,
                 const std::string& out_path, const CliOverrides& overrides, std::ostream& out, std::ostream& err);

}  // namespace cgramap
