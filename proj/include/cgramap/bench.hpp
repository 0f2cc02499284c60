#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cgramap/io.hpp"
#include "cgramap/model.hpp"

namespace cgramap {

struct Benchmark {
  std::string name;
  std::optional<Dfg> dfg;  // empty when the file failed to load
  std::string load_error;
};

/// Every *.json file of `dir`, in file-name order; names drop the extension.
std::vector<Benchmark> load_suite(const std::string& dir);

/// One report row; failures become rows with verdict TO / FAIL / ERR.
BenchRow run_bench_case(const Benchmark& bench, const RunConfig& config, int rows, int cols);

/// Every benchmark on every grid of `config.grids`, benchmark-major.
std::vector<BenchRow> run_bench(const std::vector<Benchmark>& suite, const RunConfig& config);

/// Grid size vs. total mapping time: one line per benchmark, one column per
/// grid ("TO" / "FAIL" / "ERR" instead of a time when unmapped).
std::string grid_time_table(const std::vector<BenchRow>& rows, const std::vector<std::pair<int, int>>& grids);

}  // namespace cgramap
