#include "cgramap/bench.hpp"

#include <algorithm>
#include <filesystem>
#include <map>

#include <fmt/format.h>

#include "cgramap/errors.hpp"
#include "cgramap/pipeline.hpp"

namespace cgramap {

std::vector<Benchmark> load_suite(const std::string& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw InputError(fmt::format("{} is not a directory", dir));
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<Benchmark> suite;
  for (const auto& f : files) {
    Benchmark b;
    b.name = f.stem().string();
    try {
      b.dfg = parse_dfg(read_file(f.string()));
    } catch (const std::exception& e) {
      b.load_error = e.what();
    }
    suite.push_back(std::move(b));
  }
  return suite;
}

BenchRow run_bench_case(const Benchmark& bench, const RunConfig& config, int rows, int cols) {
  BenchRow row;
  row.name = bench.name;
  row.rows = rows;
  row.cols = cols;
  row.seed = config.seed;
  if (!bench.dfg) {
    row.verdict = "ERR";
    return row;
  }
  row.dfg_nodes = static_cast<int>(bench.dfg->size());
  CgraConfig grid = config.cgra;
  grid.rows = rows;
  grid.cols = cols;
  try {
    const MapOutcome out = map_kernel(*bench.dfg, grid, config.map_options());
    row.mii = out.mii;
    row.time_seconds = out.stats.time_seconds;
    row.space_seconds = out.stats.space_seconds;
    row.total_seconds = out.stats.total_seconds;
    row.time_solutions = out.stats.time_solutions_tried;
    if (out.ok()) {
      row.ii = out.result->ii;
      row.verdict = "OK";
    } else {
      row.verdict = out.failure == FailureKind::UnsatAtIiMax ? "FAIL" : "TO";
    }
  } catch (const std::exception&) {
    row.verdict = "ERR";
  }
  return row;
}

std::vector<BenchRow> run_bench(const std::vector<Benchmark>& suite, const RunConfig& config) {
  std::vector<BenchRow> rows;
  for (const auto& b : suite) {
    for (auto [r, c] : config.grids) rows.push_back(run_bench_case(b, config, r, c));
  }
  return rows;
}

std::string grid_time_table(const std::vector<BenchRow>& rows, const std::vector<std::pair<int, int>>& grids) {
  std::string out = "name";
  for (auto [r, c] : grids) out += fmt::format(",{}x{}", r, c);
  out += "\n";
  std::vector<std::string> names;
  std::map<std::string, std::map<std::pair<int, int>, std::string>> cells;
  for (const auto& row : rows) {
    if (std::find(names.begin(), names.end(), row.name) == names.end()) names.push_back(row.name);
    cells[row.name][{row.rows, row.cols}] =
        row.verdict == "OK" ? fmt::format("{:.3f}", row.total_seconds) : row.verdict;
  }
  for (const auto& name : names) {
    out += csv_field(name);
    for (const auto& g : grids) {
      const auto it = cells[name].find(g);
      out += "," + (it == cells[name].end() ? std::string("") : it->second);
    }
    out += "\n";
  }
  return out;
}

}  // namespace cgramap
