#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cgramap/model.hpp"
#include "cgramap/pipeline.hpp"
#include "cgramap/validator.hpp"

namespace cgramap {

// ---------------------------------------------------------------------------
// DFG files
//
//   {"nodes": [{"id": 0, "op": "add", "latency": 1}, ...],
//    "edges": [{"src": 0, "dst": 1, "kind": "data"|"loop", "distance": 1}, ...]}
//
// "latency" and "distance" are optional. Latency must be 1; loop-carried
// distance must be 1. Unknown keys are rejected with their JSON pointer.
// ---------------------------------------------------------------------------

Dfg parse_dfg(const std::string& text);
std::string dfg_to_json(const Dfg& dfg);

// ---------------------------------------------------------------------------
// Run configuration
// ---------------------------------------------------------------------------

struct RunConfig {
  CgraConfig cgra;
  TimePolicy time_policy = TimePolicy::PersistentModular;
  double time_budget = 4000.0;   // seconds
  double space_budget = 4000.0;  // seconds
  int retry_cap = 64;
  std::uint64_t seed = 1;
  std::optional<int> ii_max;
  /// Grid sizes swept by `bench`.
  std::vector<std::pair<int, int>> grids{{2, 2}, {5, 5}, {10, 10}, {20, 20}};

  MapOptions map_options() const;

  friend bool operator==(const RunConfig& a, const RunConfig& b);
};

RunConfig parse_config(const std::string& text);
std::string config_to_json(const RunConfig& config);

// ---------------------------------------------------------------------------
// Mapping output
// ---------------------------------------------------------------------------

/// `include_timings` adds the wall-clock stats, which makes the output
/// differ run to run.
std::string mapping_to_json(const MapOutcome& outcome, const Dfg& dfg, const RunConfig& config, bool include_timings);

/// What `validate` needs from a mapping file.
struct MappingFile {
  int ii = 1;
  TimeSolution time;
  std::vector<VertexId> image;
};

MappingFile parse_mapping(const std::string& text, const CgraConfig& grid);

std::string report_to_json(const ValidationReport& report);

// ---------------------------------------------------------------------------
// Benchmark report (CSV and JSON)
// ---------------------------------------------------------------------------

struct BenchRow {
  std::string name;
  int rows = 0;
  int cols = 0;
  int dfg_nodes = 0;
  int mii = 0;
  std::optional<int> ii;  // empty when no mapping was found
  double time_seconds = 0.0;
  double space_seconds = 0.0;
  double total_seconds = 0.0;
  std::string verdict;  // OK, TO, FAIL, ERR
  int time_solutions = 0;
  std::uint64_t seed = 0;

  friend bool operator==(const BenchRow&, const BenchRow&) = default;
};

/// Fixed header of the report CSV.
extern const char* const kReportCsvHeader;

/// Quotes a CSV cell when it contains a comma, quote or newline.
std::string csv_field(const std::string& text);

std::string report_rows_to_csv(const std::vector<BenchRow>& rows);
std::vector<BenchRow> parse_report_csv(const std::string& text);
std::string report_rows_to_json(const std::vector<BenchRow>& rows);
std::vector<BenchRow> parse_report_json(const std::string& text);

// ---------------------------------------------------------------------------

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

TimePolicy parse_time_policy(const std::string& name);
DegreePolicy parse_degree_policy(const std::string& name);

}  // namespace cgramap
