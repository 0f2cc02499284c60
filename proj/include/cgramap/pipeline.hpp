#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "cgramap/model.hpp"
#include "cgramap/timesolver.hpp"
#include "cgramap/validator.hpp"

namespace cgramap {

struct MapOptions {
  /// Upper end of the II sweep; default max(mII + 16, MobS length).
  std::optional<int> ii_max;
  /// Cumulative wall-clock budget of each phase over the whole sweep.
  Seconds time_budget{4000.0};
  Seconds space_budget{4000.0};
  /// Extra time solutions requested per II after the first one fails in
  /// space. 0 moves to the next II immediately; negative means unlimited.
  int retry_cap = 64;
  TimePolicy time_policy = TimePolicy::PersistentModular;
};

struct PlacedOp {
  PeId pe = 0;
  int slot = 0;
  int fold = 0;

  friend bool operator==(const PlacedOp&, const PlacedOp&) = default;
};

struct KernelEntry {
  PeId pe = 0;
  NodeId node = 0;

  friend bool operator==(const KernelEntry&, const KernelEntry&) = default;
};

struct MapStats {
  double time_seconds = 0.0;   // scheduling, KMS, encoding, time search
  double space_seconds = 0.0;  // MRRG build, labeling, monomorphism search, validation
  double total_seconds = 0.0;
  int time_solutions_tried = 0;
  int space_attempts = 0;
  bool time_timeout = false;
  bool space_timeout = false;
  std::vector<int> iis_tried;
  std::uint64_t time_steps = 0;
  std::uint64_t space_nodes = 0;
};

struct MappingResult {
  int ii = 1;
  int mii = 1;
  int stage_count = 0;
  int mobs_length = 0;
  TimeSolution time;
  std::vector<VertexId> image;                    // node -> MRRG vertex
  std::vector<PlacedOp> mapping;                  // node -> (PE, slot, fold)
  std::vector<std::vector<KernelEntry>> kernel;   // slot -> entries sorted by PE
  ValidationReport report;
  MapStats stats;
};

enum class FailureKind { UnsatAtIiMax, TimeTimeout, SpaceTimeout };

const char* to_string(FailureKind kind);

struct MapOutcome {
  std::optional<MappingResult> result;
  FailureKind failure = FailureKind::UnsatAtIiMax;  // meaningful only without a result
  int mii = 1;
  int ii_max = 1;
  MapStats stats;

  bool ok() const { return result.has_value(); }
};

/// II sweep from mII: fold the MobS, enumerate time solutions, embed each
/// into the MRRG; the first embedding wins and is validated before return.
MapOutcome map_kernel(const Dfg& dfg, const CgraConfig& config, const MapOptions& options = {});

struct ScheduledOp {
  int cycle = 0;
  PeId pe = 0;
  NodeId node = 0;
  int iteration = 0;

  friend bool operator==(const ScheduledOp&, const ScheduledOp&) = default;
};

struct KernelOp {
  PeId pe = 0;
  NodeId node = 0;
  int fold = 0;
};

/// Software-pipelined execution of `iterations` loop iterations. Iteration
/// j of node v issues at cycle j*II + (SC-1-fold(v))*II + slot(v).
struct ExpandedSchedule {
  int ii = 1;
  int stage_count = 0;
  int iterations = 0;
  std::vector<ScheduledOp> prologue;          // cycles [0, (SC-1)*II)
  std::vector<std::vector<KernelOp>> kernel;  // steady-state rows, one per slot
  std::vector<ScheduledOp> steady;            // cycles [(SC-1)*II, iterations*II)
  std::vector<ScheduledOp> epilogue;          // cycles [iterations*II, (iterations+SC-1)*II)
};

/// `iterations` defaults to the stage count (one kernel instance).
ExpandedSchedule expand_schedule(const MappingResult& result, const Dfg& dfg, int iterations = 0);

}  // namespace cgramap
