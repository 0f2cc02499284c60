#pragma once

#include <cstddef>
#include <vector>

#include "cgramap/model.hpp"

namespace cgramap {

/// Per-node time step, indexed by node id.
using TimeMap = std::vector<int>;

/// Unit-latency as-soon-as-possible schedule over data edges only.
TimeMap asap(const Dfg& dfg);

/// Unit-latency as-late-as-possible schedule; sinks land on `horizon`.
TimeMap alap(const Dfg& dfg, int horizon);

/// Makespan of the ASAP schedule (max ASAP value), 0 for an empty graph.
int asap_makespan(const TimeMap& asap_times);

struct MobilitySchedule {
  int length = 0;                       // 1 + max alap
  std::vector<std::vector<NodeId>> rows;  // rows[t] = {v : asap(v) <= t <= alap(v)}, ascending
  TimeMap asap;
  TimeMap alap;
};

MobilitySchedule mobs(const TimeMap& asap_times, const TimeMap& alap_times);

/// ASAP, ALAP with horizon = ASAP makespan, then MobS.
MobilitySchedule mobility_schedule(const Dfg& dfg);

int res_ii(const Dfg& dfg, const CgraConfig& config);

/// Recurrence bound: max over elementary cycles of ceil(nodes / distance),
/// 1 when the graph is acyclic. Stops enumerating after `cycle_cap` cycles.
int rec_ii(const Dfg& dfg, std::size_t cycle_cap = 1'000'000);

int mii(const Dfg& dfg, const CgraConfig& config);

/// One KMS entry: node v folded into a kernel slot with fold subscript k.
struct KmsCandidate {
  NodeId node = 0;
  int fold = 0;
  int origin = 0;  // MobS time step this candidate came from

  friend bool operator==(const KmsCandidate&, const KmsCandidate&) = default;
};

/// MobS folded modulo II. A MobS entry at time t lands in slot
/// s = t + k*II - (L - II) with fold k = floor((L - 1 - t) / II).
struct KernelMobilitySchedule {
  int ii = 1;
  int length = 0;       // MobS length L
  int stage_count = 0;  // ceil(L / II)
  std::vector<std::vector<KmsCandidate>> slots;

  /// Inverse of the fold: MobS time of slot `s`, fold `k`.
  int origin_of(int slot, int fold) const { return slot - fold * ii + (length - ii); }
};

KernelMobilitySchedule build_kms(const MobilitySchedule& mobility, int ii);

}  // namespace cgramap
