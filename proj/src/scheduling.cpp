#include "cgramap/scheduling.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "cgramap/errors.hpp"

namespace cgramap {

TimeMap asap(const Dfg& dfg) {
  TimeMap t(dfg.size(), 0);
  for (NodeId v : dfg.topological_order()) {
    for (NodeId p : dfg.data_predecessors(v)) t[v] = std::max(t[v], t[p] + 1);
  }
  return t;
}

TimeMap alap(const Dfg& dfg, int horizon) {
  TimeMap t(dfg.size(), horizon);
  const auto& order = dfg.topological_order();
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    for (NodeId s : dfg.data_successors(*it)) t[*it] = std::min(t[*it], t[s] - 1);
  }
  for (std::size_t v = 0; v < t.size(); ++v) {
    if (t[v] < 0) {
      throw StructuralError(fmt::format("ALAP horizon {} too short for node {}", horizon, v));
    }
  }
  return t;
}

int asap_makespan(const TimeMap& asap_times) {
  return asap_times.empty() ? 0 : *std::max_element(asap_times.begin(), asap_times.end());
}

MobilitySchedule mobs(const TimeMap& asap_times, const TimeMap& alap_times) {
  if (asap_times.size() != alap_times.size()) {
    throw StructuralError("ASAP and ALAP maps cover different node sets");
  }
  MobilitySchedule m;
  m.asap = asap_times;
  m.alap = alap_times;
  for (std::size_t v = 0; v < asap_times.size(); ++v) {
    if (asap_times[v] < 0 || asap_times[v] > alap_times[v]) {
      throw StructuralError(fmt::format("node {} has asap {} > alap {}", v, asap_times[v], alap_times[v]));
    }
    m.length = std::max(m.length, alap_times[v] + 1);
  }
  m.rows.assign(m.length, {});
  for (std::size_t v = 0; v < asap_times.size(); ++v) {
    for (int t = asap_times[v]; t <= alap_times[v]; ++t) m.rows[t].push_back(static_cast<NodeId>(v));
  }
  return m;
}

MobilitySchedule mobility_schedule(const Dfg& dfg) {
  const TimeMap early = asap(dfg);
  return mobs(early, alap(dfg, asap_makespan(early)));
}

int res_ii(const Dfg& dfg, const CgraConfig& config) {
  const int n = static_cast<int>(dfg.size());
  const int pes = config.pe_count();
  return std::max(1, (n + pes - 1) / pes);
}

int mii(const Dfg& dfg, const CgraConfig& config) { return std::max(res_ii(dfg, config), rec_ii(dfg)); }

KernelMobilitySchedule build_kms(const MobilitySchedule& mobility, int ii) {
  if (ii < 1) throw InputError(fmt::format("II must be positive, got {}", ii));
  KernelMobilitySchedule kms;
  kms.ii = ii;
  kms.length = mobility.length;
  kms.stage_count = (mobility.length + ii - 1) / ii;
  kms.slots.assign(ii, {});
  for (int t = 0; t < mobility.length; ++t) {
    const int fold = (mobility.length - 1 - t) / ii;
    const int slot = t + fold * ii - (mobility.length - ii);
    for (NodeId v : mobility.rows[t]) kms.slots[slot].push_back({v, fold, t});
  }
  // Each slot lists fold 0 first, then ascending node id.
  for (auto& s : kms.slots) {
    std::stable_sort(s.begin(), s.end(), [](const KmsCandidate& a, const KmsCandidate& b) {
      return a.fold != b.fold ? a.fold < b.fold : a.node < b.node;
    });
  }
  return kms;
}

}  // namespace cgramap
