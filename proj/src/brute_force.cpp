#include "cgramap/brute_force.hpp"

#include <fmt/format.h>

#include "cgramap/errors.hpp"
#include "cgramap/scheduling.hpp"
#include "cgramap/validator.hpp"

namespace cgramap {

namespace {

// Search over nodes in id order. Partial assignments are pruned only by
// rules that can never recover once broken among assigned nodes; every
// leaf is confirmed by validate_all.
class JointSearch {
 public:
  JointSearch(const Dfg& dfg, const CgraConfig& config, const Mrrg& mrrg, const KernelMobilitySchedule& kms,
              TimePolicy policy)
      : dfg_(dfg), config_(config), mrrg_(mrrg), policy_(policy), ii_(kms.ii),
        degree_(connectivity_degree(config)) {
    domains_.assign(dfg.size(), {});
    for (int s = 0; s < kms.ii; ++s) {
      for (const auto& c : kms.slots[s]) domains_[c.node].push_back({s, c.fold});
    }
    time_.ii = ii_;
    time_.assignment.assign(dfg.size(), {});
    image_.assign(dfg.size(), -1);
    occupied_.assign(mrrg.vertex_count(), 0);
    slot_pop_.assign(ii_, 0);
  }

  bool run() { return extend(0); }
  JointMapping result() const { return {ii_, time_, image_}; }

 private:
  bool extend(NodeId v) {
    if (v == static_cast<NodeId>(dfg_.size())) {
      return validate_all(dfg_, config_, ii_, time_, image_, policy_).valid();
    }
    for (const SlotFold& sf : domains_[v]) {
      if (slot_pop_[sf.slot] >= config_.pe_count()) continue;
      time_.assignment[v] = sf;
      if (!deps_ok(v) || !degree_ok(v, sf.slot)) continue;
      for (PeId p = 0; p < config_.pe_count(); ++p) {
        const VertexId m = mrrg_.vertex(p, sf.slot);
        if (occupied_[m]) continue;
        image_[v] = m;
        if (!edges_ok(v)) continue;
        occupied_[m] = 1;
        ++slot_pop_[sf.slot];
        if (extend(v + 1)) return true;
        occupied_[m] = 0;
        --slot_pop_[sf.slot];
      }
      image_[v] = -1;
    }
    return false;
  }

  // Dependencies between v and already-assigned (smaller id) nodes.
  bool deps_ok(NodeId v) const {
    for (const auto& e : dfg_.edges()) {
      if (std::max(e.src, e.dst) != v) continue;
      const auto& s = time_.assignment[e.src];
      const auto& d = time_.assignment[e.dst];
      const int gap = s.fold - d.fold;
      bool ok = false;
      if (e.kind == DepKind::Data) {
        ok = (gap == 0 && d.slot > s.slot) || (gap == 1 && d.slot <= s.slot);
      } else {
        ok = (gap == 0 && d.slot <= s.slot) || (gap == -1 && d.slot > s.slot);
      }
      if (!ok) return false;
    }
    return true;
  }

  bool degree_ok(NodeId v, int slot) const {
    const auto& adj = dfg_.undirected_neighbors();
    // Each neighbor w (assigned or not) now sees v in `slot`.
    for (NodeId w : adj[v]) {
      int count = 0;
      for (NodeId x : adj[w]) {
        if (x <= v && time_.assignment[x].slot == slot) ++count;
      }
      if (count > degree_) return false;
    }
    std::vector<int> own(ii_, 0);
    for (NodeId w : adj[v]) {
      if (w < v && ++own[time_.assignment[w].slot] > degree_) return false;
    }
    return true;
  }

  bool edges_ok(NodeId v) const {
    for (NodeId w : dfg_.undirected_neighbors()[v]) {
      if (w < v && !mrrg_.has_edge(image_[w], image_[v])) return false;
    }
    return true;
  }

  const Dfg& dfg_;
  const CgraConfig& config_;
  const Mrrg& mrrg_;
  TimePolicy policy_;
  int ii_;
  int degree_;
  std::vector<std::vector<SlotFold>> domains_;
  TimeSolution time_;
  std::vector<VertexId> image_;
  std::vector<char> occupied_;
  std::vector<int> slot_pop_;
};

}  // namespace

std::optional<JointMapping> brute_force_min_ii(const Dfg& dfg, const CgraConfig& config, int ii_cap,
                                               TimePolicy policy) {
  if (dfg.size() > 8 || config.pe_count() > 4 || ii_cap > 4) {
    throw InputError(fmt::format("brute-force oracle limited to 8 nodes, 4 PEs, II 4 (got {} nodes, {} PEs, II {})",
                                 dfg.size(), config.pe_count(), ii_cap));
  }
  config.validate();
  const MobilitySchedule mobility = mobility_schedule(dfg);
  for (int ii = 1; ii <= ii_cap; ++ii) {
    const auto kms = build_kms(mobility, ii);
    const Mrrg mrrg(config, ii, policy);
    JointSearch search(dfg, config, mrrg, kms, policy);
    if (search.run()) return search.result();
  }
  return std::nullopt;
}

}  // namespace cgramap
