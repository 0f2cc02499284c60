#include "cgramap/validator.hpp"

#include <algorithm>
#include <map>
#include <set>

#include <fmt/format.h>

namespace cgramap {

const char* to_string(Rule rule) {
  switch (rule) {
    case Rule::Mono1: return "mono1";
    case Rule::Mono2: return "mono2";
    case Rule::Mono3: return "mono3";
    case Rule::DepOrder: return "dep-order";
    case Rule::Capacity: return "capacity";
    case Rule::Degree: return "degree";
  }
  return "?";
}

std::vector<Violation> check_monomorphism(const LabeledDfg& ldfg, const Mrrg& mrrg,
                                          const std::vector<VertexId>& image) {
  std::vector<Violation> out;
  const auto n = static_cast<NodeId>(ldfg.size());
  const auto vcount = static_cast<VertexId>(mrrg.vertex_count());
  if (static_cast<NodeId>(image.size()) != n) {
    out.push_back({Rule::Mono1, {}, fmt::format("mapping covers {} of {} nodes", image.size(), n)});
    return out;
  }
  auto in_range = [&](NodeId v) { return image[v] >= 0 && image[v] < vcount; };

  std::map<VertexId, std::vector<NodeId>> by_vertex;
  for (NodeId v = 0; v < n; ++v) {
    if (!in_range(v)) {
      out.push_back({Rule::Mono1, {v}, fmt::format("node {} maps to nonexistent vertex {}", v, image[v])});
      continue;
    }
    by_vertex[image[v]].push_back(v);
  }
  for (const auto& [vertex, nodes] : by_vertex) {
    if (nodes.size() > 1) {
      out.push_back({Rule::Mono1, nodes,
                     fmt::format("{} nodes share PE {} at slot {}", nodes.size(), mrrg.pe_of(vertex),
                                 mrrg.label(vertex))});
    }
  }
  for (NodeId v = 0; v < n; ++v) {
    if (in_range(v) && mrrg.label(image[v]) != ldfg.labels[v]) {
      out.push_back({Rule::Mono2, {v},
                     fmt::format("node {} labeled {} placed in layer {}", v, ldfg.labels[v], mrrg.label(image[v]))});
    }
  }
  const std::set<std::pair<VertexId, VertexId>> edge_set(mrrg.edges().begin(), mrrg.edges().end());
  for (auto [u, v] : ldfg.edges) {
    if (!in_range(u) || !in_range(v)) continue;
    const VertexId a = std::min(image[u], image[v]);
    const VertexId b = std::max(image[u], image[v]);
    if (!edge_set.contains({a, b})) {
      out.push_back({Rule::Mono3, {u, v},
                     fmt::format("no route between PE {} (slot {}) and PE {} (slot {}) for edge {{{},{}}}",
                                 mrrg.pe_of(image[u]), mrrg.label(image[u]), mrrg.pe_of(image[v]),
                                 mrrg.label(image[v]), u, v)});
    }
  }
  return out;
}

namespace {

// Compare in absolute time: tau = slot - fold*II up to a constant. Data deps
// need 1 <= tau_d - tau_s <= II, loop-carried ones 1-II <= tau_d - tau_s <= 0.
bool ordered(DepKind kind, const SlotFold& s, const SlotFold& d, int ii) {
  const int gap = (d.slot - d.fold * ii) - (s.slot - s.fold * ii);
  if (kind == DepKind::Data) return gap >= 1 && gap <= ii;
  return gap >= 1 - ii && gap <= 0;
}

}  // namespace

std::vector<Violation> check_dependencies(const Dfg& dfg, const TimeSolution& solution) {
  std::vector<Violation> out;
  if (solution.assignment.size() != dfg.size()) {
    out.push_back({Rule::DepOrder, {},
                   fmt::format("time solution covers {} of {} nodes", solution.assignment.size(), dfg.size())});
    return out;
  }
  for (const auto& e : dfg.edges()) {
    const auto& s = solution.assignment[e.src];
    const auto& d = solution.assignment[e.dst];
    if (!ordered(e.kind, s, d, solution.ii)) {
      out.push_back({Rule::DepOrder, {e.src, e.dst},
                     fmt::format("{} dependency {}->{}: source at slot {} fold {}, destination at slot {} fold {}",
                                 to_string(e.kind), e.src, e.dst, s.slot, s.fold, d.slot, d.fold)});
    }
  }
  return out;
}

std::vector<Violation> check_capacity_degree(const LabeledDfg& ldfg, const CgraConfig& config, int ii) {
  std::vector<Violation> out;
  const int capacity = config.rows * config.cols;
  const int degree = connectivity_degree(config);
  std::vector<std::vector<NodeId>> members(ii);
  for (NodeId v = 0; v < static_cast<NodeId>(ldfg.size()); ++v) {
    const int l = ldfg.labels[v];
    if (l >= 0 && l < ii) members[l].push_back(v);
  }
  for (int s = 0; s < ii; ++s) {
    if (static_cast<int>(members[s].size()) > capacity) {
      out.push_back({Rule::Capacity, {s},
                     fmt::format("slot {} holds {} operations but the grid has {} PEs", s, members[s].size(),
                                 capacity)});
    }
  }
  // Count neighbors per (node, slot) from the edge list itself.
  std::vector<std::map<int, std::set<NodeId>>> per_slot(ldfg.size());
  for (auto [u, v] : ldfg.edges) {
    per_slot[u][ldfg.labels[v]].insert(v);
    per_slot[v][ldfg.labels[u]].insert(u);
  }
  for (NodeId v = 0; v < static_cast<NodeId>(ldfg.size()); ++v) {
    for (const auto& [slot, nbrs] : per_slot[v]) {
      if (static_cast<int>(nbrs.size()) > degree) {
        out.push_back({Rule::Degree, {v},
                       fmt::format("node {} has {} neighbors in slot {}, connectivity degree is {}", v, nbrs.size(),
                                   slot, degree)});
      }
    }
  }
  return out;
}

ValidationReport validate_all(const Dfg& dfg, const CgraConfig& config, int ii, const TimeSolution& solution,
                              const std::vector<VertexId>& image, TimePolicy policy) {
  ValidationReport report;
  auto append = [&](std::vector<Violation> v) {
    report.violations.insert(report.violations.end(), std::make_move_iterator(v.begin()),
                             std::make_move_iterator(v.end()));
  };
  TimeSolution at_ii = solution;
  at_ii.ii = ii;
  append(check_dependencies(dfg, at_ii));
  bool labels_ok = solution.assignment.size() == dfg.size();
  for (const auto& sf : solution.assignment) labels_ok = labels_ok && sf.slot >= 0 && sf.slot < ii;
  if (!labels_ok) {
    report.violations.push_back({Rule::Mono2, {}, fmt::format("time solution labels are not a total map into 0..{}",
                                                              ii - 1)});
    return report;
  }
  const LabeledDfg ldfg = label_dfg(dfg, at_ii);
  append(check_capacity_degree(ldfg, config, ii));
  append(check_monomorphism(ldfg, build_mrrg(config, ii, policy), image));
  return report;
}

}  // namespace cgramap
