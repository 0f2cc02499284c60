#include "cgramap/labeled_dfg.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "cgramap/errors.hpp"

namespace cgramap {

LabeledDfg make_labeled_dfg(int ii, std::vector<int> labels, std::vector<std::pair<NodeId, NodeId>> edges) {
  LabeledDfg g;
  g.ii = ii;
  g.labels = std::move(labels);
  const auto n = static_cast<NodeId>(g.labels.size());
  for (NodeId v = 0; v < n; ++v) {
    if (g.labels[v] < 0 || g.labels[v] >= ii) {
      throw StructuralError(fmt::format("node {} has label {} outside 0..{}", v, g.labels[v], ii - 1));
    }
  }
  for (auto [u, v] : edges) {
    if (u < 0 || v < 0 || u >= n || v >= n) throw StructuralError(fmt::format("edge {{{},{}}} out of range", u, v));
    if (u == v) continue;
    g.edges.emplace_back(std::min(u, v), std::max(u, v));
  }
  std::sort(g.edges.begin(), g.edges.end());
  g.edges.erase(std::unique(g.edges.begin(), g.edges.end()), g.edges.end());
  g.adjacency.assign(n, {});
  for (auto [u, v] : g.edges) {
    g.adjacency[u].push_back(v);
    g.adjacency[v].push_back(u);
  }
  for (auto& a : g.adjacency) std::sort(a.begin(), a.end());
  return g;
}

LabeledDfg label_dfg(const Dfg& dfg, const TimeSolution& solution) {
  if (solution.assignment.size() != dfg.size()) {
    throw StructuralError(
        fmt::format("time solution covers {} of {} nodes", solution.assignment.size(), dfg.size()));
  }
  std::vector<int> labels;
  labels.reserve(dfg.size());
  for (const auto& sf : solution.assignment) labels.push_back(sf.slot);
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (const auto& e : dfg.edges()) edges.emplace_back(e.src, e.dst);
  return make_labeled_dfg(solution.ii, std::move(labels), std::move(edges));
}

}  // namespace cgramap
