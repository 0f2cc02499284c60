#pragma once

#include <utility>
#include <vector>

#include "cgramap/model.hpp"
#include "cgramap/timesolver.hpp"

namespace cgramap {

/// DFG after scheduling: each node carries its kernel slot as a label and
/// edge direction is dropped (both dependency kinds, duplicates collapsed,
/// self loops removed).
struct LabeledDfg {
  int ii = 1;
  std::vector<int> labels;                         // indexed by node id
  std::vector<std::pair<NodeId, NodeId>> edges;    // u < v, sorted
  std::vector<std::vector<NodeId>> adjacency;      // sorted

  std::size_t size() const { return labels.size(); }
};

/// Throws StructuralError if `solution` does not cover every node or a slot
/// lies outside 0..II-1.
LabeledDfg label_dfg(const Dfg& dfg, const TimeSolution& solution);

/// Builds a labeled graph directly; used by tests and by callers that want
/// to bypass the time solver.
LabeledDfg make_labeled_dfg(int ii, std::vector<int> labels, std::vector<std::pair<NodeId, NodeId>> edges);

}  // namespace cgramap
