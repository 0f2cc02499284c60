#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "cgramap/labeled_dfg.hpp"
#include "cgramap/model.hpp"
#include "cgramap/timesolver.hpp"

namespace cgramap {

struct SpaceStats {
  std::uint64_t nodes_expanded = 0;
  double elapsed_seconds = 0.0;
};

struct SpaceAssignment {
  std::vector<VertexId> image;  // DFG node -> MRRG vertex
  SpaceStats stats;
};

enum class SpaceStatus { Found, NotFound, Timeout };

struct SpaceOutcome {
  SpaceStatus status = SpaceStatus::NotFound;
  std::optional<SpaceAssignment> assignment;
  SpaceStats stats;
};

/// candidates[v] = every MRRG vertex whose layer equals v's label.
std::vector<std::vector<VertexId>> candidate_sets(const LabeledDfg& ldfg, const Mrrg& mrrg);

/// Static matching order: start from the highest-degree node, then always
/// take the node with the most already-ordered neighbors (ties: higher
/// degree, then lower id).
std::vector<NodeId> matching_order(const LabeledDfg& ldfg);

/// Label-preserving, injective, edge-preserving (non-induced) embedding of
/// `ldfg` into `mrrg` by backtracking. NotFound is a proof of absence;
/// Timeout is inconclusive. A non-positive budget times out at once.
SpaceOutcome find_monomorphism(const LabeledDfg& ldfg, const Mrrg& mrrg, Seconds budget);

}  // namespace cgramap
