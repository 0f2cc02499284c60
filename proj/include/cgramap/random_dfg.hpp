#pragma once

#include <cstdint>

#include "cgramap/model.hpp"

namespace cgramap {

struct RandomDfgParams {
  std::uint64_t seed = 1;
  int nodes = 10;
  double data_edge_prob = 0.3;
  int backedges = 0;
};

/// Random DAG over ids 0..n-1 (edge i->j, i<j, with the given probability)
/// plus `backedges` distance-1 loop-carried edges u->v, each closing a cycle
/// through an existing data path v ~> u (a self loop when no path exists).
/// Identical parameters give identical graphs.
Dfg random_dfg(const RandomDfgParams& params);

}  // namespace cgramap
