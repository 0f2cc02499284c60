#pragma once

#include <optional>
#include <vector>

#include "cgramap/model.hpp"
#include "cgramap/timesolver.hpp"

namespace cgramap {

struct JointMapping {
  int ii = 1;
  TimeSolution time;
  std::vector<VertexId> image;
};

/// Exhaustive joint (slot, fold, PE) search, smallest II first, accepting
/// only mappings that validate_all reports Valid. Folds range over the KMS
/// candidates of each II. Exponential: refuses more than 8 nodes, more than
/// 4 PEs or ii_cap above 4 with InputError.
std::optional<JointMapping> brute_force_min_ii(const Dfg& dfg, const CgraConfig& config, int ii_cap,
                                               TimePolicy policy = TimePolicy::PersistentModular);

}  // namespace cgramap
