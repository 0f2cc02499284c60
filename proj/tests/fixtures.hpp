#pragma once

#include <string>
#include <vector>

#include "cgramap/io.hpp"
#include "cgramap/model.hpp"

namespace cgramap::testing {

inline std::string data_path(const std::string& name) { return std::string(CGRAMAP_TEST_DATA_DIR) + "/" + name; }

inline Dfg load_dfg(const std::string& name) { return parse_dfg(read_file(data_path(name))); }

inline Dfg running_example() { return load_dfg("running_example.json"); }

// Per-node ASAP / ALAP of the 14-node running example.
inline const std::vector<int> kTableAsap{0, 0, 0, 0, 0, 1, 2, 3, 3, 4, 5, 1, 2, 3};
inline const std::vector<int> kTableAlap{2, 3, 2, 1, 0, 1, 2, 4, 3, 4, 5, 3, 4, 5};

// MobS rows of the running example.
inline const std::vector<std::vector<NodeId>> kTableMobs{
    {0, 1, 2, 3, 4}, {0, 1, 2, 3, 5, 11}, {0, 1, 2, 6, 11, 12}, {1, 7, 8, 11, 12, 13}, {7, 9, 12, 13}, {10, 13},
};

inline CgraConfig grid(int rows, int cols, DegreePolicy policy = DegreePolicy::PaperMax) {
  CgraConfig c;
  c.rows = rows;
  c.cols = cols;
  c.degree_policy = policy;
  return c;
}

inline DepEdge data(NodeId s, NodeId d) { return {s, d, DepKind::Data, 1}; }
inline DepEdge loop(NodeId s, NodeId d, int distance = 1) { return {s, d, DepKind::LoopCarried, distance}; }

inline Dfg chain(int n) {
  std::vector<DepEdge> edges;
  for (int i = 0; i + 1 < n; ++i) edges.push_back(data(i, i + 1));
  return make_dfg(n, edges);
}

// Four zero-mobility leaves feeding node 0. At II 2 the leaves fill slot 0
// (capacity 4 is fine) but node 0 then has 4 > 3 neighbors in that slot.
inline Dfg star() { return make_dfg(5, {data(1, 0), data(2, 0), data(3, 0), data(4, 0)}); }
inline constexpr int kStarIi = 2;

}  // namespace cgramap::testing
