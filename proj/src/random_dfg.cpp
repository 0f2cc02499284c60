#include "cgramap/random_dfg.hpp"

#include <array>
#include <random>
#include <set>

#include "cgramap/errors.hpp"

namespace cgramap {

namespace {

// Engine-level draws only, so the output does not depend on the standard
// library's distribution implementations.
class Draw {
 public:
  explicit Draw(std::uint64_t seed) : rng_(seed) {}
  double unit() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }
  std::uint64_t below(std::uint64_t n) { return rng_() % n; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace

Dfg random_dfg(const RandomDfgParams& params) {
  if (params.nodes < 1) throw InputError("random DFG needs at least one node");
  if (!(params.data_edge_prob >= 0.0 && params.data_edge_prob <= 1.0)) {
    throw InputError("data edge probability must lie in [0, 1]");
  }
  if (params.backedges < 0) throw InputError("backedge count must be non-negative");

  static constexpr std::array<const char*, 8> kOps = {"add", "sub", "mul", "shl", "and", "load", "store", "cmp"};
  Draw draw(params.seed);
  const int n = params.nodes;

  std::vector<DfgNode> nodes;
  for (int i = 0; i < n; ++i) nodes.push_back({i, kOps[draw.below(kOps.size())]});

  std::vector<DepEdge> edges;
  std::vector<std::vector<char>> reach(n, std::vector<char>(n, 0));
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (draw.unit() < params.data_edge_prob) {
        edges.push_back({i, j, DepKind::Data, 1});
        reach[i][j] = 1;
      }
    }
  }
  // Transitive closure; ids are already a topological order.
  for (int i = n - 1; i >= 0; --i) {
    for (int j = i + 1; j < n; ++j) {
      if (!reach[i][j]) continue;
      for (int k = j + 1; k < n; ++k) {
        if (reach[j][k]) reach[i][k] = 1;
      }
    }
  }
  std::vector<std::pair<int, int>> closing;  // (from u, to v) with v ~> u
  for (int v = 0; v < n; ++v) {
    for (int u = v + 1; u < n; ++u) {
      if (reach[v][u]) closing.emplace_back(u, v);
    }
  }

  std::set<std::pair<int, int>> used;
  for (int b = 0; b < params.backedges; ++b) {
    std::pair<int, int> pick;
    if (!closing.empty()) {
      pick = closing[draw.below(closing.size())];
    } else {
      const int v = static_cast<int>(draw.below(n));
      pick = {v, v};
    }
    if (!used.insert(pick).second) continue;  // duplicate draw: fewer backedges
    edges.push_back({pick.first, pick.second, DepKind::LoopCarried, 1});
  }
  return Dfg(std::move(nodes), std::move(edges));
}

}  // namespace cgramap
