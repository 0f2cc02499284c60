#include "cgramap/model.hpp"

#include <algorithm>
#include <queue>
#include <set>
#include <tuple>

#include <fmt/format.h>

#include "cgramap/errors.hpp"

namespace cgramap {

Dfg::Dfg(std::vector<DfgNode> nodes, std::vector<DepEdge> edges)
    : nodes_(std::move(nodes)), edges_(std::move(edges)) {
  const auto n = static_cast<int>(nodes_.size());
  std::sort(nodes_.begin(), nodes_.end(),
            [](const DfgNode& a, const DfgNode& b) { return a.id < b.id; });
  for (int i = 0; i < n; ++i) {
    if (nodes_[i].id != i) {
      throw InputError(fmt::format("node ids must be dense 0..{} and unique; found id {} at rank {}",
                                   n - 1, nodes_[i].id, i));
    }
  }

  std::set<std::tuple<NodeId, NodeId, DepKind>> seen;
  data_succ_.assign(n, {});
  data_pred_.assign(n, {});
  undirected_.assign(n, {});
  for (const auto& e : edges_) {
    if (e.src < 0 || e.src >= n || e.dst < 0 || e.dst >= n) {
      throw InputError(fmt::format("edge {}->{} references a missing node", e.src, e.dst));
    }
    if (e.distance < 1) {
      throw InputError(fmt::format("edge {}->{} has non-positive distance {}", e.src, e.dst, e.distance));
    }
    if (e.kind == DepKind::Data && e.distance != 1) {
      throw InputError(fmt::format("data edge {}->{} must have distance 1", e.src, e.dst));
    }
    if (!seen.emplace(e.src, e.dst, e.kind).second) {
      throw InputError(fmt::format("duplicate {} edge {}->{}", to_string(e.kind), e.src, e.dst));
    }
    if (e.kind == DepKind::Data) {
      if (e.src == e.dst) {
        throw StructuralError(fmt::format("data self-loop on node {}", e.src));
      }
      data_succ_[e.src].push_back(e.dst);
      data_pred_[e.dst].push_back(e.src);
    }
    if (e.src != e.dst) {
      undirected_[e.src].push_back(e.dst);
      undirected_[e.dst].push_back(e.src);
    }
  }
  for (auto* lists : {&data_succ_, &data_pred_, &undirected_}) {
    for (auto& l : *lists) {
      std::sort(l.begin(), l.end());
      l.erase(std::unique(l.begin(), l.end()), l.end());
    }
  }

  // Kahn's algorithm; the min-heap makes the order canonical.
  std::vector<int> indegree(n, 0);
  for (int v = 0; v < n; ++v) indegree[v] = static_cast<int>(data_pred_[v].size());
  std::priority_queue<NodeId, std::vector<NodeId>, std::greater<>> ready;
  for (int v = 0; v < n; ++v) {
    if (indegree[v] == 0) ready.push(v);
  }
  while (!ready.empty()) {
    const NodeId v = ready.top();
    ready.pop();
    topo_.push_back(v);
    for (NodeId w : data_succ_[v]) {
      if (--indegree[w] == 0) ready.push(w);
    }
  }
  if (static_cast<int>(topo_.size()) != n) {
    throw StructuralError("data edges form a cycle; cycles must pass through a loop-carried edge");
  }
}

std::vector<std::pair<NodeId, NodeId>> Dfg::undirected_edges() const {
  std::vector<std::pair<NodeId, NodeId>> out;
  for (NodeId u = 0; u < static_cast<NodeId>(undirected_.size()); ++u) {
    for (NodeId v : undirected_[u]) {
      if (u < v) out.emplace_back(u, v);
    }
  }
  return out;
}

Dfg make_dfg(int node_count, std::vector<DepEdge> edges) {
  std::vector<DfgNode> nodes;
  nodes.reserve(node_count);
  for (int i = 0; i < node_count; ++i) nodes.push_back({i, ""});
  return Dfg(std::move(nodes), std::move(edges));
}

void CgraConfig::validate() const {
  if (rows < 1 || cols < 1) {
    throw InputError(fmt::format("grid must be at least 1x1, got {}x{}", rows, cols));
  }
  if (!neighbor_read) {
    throw InputError("neighbor_read must be true: PEs communicate only through neighbor register reads");
  }
}

std::vector<PeId> neighbors(const CgraConfig& config, PeId pe) {
  if (pe < 0 || pe >= config.pe_count()) {
    throw InputError(fmt::format("PE index {} out of range for a {}x{} grid", pe, config.rows, config.cols));
  }
  const int r = config.row_of(pe);
  const int c = config.col_of(pe);
  std::vector<PeId> out;
  if (r > 0) out.push_back(config.pe_at(r - 1, c));
  if (c > 0) out.push_back(config.pe_at(r, c - 1));
  if (c + 1 < config.cols) out.push_back(config.pe_at(r, c + 1));
  if (r + 1 < config.rows) out.push_back(config.pe_at(r + 1, c));
  return out;
}

int connectivity_degree(const CgraConfig& config) {
  int lo = 0;
  int hi = 0;
  for (PeId p = 0; p < config.pe_count(); ++p) {
    const int d = static_cast<int>(neighbors(config, p).size()) + 1;
    lo = p == 0 ? d : std::min(lo, d);
    hi = std::max(hi, d);
  }
  return config.degree_policy == DegreePolicy::PaperMax ? hi : lo;
}

Mrrg::Mrrg(const CgraConfig& config, int ii, TimePolicy policy)
    : ii_(ii), pe_count_(config.pe_count()), rows_(config.rows), cols_(config.cols), policy_(policy) {
  config.validate();
  if (ii < 1) throw InputError(fmt::format("II must be positive, got {}", ii));

  std::vector<std::vector<PeId>> reach(pe_count_);  // N(p) plus p itself
  for (PeId p = 0; p < pe_count_; ++p) {
    reach[p] = neighbors(config, p);
    reach[p].push_back(p);
    std::sort(reach[p].begin(), reach[p].end());
  }

  // Each vertex's neighbors come out sorted: layers ascend and PEs ascend within a layer.
  adjacency_.assign(vertex_count(), {});
  for (int i = 0; i < ii; ++i) {
    for (PeId p = 0; p < pe_count_; ++p) {
      auto& out = adjacency_[vertex(p, i)];
      for (int j = 0; j < ii; ++j) {
        const bool timed = j != i && (policy == TimePolicy::PersistentModular || j == (i + 1) % ii ||
                                      i == (j + 1) % ii);
        for (PeId q : reach[p]) {
          if (j == i ? q != p : timed) out.push_back(vertex(q, j));
        }
      }
    }
  }
  for (VertexId a = 0; a < static_cast<VertexId>(vertex_count()); ++a) {
    for (VertexId b : adjacency_[a]) {
      if (a >= b) continue;
      edges_.emplace_back(a, b);
      if (label(a) == label(b)) ++spatial_edges_;
    }
  }
}

bool Mrrg::has_edge(VertexId a, VertexId b) const {
  const auto& l = adjacency_[a];
  return std::binary_search(l.begin(), l.end(), b);
}

Mrrg build_mrrg(const CgraConfig& config, int ii, TimePolicy policy) { return Mrrg(config, ii, policy); }

const char* to_string(DepKind kind) { return kind == DepKind::Data ? "data" : "loop"; }

const char* to_string(DegreePolicy policy) {
  return policy == DegreePolicy::PaperMax ? "paper_max" : "conservative_min";
}

const char* to_string(TimePolicy policy) {
  return policy == TimePolicy::PersistentModular ? "persistent_modular" : "consecutive_only";
}

}  // namespace cgramap
