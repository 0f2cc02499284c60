#include "cgramap/spacesolver.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <queue>
#include <stdexcept>

#include "cgramap/validator.hpp"

namespace cgramap {

using Clock = std::chrono::steady_clock;

std::vector<std::vector<VertexId>> candidate_sets(const LabeledDfg& ldfg, const Mrrg& mrrg) {
  std::vector<std::vector<VertexId>> out(ldfg.size());
  for (std::size_t v = 0; v < ldfg.size(); ++v) {
    const int layer = ldfg.labels[v];
    if (layer < 0 || layer >= mrrg.ii()) continue;
    for (PeId p = 0; p < mrrg.pe_count(); ++p) out[v].push_back(mrrg.vertex(p, layer));
  }
  return out;
}

std::vector<NodeId> matching_order(const LabeledDfg& ldfg) {
  const auto n = static_cast<NodeId>(ldfg.size());
  std::vector<NodeId> order;
  std::vector<char> taken(n, 0);
  std::vector<int> ordered_nbrs(n, 0);
  auto degree = [&](NodeId v) { return static_cast<int>(ldfg.adjacency[v].size()); };
  for (NodeId step = 0; step < n; ++step) {
    NodeId best = -1;
    for (NodeId v = 0; v < n; ++v) {
      if (taken[v]) continue;
      if (best < 0 || ordered_nbrs[v] > ordered_nbrs[best] ||
          (ordered_nbrs[v] == ordered_nbrs[best] && degree(v) > degree(best))) {
        best = v;
      }
    }
    taken[best] = 1;
    order.push_back(best);
    for (NodeId w : ldfg.adjacency[best]) ++ordered_nbrs[w];
  }
  return order;
}

namespace {

constexpr std::uint64_t kDeadlineCheckInterval = 4096;

std::vector<int> distances_from(const LabeledDfg& g, NodeId root) {
  std::vector<int> dist(g.size(), -1);
  std::queue<NodeId> q;
  dist[root] = 0;
  q.push(root);
  while (!q.empty()) {
    const NodeId v = q.front();
    q.pop();
    for (NodeId w : g.adjacency[v]) {
      if (dist[w] < 0) {
        dist[w] = dist[v] + 1;
        q.push(w);
      }
    }
  }
  return dist;
}

std::vector<std::vector<NodeId>> components(const LabeledDfg& g) {
  std::vector<std::vector<NodeId>> out;
  std::vector<char> seen(g.size(), 0);
  for (NodeId s = 0; s < static_cast<NodeId>(g.size()); ++s) {
    if (seen[s]) continue;
    const auto dist = distances_from(g, s);
    out.emplace_back();
    for (NodeId v = 0; v < static_cast<NodeId>(g.size()); ++v) {
      if (dist[v] >= 0) {
        seen[v] = 1;
        out.back().push_back(v);
      }
    }
  }
  return out;
}

LabeledDfg induced(const LabeledDfg& g, const std::vector<NodeId>& nodes) {
  std::vector<NodeId> index(g.size(), -1);
  std::vector<int> labels;
  for (NodeId v : nodes) {
    index[v] = static_cast<NodeId>(labels.size());
    labels.push_back(g.labels[v]);
  }
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (const auto& [a, b] : g.edges) {
    if (index[a] >= 0 && index[b] >= 0) edges.emplace_back(index[a], index[b]);
  }
  return make_labeled_dfg(g.ii, std::move(labels), std::move(edges));
}

// PEs worth trying for the first placed node. Grid reflections carry
// embeddings to embeddings. For a connected graph so does any shift that
// keeps the root at least its eccentricity away from every border.
std::vector<char> root_pes(const LabeledDfg& g, const Mrrg& m, NodeId root) {
  const int rows = m.rows(), cols = m.cols();
  std::vector<PeId> parent(m.pe_count());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](PeId p) {
    while (parent[p] != p) p = parent[p] = parent[parent[p]];
    return p;
  };
  auto unite = [&](PeId a, PeId b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  };
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const PeId p = r * cols + c;
      unite(p, (rows - 1 - r) * cols + c);
      unite(p, r * cols + (cols - 1 - c));
      if (rows == cols) unite(p, c * cols + r);
    }
  }
  const auto dist = distances_from(g, root);
  if (std::find(dist.begin(), dist.end(), -1) == dist.end()) {
    const int ecc = *std::max_element(dist.begin(), dist.end());
    PeId first = -1;
    for (int r = ecc; r < rows - ecc; ++r) {
      for (int c = ecc; c < cols - ecc; ++c) {
        const PeId p = r * cols + c;
        if (first < 0) first = p;
        unite(first, p);
      }
    }
  }
  std::vector<char> keep(m.pe_count(), 0);
  for (PeId p = 0; p < m.pe_count(); ++p) keep[p] = find(p) == p;
  return keep;
}

class Matcher {
 public:
  Matcher(const LabeledDfg& g, const Mrrg& m, Clock::time_point deadline)
      : g_(g), m_(m), deadline_(deadline), image_(g.size(), -1), used_(m.vertex_count(), 0) {}

  SpaceStatus run() {
    std::vector<int> per_layer(m_.ii(), 0);
    for (int l : g_.labels) {
      if (l < 0 || l >= m_.ii()) return SpaceStatus::NotFound;
      if (++per_layer[l] > m_.pe_count()) return SpaceStatus::NotFound;
    }
    order_ = matching_order(g_);
    if (!order_.empty()) root_ok_ = root_pes(g_, m_, order_.front());
    return extend(0);
  }

  const std::vector<VertexId>& image() const { return image_; }
  std::uint64_t expanded() const { return expanded_; }

 private:
  SpaceStatus extend(std::size_t depth) {
    if (depth == order_.size()) return SpaceStatus::Found;
    const NodeId v = order_[depth];
    for (VertexId cand : candidates(v)) {
      if (++expanded_ % kDeadlineCheckInterval == 0 && Clock::now() > deadline_) return SpaceStatus::Timeout;
      place(v, cand);
      if (lookahead_ok(v)) {
        const auto r = extend(depth + 1);
        if (r != SpaceStatus::NotFound) return r;
      }
      unplace(v, cand);
    }
    return SpaceStatus::NotFound;
  }

  bool compatible(NodeId v, VertexId cand) const {
    if (used_[cand] || m_.label(cand) != g_.labels[v]) return false;
    for (NodeId u : g_.adjacency[v]) {
      if (image_[u] >= 0 && !m_.has_edge(image_[u], cand)) return false;
    }
    return true;
  }

  std::vector<VertexId> candidates(NodeId v) const {
    const int layer = g_.labels[v];
    // Seed from the placed neighbor with the smallest adjacency, if any.
    NodeId anchor = -1;
    for (NodeId u : g_.adjacency[v]) {
      if (image_[u] < 0) continue;
      if (anchor < 0 || m_.adjacent(image_[u]).size() < m_.adjacent(image_[anchor]).size()) anchor = u;
    }
    std::vector<VertexId> out;
    if (anchor >= 0) {
      for (VertexId c : m_.adjacent(image_[anchor])) {
        if (compatible(v, c)) out.push_back(c);
      }
    } else {
      const bool root = v == order_.front();
      for (PeId p = 0; p < m_.pe_count(); ++p) {
        if (root && !root_ok_[p]) continue;
        const VertexId c = m_.vertex(p, layer);
        if (compatible(v, c)) out.push_back(c);
      }
    }
    // Prefer PEs already hosting a placed neighbor (reuse of the self-PE
    // time edge), then row-major.
    std::vector<PeId> near;
    for (NodeId u : g_.adjacency[v]) {
      if (image_[u] >= 0) near.push_back(m_.pe_of(image_[u]));
    }
    auto is_near = [&](VertexId c) { return std::find(near.begin(), near.end(), m_.pe_of(c)) != near.end(); };
    std::stable_sort(out.begin(), out.end(), [&](VertexId a, VertexId b) {
      const int ka = is_near(a) ? 0 : 1;
      const int kb = is_near(b) ? 0 : 1;
      return ka != kb ? ka < kb : m_.pe_of(a) < m_.pe_of(b);
    });
    return out;
  }

  // Every unplaced neighbor of v must still have a compatible free vertex.
  bool lookahead_ok(NodeId v) const {
    for (NodeId w : g_.adjacency[v]) {
      if (image_[w] >= 0) continue;
      bool any = false;
      for (VertexId c : m_.adjacent(image_[v])) {
        if (compatible(w, c)) {
          any = true;
          break;
        }
      }
      if (!any) return false;
    }
    return true;
  }

  void place(NodeId v, VertexId c) {
    image_[v] = c;
    used_[c] = 1;
  }

  void unplace(NodeId v, VertexId c) {
    image_[v] = -1;
    used_[c] = 0;
  }

  const LabeledDfg& g_;
  const Mrrg& m_;
  Clock::time_point deadline_;
  std::vector<NodeId> order_;
  std::vector<char> root_ok_;
  std::vector<VertexId> image_;
  std::vector<char> used_;
  std::uint64_t expanded_ = 0;
};

}  // namespace

SpaceOutcome find_monomorphism(const LabeledDfg& ldfg, const Mrrg& mrrg, Seconds budget) {
  const auto start = Clock::now();
  const auto deadline = start + std::chrono::duration_cast<Clock::duration>(budget);
  SpaceOutcome out;
  if (budget.count() <= 0.0) {
    out.status = SpaceStatus::Timeout;
    out.stats.elapsed_seconds = Seconds(Clock::now() - start).count();
    return out;
  }
  // A component that cannot be placed on its own rules out the whole graph.
  const auto parts = components(ldfg);
  if (parts.size() > 1) {
    for (const auto& part : parts) {
      if (part.size() < 2) continue;
      const auto sub = induced(ldfg, part);
      Matcher alone(sub, mrrg, deadline);
      const auto status = alone.run();
      out.stats.nodes_expanded += alone.expanded();
      if (status != SpaceStatus::Found) {
        out.status = status;
        out.stats.elapsed_seconds = Seconds(Clock::now() - start).count();
        return out;
      }
    }
  }
  Matcher matcher(ldfg, mrrg, deadline);
  out.status = matcher.run();
  out.stats.nodes_expanded += matcher.expanded();
  out.stats.elapsed_seconds = Seconds(Clock::now() - start).count();
  if (out.status == SpaceStatus::Found) {
    const auto problems = check_monomorphism(ldfg, mrrg, matcher.image());
    if (!problems.empty()) throw std::logic_error("space solver produced an invalid embedding: " + problems.front().detail);
    out.assignment = SpaceAssignment{matcher.image(), out.stats};
  }
  return out;
}

}  // namespace cgramap
