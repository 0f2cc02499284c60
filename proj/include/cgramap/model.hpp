#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace cgramap {

using NodeId = int;
using PeId = int;
using VertexId = int;

// ---------------------------------------------------------------------------
// Data-flow graph
// ---------------------------------------------------------------------------

enum class DepKind { Data, LoopCarried };

struct DfgNode {
  NodeId id = 0;
  std::string op;
};

struct DepEdge {
  NodeId src = 0;
  NodeId dst = 0;
  DepKind kind = DepKind::Data;
  int distance = 1;

  friend bool operator==(const DepEdge&, const DepEdge&) = default;
};

/// Loop-body data-flow graph with directed dependency edges.
///
/// Node ids are dense (0..size()-1). Data edges must form a DAG; cycles may
/// only close through loop-carried edges. The constructor enforces all of
/// this and throws InputError / StructuralError otherwise.
class Dfg {
 public:
  Dfg() = default;
  Dfg(std::vector<DfgNode> nodes, std::vector<DepEdge> edges);

  std::size_t size() const { return nodes_.size(); }
  bool empty() const { return nodes_.empty(); }
  const std::vector<DfgNode>& nodes() const { return nodes_; }
  const std::vector<DepEdge>& edges() const { return edges_; }

  const std::vector<NodeId>& data_successors(NodeId v) const { return data_succ_[v]; }
  const std::vector<NodeId>& data_predecessors(NodeId v) const { return data_pred_[v]; }

  /// Data-edge topological order (ties broken by ascending id).
  const std::vector<NodeId>& topological_order() const { return topo_; }

  /// Undirected simple neighbor sets over both edge kinds; self loops dropped.
  const std::vector<std::vector<NodeId>>& undirected_neighbors() const { return undirected_; }

  /// Undirected simple edge list {u,v}, u < v, sorted.
  std::vector<std::pair<NodeId, NodeId>> undirected_edges() const;

 private:
  std::vector<DfgNode> nodes_;
  std::vector<DepEdge> edges_;
  std::vector<std::vector<NodeId>> data_succ_;
  std::vector<std::vector<NodeId>> data_pred_;
  std::vector<std::vector<NodeId>> undirected_;
  std::vector<NodeId> topo_;
};

/// Convenience builder: nodes 0..n-1 with empty opcodes.
Dfg make_dfg(int node_count, std::vector<DepEdge> edges);

// ---------------------------------------------------------------------------
// CGRA configuration
// ---------------------------------------------------------------------------

enum class Topology { Mesh };

/// How the single connectivity degree of a non-uniform mesh is chosen.
enum class DegreePolicy {
  PaperMax,         // max over PEs of |N(p)| + 1
  ConservativeMin,  // min over PEs of |N(p)| + 1
};

enum class TimePolicy {
  ConsecutiveOnly,    // (p,i)-(q,i+1 mod ii)
  PersistentModular,  // (p,i)-(q,j) for every i != j
};

struct CgraConfig {
  int rows = 2;
  int cols = 2;
  Topology topology = Topology::Mesh;
  bool neighbor_read = true;
  DegreePolicy degree_policy = DegreePolicy::PaperMax;

  int pe_count() const { return rows * cols; }
  PeId pe_at(int row, int col) const { return row * cols + col; }
  int row_of(PeId pe) const { return pe / cols; }
  int col_of(PeId pe) const { return pe % cols; }

  /// Throws InputError if any bound or flag is unsupported.
  void validate() const;
};

/// 4-neighborhood of `pe`, clipped at the grid border, ascending.
std::vector<PeId> neighbors(const CgraConfig& config, PeId pe);

int connectivity_degree(const CgraConfig& config);

// ---------------------------------------------------------------------------
// Modulo routing resource graph
// ---------------------------------------------------------------------------

/// II stacked copies of the PE grid. Vertex numbering is layer-major, then
/// row-major PE order: vertex = layer * pe_count + pe.
class Mrrg {
 public:
  Mrrg(const CgraConfig& config, int ii, TimePolicy policy);

  int ii() const { return ii_; }
  int pe_count() const { return pe_count_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  TimePolicy policy() const { return policy_; }
  std::size_t vertex_count() const { return static_cast<std::size_t>(ii_) * pe_count_; }

  VertexId vertex(PeId pe, int layer) const { return layer * pe_count_ + pe; }
  int label(VertexId v) const { return v / pe_count_; }
  PeId pe_of(VertexId v) const { return v % pe_count_; }

  /// Each undirected edge once, as (a, b) with a < b, sorted.
  const std::vector<std::pair<VertexId, VertexId>>& edges() const { return edges_; }
  std::size_t spatial_edge_count() const { return spatial_edges_; }
  std::size_t time_edge_count() const { return edges_.size() - spatial_edges_; }

  /// Sorted adjacency of `v`.
  const std::vector<VertexId>& adjacent(VertexId v) const { return adjacency_[v]; }
  bool has_edge(VertexId a, VertexId b) const;

 private:
  int ii_;
  int pe_count_;
  int rows_;
  int cols_;
  TimePolicy policy_;
  std::vector<std::pair<VertexId, VertexId>> edges_;
  std::size_t spatial_edges_ = 0;
  std::vector<std::vector<VertexId>> adjacency_;
};

Mrrg build_mrrg(const CgraConfig& config, int ii, TimePolicy policy = TimePolicy::PersistentModular);

const char* to_string(DepKind kind);
const char* to_string(DegreePolicy policy);
const char* to_string(TimePolicy policy);

}  // namespace cgramap
