#pragma once

#include <string>
#include <vector>

#include "cgramap/labeled_dfg.hpp"
#include "cgramap/model.hpp"
#include "cgramap/timesolver.hpp"

namespace cgramap {

enum class Rule { Mono1, Mono2, Mono3, DepOrder, Capacity, Degree };

const char* to_string(Rule rule);

struct Violation {
  Rule rule = Rule::Mono1;
  std::vector<int> elements;  // offending node ids (or slot index for capacity)
  std::string detail;

  friend bool operator==(const Violation&, const Violation&) = default;
};

/// Valid iff `violations` is empty. Checks never stop at the first problem.
struct ValidationReport {
  std::vector<Violation> violations;

  bool valid() const { return violations.empty(); }
};

// The checks below deliberately share no code with the solvers: dependency
// rules, capacity and neighbor counting are re-derived here from their
// definitions.

/// mono1 (injective), mono2 (label preserved), mono3 (edges preserved).
std::vector<Violation> check_monomorphism(const LabeledDfg& ldfg, const Mrrg& mrrg,
                                          const std::vector<VertexId>& image);

/// Every dependency edge against the fold/slot ordering rules.
std::vector<Violation> check_dependencies(const Dfg& dfg, const TimeSolution& solution);

/// Per-slot population against rows*cols and per-(node, slot) neighbor
/// counts against the connectivity degree.
std::vector<Violation> check_capacity_degree(const LabeledDfg& ldfg, const CgraConfig& config, int ii);

ValidationReport validate_all(const Dfg& dfg, const CgraConfig& config, int ii, const TimeSolution& solution,
                              const std::vector<VertexId>& image,
                              TimePolicy policy = TimePolicy::PersistentModular);

}  // namespace cgramap
