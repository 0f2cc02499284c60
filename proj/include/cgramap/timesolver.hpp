#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cgramap/model.hpp"
#include "cgramap/scheduling.hpp"

namespace cgramap {

using Seconds = std::chrono::duration<double>;

/// A kernel slot together with its fold (iteration) subscript.
struct SlotFold {
  int slot = 0;
  int fold = 0;

  friend auto operator<=>(const SlotFold&, const SlotFold&) = default;
};

struct TimeCandidate {
  int slot = 0;
  int fold = 0;
  int origin = 0;  // MobS time step

  SlotFold slot_fold() const { return {slot, fold}; }
};

struct DepConstraint {
  NodeId src = 0;
  NodeId dst = 0;
  DepKind kind = DepKind::Data;
};

struct TimeSolution {
  int ii = 1;
  std::vector<SlotFold> assignment;  // indexed by node id

  friend bool operator==(const TimeSolution&, const TimeSolution&) = default;
};

/// Finite-domain model of the time dimension at one II.
///
/// One variable per DFG node ranging over its KMS candidates, one
/// constraint per dependency edge, one capacity constraint per slot and one
/// connectivity constraint per (node, slot). Grid size only enters through
/// the two scalar bounds.
struct TimeModel {
  int ii = 1;
  int stage_count = 0;
  int mobs_length = 0;
  std::vector<std::vector<TimeCandidate>> domains;
  std::vector<DepConstraint> deps;
  int capacity_bound = 1;
  int degree_bound = 1;
  std::vector<std::vector<NodeId>> neighbors;  // undirected, both edge kinds

  std::size_t node_count() const { return domains.size(); }
  std::size_t constraint_count() const;

  /// Data:  (k_s == k_d and s_d >  s_s) or (k_s - k_d == 1 and s_d <= s_s)
  /// Loop:  (k_s == k_d and s_d <= s_s) or (k_d - k_s == 1 and s_d >  s_s)
  /// A larger k means an earlier MobS time.
  static bool dependency_allows(DepKind kind, SlotFold src, SlotFold dst);

  /// Human-readable list of every violated constraint (empty when satisfied).
  /// Evaluates the definitions directly, without the solver's counters.
  std::vector<std::string> violations(const TimeSolution& solution) const;
};

/// Builds the model; throws UnsatForThisIi if some node has no candidate and
/// InputError for loop-carried distances other than 1.
TimeModel encode(const KernelMobilitySchedule& kms, const Dfg& dfg, const CgraConfig& config);

enum class TimeStatus { Sat, Unsat, Exhausted, Timeout };

struct TimeOutcome {
  TimeStatus status = TimeStatus::Unsat;
  std::optional<TimeSolution> solution;
  double elapsed_seconds = 0.0;
  std::uint64_t steps = 0;
};

/// Resumable backtracking search over a TimeModel.
///
/// Variable order: smallest live domain first, ties by node id. Value order:
/// domain order. Forward checking prunes dependency partners, full slots and
/// saturated neighbor counts. Every call to next() yields a solution distinct
/// from all previous ones, in a deterministic order.
class TimeSolver {
 public:
  explicit TimeSolver(const TimeModel& model);
  ~TimeSolver();
  TimeSolver(const TimeSolver&) = delete;
  TimeSolver& operator=(const TimeSolver&) = delete;

  /// Sat with a solution, Exhausted once the space is used up, or Timeout
  /// (immediately when `budget` is not positive).
  TimeOutcome next(Seconds budget);

  std::uint64_t total_steps() const;

 private:
  struct State;
  std::unique_ptr<State> state_;
};

/// First solution: Sat, Unsat or Timeout.
TimeOutcome solve(const TimeModel& model, Seconds budget);

/// A solution differing from every entry of `previous`; Exhausted when none.
TimeOutcome next_solution(const TimeModel& model, std::span<const TimeSolution> previous, Seconds budget);

/// All solutions up to `limit`; `complete` is set when the space was exhausted.
std::vector<TimeSolution> enumerate_solutions(const TimeModel& model, std::size_t limit, Seconds budget,
                                              bool* complete = nullptr);

}  // namespace cgramap
