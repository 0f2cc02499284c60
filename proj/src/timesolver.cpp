#include "cgramap/timesolver.hpp"

#include <algorithm>
#include <set>

#include <fmt/format.h>

#include "cgramap/errors.hpp"

namespace cgramap {

using Clock = std::chrono::steady_clock;

std::size_t TimeModel::constraint_count() const {
  return deps.size() + static_cast<std::size_t>(ii) + node_count() * static_cast<std::size_t>(ii);
}

bool TimeModel::dependency_allows(DepKind kind, SlotFold src, SlotFold dst) {
  // A larger fold subscript means an earlier stage. Data deps may span one
  // stage forward, loop-carried ones one stage backward.
  const bool same_fold = src.fold == dst.fold;
  if (kind == DepKind::Data) {
    return (same_fold && dst.slot > src.slot) || (src.fold - dst.fold == 1 && dst.slot <= src.slot);
  }
  return (same_fold && dst.slot <= src.slot) || (dst.fold - src.fold == 1 && dst.slot > src.slot);
}

std::vector<std::string> TimeModel::violations(const TimeSolution& solution) const {
  std::vector<std::string> out;
  const auto n = node_count();
  if (solution.ii != ii) out.push_back(fmt::format("solution II {} != model II {}", solution.ii, ii));
  if (solution.assignment.size() != n) {
    out.push_back(fmt::format("assignment covers {} of {} nodes", solution.assignment.size(), n));
    return out;
  }
  for (std::size_t v = 0; v < n; ++v) {
    const auto sf = solution.assignment[v];
    const bool member = std::any_of(domains[v].begin(), domains[v].end(),
                                    [&](const TimeCandidate& c) { return c.slot == sf.slot && c.fold == sf.fold; });
    if (!member) out.push_back(fmt::format("node {}: ({},{}) is not a KMS candidate", v, sf.slot, sf.fold));
  }
  for (const auto& d : deps) {
    if (!dependency_allows(d.kind, solution.assignment[d.src], solution.assignment[d.dst])) {
      out.push_back(fmt::format("{} dependency {}->{} violated", to_string(d.kind), d.src, d.dst));
    }
  }
  for (int s = 0; s < ii; ++s) {
    const auto pop = std::count_if(solution.assignment.begin(), solution.assignment.end(),
                                   [&](const SlotFold& sf) { return sf.slot == s; });
    if (pop > capacity_bound) out.push_back(fmt::format("slot {} holds {} > {} nodes", s, pop, capacity_bound));
  }
  for (std::size_t v = 0; v < n; ++v) {
    for (int s = 0; s < ii; ++s) {
      const auto cnt = std::count_if(neighbors[v].begin(), neighbors[v].end(),
                                     [&](NodeId u) { return solution.assignment[u].slot == s; });
      if (cnt > degree_bound) {
        out.push_back(fmt::format("node {} has {} > {} neighbors in slot {}", v, cnt, degree_bound, s));
      }
    }
  }
  return out;
}

TimeModel encode(const KernelMobilitySchedule& kms, const Dfg& dfg, const CgraConfig& config) {
  config.validate();
  TimeModel m;
  m.ii = kms.ii;
  m.stage_count = kms.stage_count;
  m.mobs_length = kms.length;
  m.capacity_bound = config.pe_count();
  m.degree_bound = connectivity_degree(config);
  m.neighbors = dfg.undirected_neighbors();
  m.domains.assign(dfg.size(), {});
  for (int s = 0; s < kms.ii; ++s) {
    for (const auto& c : kms.slots[s]) {
      if (c.node < 0 || static_cast<std::size_t>(c.node) >= dfg.size()) {
        throw InputError(fmt::format("KMS references unknown node {}", c.node));
      }
      m.domains[c.node].push_back({s, c.fold, c.origin});
    }
  }
  for (std::size_t v = 0; v < dfg.size(); ++v) {
    if (m.domains[v].empty()) {
      throw UnsatForThisIi(fmt::format("node {} has no KMS candidate at II {}", v, kms.ii));
    }
  }
  for (const auto& e : dfg.edges()) {
    if (e.kind == DepKind::LoopCarried && e.distance != 1) {
      throw InputError(fmt::format("unsupported loop-carried distance {} on edge {}->{}", e.distance, e.src, e.dst));
    }
    m.deps.push_back({e.src, e.dst, e.kind});
  }
  return m;
}

// ---------------------------------------------------------------------------
// Search
// ---------------------------------------------------------------------------

namespace {

constexpr std::uint64_t kDeadlineCheckInterval = 4096;

struct DepLink {
  NodeId other;
  DepKind kind;
  bool self_is_src;
};

struct Frame {
  NodeId var;
  int cursor = 0;
  int chosen = -1;
  std::size_t trail_mark = 0;
};

}  // namespace

struct TimeSolver::State {
  const TimeModel& model;
  int n;
  std::vector<std::vector<DepLink>> links;
  std::vector<std::vector<char>> alive;
  std::vector<int> alive_count;
  std::vector<int> chosen;  // candidate index per node, -1 if unassigned
  int assigned = 0;
  std::vector<int> slot_pop;
  std::vector<std::vector<int>> nbr_in_slot;  // [node][slot]
  std::vector<std::pair<NodeId, int>> trail;
  std::vector<Frame> stack;
  bool descend = true;
  std::uint64_t steps = 0;

  explicit State(const TimeModel& m) : model(m), n(static_cast<int>(m.node_count())) {
    links.assign(n, {});
    for (const auto& d : m.deps) {
      if (d.src == d.dst) continue;  // loop-carried self edge: always satisfiable
      links[d.src].push_back({d.dst, d.kind, true});
      links[d.dst].push_back({d.src, d.kind, false});
    }
    alive.resize(n);
    alive_count.resize(n);
    for (int v = 0; v < n; ++v) {
      alive[v].assign(m.domains[v].size(), 1);
      alive_count[v] = static_cast<int>(m.domains[v].size());
    }
    chosen.assign(n, -1);
    slot_pop.assign(m.ii, 0);
    nbr_in_slot.assign(n, std::vector<int>(m.ii, 0));
  }

  SlotFold value(NodeId v, int c) const { return model.domains[v][c].slot_fold(); }

  // Returns false on domain wipe-out.
  bool remove(NodeId v, int c) {
    if (!alive[v][c]) return true;
    alive[v][c] = 0;
    trail.emplace_back(v, c);
    return --alive_count[v] > 0;
  }

  bool remove_slot(NodeId v, int slot) {
    const auto& dom = model.domains[v];
    for (int c = 0; c < static_cast<int>(dom.size()); ++c) {
      if (dom[c].slot == slot && !remove(v, c)) return false;
    }
    return true;
  }

  void restore(std::size_t mark) {
    while (trail.size() > mark) {
      const auto [v, c] = trail.back();
      trail.pop_back();
      alive[v][c] = 1;
      ++alive_count[v];
    }
  }

  void unassign(const Frame& f) {
    const NodeId v = f.var;
    const int s = value(v, f.chosen).slot;
    --slot_pop[s];
    for (NodeId w : model.neighbors[v]) --nbr_in_slot[w][s];
    chosen[v] = -1;
    --assigned;
    restore(f.trail_mark);
  }

  bool assign(Frame& f, int c) {
    const NodeId v = f.var;
    const SlotFold sf = value(v, c);
    const int s = sf.slot;
    if (slot_pop[s] >= model.capacity_bound) return false;
    for (NodeId w : model.neighbors[v]) {
      if (nbr_in_slot[w][s] >= model.degree_bound) return false;
    }
    f.chosen = c;
    chosen[v] = c;
    ++assigned;
    ++slot_pop[s];
    for (NodeId w : model.neighbors[v]) ++nbr_in_slot[w][s];

    if (!propagate(v, sf)) {
      unassign(f);
      f.chosen = -1;
      return false;
    }
    return true;
  }

  bool propagate(NodeId v, SlotFold sf) {
    for (const auto& l : links[v]) {
      const NodeId w = l.other;
      if (chosen[w] >= 0) {
        const SlotFold other = value(w, chosen[w]);
        const bool ok = l.self_is_src ? TimeModel::dependency_allows(l.kind, sf, other)
                                      : TimeModel::dependency_allows(l.kind, other, sf);
        if (!ok) return false;
        continue;
      }
      const auto& dom = model.domains[w];
      for (int c = 0; c < static_cast<int>(dom.size()); ++c) {
        if (!alive[w][c]) continue;
        const SlotFold other = dom[c].slot_fold();
        const bool ok = l.self_is_src ? TimeModel::dependency_allows(l.kind, sf, other)
                                      : TimeModel::dependency_allows(l.kind, other, sf);
        if (!ok && !remove(w, c)) return false;
      }
    }
    const int s = sf.slot;
    if (slot_pop[s] == model.capacity_bound) {
      for (NodeId w = 0; w < n; ++w) {
        if (chosen[w] < 0 && !remove_slot(w, s)) return false;
      }
    }
    for (NodeId w : model.neighbors[v]) {
      if (nbr_in_slot[w][s] != model.degree_bound) continue;
      for (NodeId x : model.neighbors[w]) {
        if (chosen[x] < 0 && !remove_slot(x, s)) return false;
      }
    }
    return true;
  }

  NodeId pick_variable() const {
    NodeId best = -1;
    for (NodeId v = 0; v < n; ++v) {
      if (chosen[v] >= 0) continue;
      if (best < 0 || alive_count[v] < alive_count[best]) best = v;
    }
    return best;
  }

  TimeSolution current() const {
    TimeSolution sol;
    sol.ii = model.ii;
    sol.assignment.reserve(n);
    for (NodeId v = 0; v < n; ++v) sol.assignment.push_back(value(v, chosen[v]));
    return sol;
  }

  TimeStatus advance(Clock::time_point deadline, TimeSolution& out) {
    while (true) {
      if (++steps % kDeadlineCheckInterval == 0 && Clock::now() > deadline) return TimeStatus::Timeout;
      if (descend) {
        descend = false;
        if (assigned == n) {
          out = current();
          return TimeStatus::Sat;
        }
        stack.push_back({pick_variable(), 0, -1, trail.size()});
      }
      if (stack.empty()) return TimeStatus::Exhausted;
      Frame& f = stack.back();
      if (f.chosen >= 0) {
        unassign(f);
        f.chosen = -1;
      }
      const auto size = static_cast<int>(model.domains[f.var].size());
      while (f.cursor < size && !alive[f.var][f.cursor]) ++f.cursor;
      if (f.cursor == size) {
        stack.pop_back();
        continue;
      }
      if (assign(f, f.cursor++)) descend = true;
    }
  }
};

TimeSolver::TimeSolver(const TimeModel& model) : state_(std::make_unique<State>(model)) {}

TimeSolver::~TimeSolver() = default;

std::uint64_t TimeSolver::total_steps() const { return state_->steps; }

TimeOutcome TimeSolver::next(Seconds budget) {
  const auto start = Clock::now();
  const auto deadline = start + std::chrono::duration_cast<Clock::duration>(budget);
  TimeOutcome out;
  TimeSolution sol;
  // An exhausted budget never starts a search.
  out.status = budget.count() <= 0.0 ? TimeStatus::Timeout : state_->advance(deadline, sol);
  if (out.status == TimeStatus::Sat) {
    const auto problems = state_->model.violations(sol);
    if (!problems.empty()) {
      throw std::logic_error("time solver produced an invalid assignment: " + problems.front());
    }
    out.solution = std::move(sol);
  }
  out.elapsed_seconds = Seconds(Clock::now() - start).count();
  out.steps = state_->steps;
  return out;
}

TimeOutcome solve(const TimeModel& model, Seconds budget) {
  TimeSolver solver(model);
  auto out = solver.next(budget);
  if (out.status == TimeStatus::Exhausted) out.status = TimeStatus::Unsat;
  return out;
}

TimeOutcome next_solution(const TimeModel& model, std::span<const TimeSolution> previous, Seconds budget) {
  std::set<std::vector<SlotFold>> blocked;
  for (const auto& p : previous) blocked.insert(p.assignment);
  const auto start = Clock::now();
  TimeSolver solver(model);
  while (true) {
    const auto remaining = budget - Seconds(Clock::now() - start);
    auto out = solver.next(remaining);
    out.elapsed_seconds = Seconds(Clock::now() - start).count();
    if (out.status != TimeStatus::Sat || !blocked.contains(out.solution->assignment)) return out;
  }
}

std::vector<TimeSolution> enumerate_solutions(const TimeModel& model, std::size_t limit, Seconds budget,
                                              bool* complete) {
  std::vector<TimeSolution> out;
  const auto start = Clock::now();
  TimeSolver solver(model);
  if (complete) *complete = false;
  while (out.size() < limit) {
    auto r = solver.next(budget - Seconds(Clock::now() - start));
    if (r.status == TimeStatus::Exhausted) {
      if (complete) *complete = true;
      break;
    }
    if (r.status != TimeStatus::Sat) break;
    out.push_back(std::move(*r.solution));
  }
  return out;
}

}  // namespace cgramap
