#include <gtest/gtest.h>

#include <set>

#include "cgramap/errors.hpp"
#include "cgramap/random_dfg.hpp"
#include "cgramap/scheduling.hpp"
#include "cgramap/timesolver.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

namespace cgramap {
namespace {

using testing::chain;
using testing::data;
using testing::grid;
using testing::loop;

constexpr Seconds kBudget{30.0};

TimeModel model_for(const Dfg& g, int ii, const CgraConfig& cfg = grid(2, 2)) {
  return encode(build_kms(mobility_schedule(g), ii), g, cfg);
}

// Nodes without dependencies, each free to take any slot of `slots`.
TimeModel free_model(int nodes, int slots, int capacity) {
  TimeModel m;
  m.ii = slots;
  m.stage_count = 1;
  m.mobs_length = slots;
  m.capacity_bound = capacity;
  m.degree_bound = nodes;
  m.domains.resize(nodes);
  m.neighbors.resize(nodes);
  for (auto& d : m.domains) {
    for (int s = 0; s < slots; ++s) d.push_back({s, 0, s});
  }
  return m;
}

TEST(DependencyRule, DataWithinFoldNeedsLaterSlot) {
  std::set<std::pair<int, int>> allowed;
  for (int su : {0, 1}) {
    if (TimeModel::dependency_allows(DepKind::Data, {su, 0}, {1, 0})) allowed.insert({su, 1});
  }
  EXPECT_EQ(allowed, (std::set<std::pair<int, int>>{{0, 1}}));
}

TEST(DependencyRule, MatchesAbsoluteTimeDefinition) {
  // II 4, two stages: every (s,k) pair against the tau-window oracle.
  const int ii = 4, length = 6;
  auto tau = [&](SlotFold x) { return x.slot - x.fold * ii + (length - ii); };
  for (auto kind : {DepKind::Data, DepKind::LoopCarried}) {
    for (int ss = 0; ss < ii; ++ss) {
      for (int ks = 0; ks < 2; ++ks) {
        for (int sd = 0; sd < ii; ++sd) {
          for (int kd = 0; kd < 2; ++kd) {
            const SlotFold s{ss, ks}, d{sd, kd};
            EXPECT_EQ(TimeModel::dependency_allows(kind, s, d), oracle::dep_ok(kind, tau(s), tau(d), ii))
                << to_string(kind) << " s=(" << ss << "," << ks << ") d=(" << sd << "," << kd << ")";
          }
        }
      }
    }
  }
  // The wrap case: source one fold ahead, destination at an earlier slot.
  EXPECT_TRUE(TimeModel::dependency_allows(DepKind::Data, {3, 1}, {1, 0}));
}

TEST(Encode, RunningExampleBounds) {
  const auto g = testing::running_example();
  const auto m = model_for(g, 4);
  EXPECT_EQ(m.capacity_bound, 4);
  EXPECT_EQ(m.degree_bound, 3);
  EXPECT_EQ(m.stage_count, 2);
  EXPECT_EQ(m.deps.size(), g.edges().size());
  EXPECT_EQ(m.constraint_count(), g.edges().size() + 4 + 14 * 4);
  // Slot 0 offers six candidates; at most four may be chosen.
  int slot0 = 0;
  for (const auto& d : m.domains) {
    for (const auto& c : d) slot0 += c.slot == 0;
  }
  EXPECT_EQ(slot0, 6);
  const auto out = solve(m, kBudget);
  ASSERT_EQ(out.status, TimeStatus::Sat);
  int pop0 = 0;
  for (const auto& sf : out.solution->assignment) pop0 += sf.slot == 0;
  EXPECT_LE(pop0, 4);
}

TEST(Encode, ConstraintCountIgnoresGridSize) {
  const auto g = testing::running_example();
  const auto a = model_for(g, 5, grid(5, 5));
  const auto b = model_for(g, 5, grid(20, 20));
  EXPECT_EQ(a.constraint_count(), b.constraint_count());
  EXPECT_NE(a.capacity_bound, b.capacity_bound);
}

TEST(Encode, Errors) {
  const auto g = make_dfg(4, {data(0, 1), data(1, 2), data(2, 3), loop(3, 0, 3)});
  EXPECT_THROW(model_for(g, 4), InputError);

  KernelMobilitySchedule empty;
  empty.ii = 1;
  empty.length = 1;
  empty.stage_count = 1;
  empty.slots.resize(1);
  EXPECT_THROW(encode(empty, make_dfg(1, {}), grid(2, 2)), UnsatForThisIi);
}

TEST(Solve, TwoNodeChain) {
  const auto out = solve(model_for(chain(2), 2), kBudget);
  ASSERT_EQ(out.status, TimeStatus::Sat);
  EXPECT_EQ(out.solution->assignment, (std::vector<SlotFold>{{0, 0}, {1, 0}}));
}

TEST(Solve, SingleNode) {
  const auto out = solve(model_for(make_dfg(1, {}), 1), kBudget);
  ASSERT_EQ(out.status, TimeStatus::Sat);
  EXPECT_EQ(out.solution->assignment, (std::vector<SlotFold>{{0, 0}}));
}

TEST(Solve, StarIsUnsat) {
  const auto g = testing::star();
  const auto m = model_for(g, testing::kStarIi);
  EXPECT_TRUE(oracle::time_solutions(m, g, grid(2, 2)).empty());
  EXPECT_EQ(solve(m, kBudget).status, TimeStatus::Unsat);
  EXPECT_EQ(next_solution(m, {}, kBudget).status, TimeStatus::Exhausted);
}

TEST(Solve, EmptyModel) {
  const auto out = solve(model_for(make_dfg(0, {}), 1), kBudget);
  ASSERT_EQ(out.status, TimeStatus::Sat);
  EXPECT_TRUE(out.solution->assignment.empty());
}

TEST(Solve, TimesOutOnPigeonhole) {
  const auto m = free_model(11, 10, 1);
  const auto out = solve(m, Seconds{0.0});
  EXPECT_EQ(out.status, TimeStatus::Timeout);
  EXPECT_FALSE(out.solution.has_value());
}

TEST(Solve, Deterministic) {
  const auto m = model_for(testing::running_example(), 4);
  const auto a = solve(m, kBudget);
  const auto b = solve(m, kBudget);
  ASSERT_EQ(a.status, TimeStatus::Sat);
  EXPECT_EQ(a.solution, b.solution);
  EXPECT_EQ(a.steps, b.steps);
}

TEST(NextSolution, InterchangeableNodes) {
  const auto m = free_model(2, 2, 1);
  std::vector<TimeSolution> seen;
  for (int i = 0; i < 2; ++i) {
    const auto out = next_solution(m, seen, kBudget);
    ASSERT_EQ(out.status, TimeStatus::Sat);
    seen.push_back(*out.solution);
  }
  EXPECT_NE(seen[0], seen[1]);
  EXPECT_EQ(next_solution(m, seen, kBudget).status, TimeStatus::Exhausted);
}

TEST(NextSolution, UniqueSolution) {
  const auto m = model_for(chain(2), 2);
  const auto first = next_solution(m, {}, kBudget);
  ASSERT_EQ(first.status, TimeStatus::Sat);
  const std::vector<TimeSolution> prev{*first.solution};
  EXPECT_EQ(next_solution(m, prev, kBudget).status, TimeStatus::Exhausted);
}

TEST(TimeSolver, ResumesWithoutRepeats) {
  const auto m = model_for(testing::running_example(), 4);
  TimeSolver solver(m);
  std::set<std::vector<SlotFold>> seen;
  while (true) {
    const auto out = solver.next(kBudget);
    if (out.status != TimeStatus::Sat) {
      EXPECT_EQ(out.status, TimeStatus::Exhausted);
      break;
    }
    EXPECT_TRUE(m.violations(*out.solution).empty());
    EXPECT_TRUE(seen.insert(out.solution->assignment).second);
  }
  EXPECT_EQ(seen, oracle::time_solutions(m, testing::running_example(), grid(2, 2)));
}

TEST(Enumerate, MatchesBruteForceOnRandomModels) {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const auto g = random_dfg({seed, 2 + static_cast<int>(seed % 5), 0.4, static_cast<int>(seed % 3)});
    for (int ii = 1; ii <= 3; ++ii) {
      for (const auto& cfg : {grid(1, 2), grid(2, 2)}) {
        const auto m = model_for(g, ii, cfg);
        bool complete = false;
        const auto sols = enumerate_solutions(m, 100000, kBudget, &complete);
        ASSERT_TRUE(complete);
        std::set<std::vector<SlotFold>> got;
        for (const auto& s : sols) got.insert(s.assignment);
        EXPECT_EQ(got.size(), sols.size());
        EXPECT_EQ(got, oracle::time_solutions(m, g, cfg)) << "seed " << seed << " ii " << ii;
      }
    }
  }
}

TEST(Violations, ReportsEachFamily) {
  const auto m = free_model(3, 2, 2);
  TimeSolution bad{2, {{0, 0}, {0, 0}, {0, 0}}};
  const auto v = m.violations(bad);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_NE(v[0].find("slot 0"), std::string::npos);
  EXPECT_FALSE(m.violations(TimeSolution{2, {{0, 0}}}).empty());
  EXPECT_FALSE(m.violations(TimeSolution{2, {{5, 0}, {0, 0}, {1, 0}}}).empty());
}

}  // namespace
}  // namespace cgramap
