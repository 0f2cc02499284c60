#include <gtest/gtest.h>

#include <chrono>
#include <map>

#include "cgramap/brute_force.hpp"
#include "cgramap/errors.hpp"
#include "cgramap/pipeline.hpp"
#include "cgramap/random_dfg.hpp"
#include "fixtures.hpp"

namespace cgramap {
namespace {

using testing::data;
using testing::grid;
using testing::loop;

TEST(MapKernel, RunningExampleReachesMii) {
  const auto g = testing::running_example();
  const auto out = map_kernel(g, grid(2, 2));
  ASSERT_TRUE(out.ok());
  const auto& r = *out.result;
  EXPECT_EQ(out.mii, 4);
  EXPECT_EQ(r.ii, 4);
  EXPECT_EQ(r.stage_count, 2);
  EXPECT_EQ(r.mobs_length, 6);
  EXPECT_TRUE(r.report.valid());
  ASSERT_EQ(r.kernel.size(), 4u);
  for (const auto& row : r.kernel) {
    EXPECT_LE(row.size(), 4u);
    for (std::size_t i = 1; i < row.size(); ++i) EXPECT_LT(row[i - 1].pe, row[i].pe);
  }
}

TEST(MapKernel, SingleNode) {
  const auto out = map_kernel(make_dfg(1, {}), grid(1, 1));
  ASSERT_TRUE(out.ok());
  EXPECT_EQ(out.result->ii, 1);
  EXPECT_EQ(out.result->mapping, (std::vector<PlacedOp>{{0, 0, 0}}));
}

TEST(MapKernel, EmptyGraph) {
  const auto out = map_kernel(make_dfg(0, {}), grid(2, 2));
  ASSERT_TRUE(out.ok());
  EXPECT_EQ(out.result->ii, 1);
  EXPECT_TRUE(out.result->mapping.empty());
}

TEST(MapKernel, IiMaxFailure) {
  const auto out = map_kernel(testing::running_example(), grid(2, 2), {.ii_max = 3});
  EXPECT_FALSE(out.ok());
  EXPECT_EQ(out.failure, FailureKind::UnsatAtIiMax);
  EXPECT_TRUE(out.stats.iis_tried.empty());
}

TEST(MapKernel, PhaseTimeouts) {
  MapOptions o;
  o.time_budget = Seconds{0.0};
  const auto t = map_kernel(testing::chain(3), grid(2, 2), o);
  ASSERT_FALSE(t.ok());
  EXPECT_EQ(t.failure, FailureKind::TimeTimeout);
  EXPECT_TRUE(t.stats.time_timeout);

  o = {};
  o.space_budget = Seconds{0.0};
  const auto s = map_kernel(testing::chain(3), grid(2, 2), o);
  ASSERT_FALSE(s.ok());
  EXPECT_EQ(s.failure, FailureKind::SpaceTimeout);
  EXPECT_TRUE(s.stats.space_timeout);
  EXPECT_EQ(s.stats.time_solutions_tried, 1);
}

TEST(MapKernel, RetryCapZeroStillFindsChain) {
  MapOptions o;
  o.retry_cap = 0;
  const auto out = map_kernel(testing::chain(3), grid(2, 2), o);
  ASSERT_TRUE(out.ok());
  EXPECT_EQ(out.result->ii, 1);
  EXPECT_EQ(out.stats.time_solutions_tried, 1);
}

TEST(MapKernel, Idempotent) {
  const auto g = random_dfg({5, 12, 0.3, 2});
  const auto a = map_kernel(g, grid(3, 3));
  const auto b = map_kernel(g, grid(3, 3));
  ASSERT_TRUE(a.ok());
  ASSERT_TRUE(b.ok());
  EXPECT_EQ(a.result->ii, b.result->ii);
  EXPECT_EQ(a.result->time, b.result->time);
  EXPECT_EQ(a.result->image, b.result->image);
  EXPECT_EQ(a.result->mapping, b.result->mapping);
  EXPECT_EQ(a.stats.time_steps, b.stats.time_steps);
  EXPECT_EQ(a.stats.space_nodes, b.stats.space_nodes);
}

TEST(MapKernel, PhaseTimesAddUp) {
  const auto g = random_dfg({3, 26, 0.15, 3});
  const auto start = std::chrono::steady_clock::now();
  const auto out = map_kernel(g, grid(4, 4));
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const auto& s = out.stats;
  EXPECT_GE(s.time_seconds, 0.0);
  EXPECT_GE(s.space_seconds, 0.0);
  EXPECT_LE(s.time_seconds + s.space_seconds, s.total_seconds * 1.0001 + 1e-6);
  EXPECT_LE(s.total_seconds, wall + 1e-6);
  // Untimed bookkeeping is tiny, so the phases must cover nearly all of it.
  EXPECT_GE(s.time_seconds + s.space_seconds, 0.95 * s.total_seconds - 2e-4);
}

TEST(MapKernel, MatchesBruteForceOnSmallGraphs) {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    const auto g = random_dfg({seed, 2 + static_cast<int>(seed % 5), 0.4, static_cast<int>(seed % 3)});
    const auto expected = brute_force_min_ii(g, grid(2, 2), 4);
    MapOptions o;
    o.ii_max = 4;
    o.retry_cap = -1;
    const auto out = map_kernel(g, grid(2, 2), o);
    ASSERT_EQ(out.ok(), expected.has_value()) << "seed " << seed;
    if (expected) {
      EXPECT_EQ(out.result->ii, expected->ii) << "seed " << seed;
      EXPECT_TRUE(out.result->report.valid());
    }
  }
}

TEST(BruteForce, SmallCases) {
  const auto c = brute_force_min_ii(testing::chain(3), grid(2, 2), 4);
  ASSERT_TRUE(c.has_value());
  EXPECT_EQ(c->ii, 1);
  const auto self = brute_force_min_ii(make_dfg(1, {loop(0, 0)}), grid(2, 2), 4);
  ASSERT_TRUE(self.has_value());
  EXPECT_EQ(self->ii, 1);
  EXPECT_THROW(brute_force_min_ii(make_dfg(9, {}), grid(2, 2), 4), InputError);
  EXPECT_THROW(brute_force_min_ii(make_dfg(2, {}), grid(3, 3), 4), InputError);
}

TEST(BruteForce, FiveNodeDataCliqueGolden) {
  std::vector<DepEdge> edges;
  for (int a = 0; a < 5; ++a) {
    for (int b = a + 1; b < 5; ++b) edges.push_back(data(a, b));
  }
  const auto g = make_dfg(5, edges);
  // The 0->4 dependency spans four steps, so nothing below II 4 works.
  const auto best = brute_force_min_ii(g, grid(2, 2), 4);
  ASSERT_TRUE(best.has_value());
  EXPECT_EQ(best->ii, 4);
  EXPECT_EQ(best->time.assignment, (std::vector<SlotFold>{{3, 1}, {0, 0}, {1, 0}, {2, 0}, {3, 0}}));
  const auto out = map_kernel(g, grid(2, 2), {.ii_max = 4, .retry_cap = -1});
  ASSERT_TRUE(out.ok());
  EXPECT_EQ(out.mii, 2);
  EXPECT_EQ(out.result->ii, 4);
}

TEST(ExpandSchedule, SingleStage) {
  MappingResult r;
  r.ii = 3;
  r.stage_count = 1;
  r.mapping = {{0, 0, 0}, {1, 1, 0}, {1, 2, 0}};
  const auto x = expand_schedule(r, testing::chain(3));
  EXPECT_EQ(x.stage_count, 1);
  EXPECT_TRUE(x.prologue.empty());
  EXPECT_TRUE(x.epilogue.empty());
  int entries = 0;
  for (const auto& row : x.kernel) entries += static_cast<int>(row.size());
  EXPECT_EQ(entries, 3);
  EXPECT_EQ(x.steady.size(), 3u);
  EXPECT_EQ(x.steady[2], (ScheduledOp{2, 1, 2, 0}));
}

TEST(ExpandSchedule, RunningExampleStages) {
  const auto g = testing::running_example();
  const auto out = map_kernel(g, grid(2, 2));
  ASSERT_TRUE(out.ok());
  const auto& r = *out.result;
  const auto x = expand_schedule(r, g);
  ASSERT_EQ(x.stage_count, 2);
  for (const auto& op : x.prologue) {
    EXPECT_LT(op.cycle, 4);
    EXPECT_EQ(op.iteration, 0);
    EXPECT_EQ(r.mapping[op.node].fold, 1);
  }
  for (const auto& op : x.epilogue) {
    EXPECT_GE(op.cycle, 8);
    EXPECT_LT(op.cycle, 12);
    EXPECT_EQ(r.mapping[op.node].fold, 0);
  }
  // Fill and drain run partially populated, the kernel holds every node.
  int kernel_entries = 0;
  for (const auto& row : x.kernel) kernel_entries += static_cast<int>(row.size());
  EXPECT_EQ(kernel_entries, 14);
  EXPECT_LT(x.prologue.size(), 14u);
  EXPECT_LT(x.epilogue.size(), 14u);
  EXPECT_EQ(x.prologue.size() + x.steady.size() + x.epilogue.size(), 2u * 14u);
}

TEST(ExpandSchedule, ExecutesEveryIterationInOrder) {
  const auto g = testing::running_example();
  const auto out = map_kernel(g, grid(2, 2));
  ASSERT_TRUE(out.ok());
  const int iterations = 5;
  const auto x = expand_schedule(*out.result, g, iterations);
  std::map<std::pair<int, int>, int> cycle;  // (iteration, node) -> cycle
  std::map<std::pair<int, int>, int> pe_busy;  // (cycle, pe) -> uses
  for (const auto* part : {&x.prologue, &x.steady, &x.epilogue}) {
    for (const auto& op : *part) {
      EXPECT_TRUE(cycle.emplace(std::pair{op.iteration, op.node}, op.cycle).second);
      const int uses = ++pe_busy[std::pair{op.cycle, op.pe}];
      EXPECT_EQ(uses, 1);
    }
  }
  EXPECT_EQ(cycle.size(), static_cast<std::size_t>(iterations * 14));
  for (int j = 0; j < iterations; ++j) {
    for (const auto& e : g.edges()) {
      if (e.kind == DepKind::Data) {
        const int gap = cycle.at({j, e.dst}) - cycle.at({j, e.src});
        EXPECT_GE(gap, 1);
        EXPECT_LE(gap, x.ii);
      } else if (j + 1 < iterations) {
        const int gap = cycle.at({j + 1, e.dst}) - cycle.at({j, e.src});
        EXPECT_GE(gap, 1);
        EXPECT_LE(gap, x.ii);
      }
    }
  }
  EXPECT_THROW(expand_schedule(*out.result, g, 1), InputError);
}

TEST(FailureKind, Names) {
  EXPECT_STREQ(to_string(FailureKind::UnsatAtIiMax), "unsat-at-ii-max");
  EXPECT_STREQ(to_string(FailureKind::TimeTimeout), "time-timeout");
  EXPECT_STREQ(to_string(FailureKind::SpaceTimeout), "space-timeout");
}

}  // namespace
}  // namespace cgramap
