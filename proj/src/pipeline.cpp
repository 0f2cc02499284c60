#include "cgramap/pipeline.hpp"

#include <algorithm>
#include <chrono>

#include <fmt/format.h>

#include "cgramap/errors.hpp"
#include "cgramap/labeled_dfg.hpp"
#include "cgramap/scheduling.hpp"
#include "cgramap/spacesolver.hpp"

namespace cgramap {

using Clock = std::chrono::steady_clock;

const char* to_string(FailureKind kind) {
  switch (kind) {
    case FailureKind::UnsatAtIiMax: return "unsat-at-ii-max";
    case FailureKind::TimeTimeout: return "time-timeout";
    case FailureKind::SpaceTimeout: return "space-timeout";
  }
  return "?";
}

namespace {

// Accumulates wall time into one of the two phase counters.
class PhaseTimer {
 public:
  explicit PhaseTimer(double& sink) : sink_(sink), start_(Clock::now()) {}
  ~PhaseTimer() { sink_ += Seconds(Clock::now() - start_).count(); }
  PhaseTimer(const PhaseTimer&) = delete;
  PhaseTimer& operator=(const PhaseTimer&) = delete;

 private:
  double& sink_;
  Clock::time_point start_;
};

MappingResult assemble(const Dfg& dfg, const Mrrg& mrrg, const KernelMobilitySchedule& kms,
                       int mii, TimeSolution time, std::vector<VertexId> image) {
  MappingResult r;
  r.ii = kms.ii;
  r.mii = mii;
  r.stage_count = kms.stage_count;
  r.mobs_length = kms.length;
  r.kernel.assign(kms.ii, {});
  for (NodeId v = 0; v < static_cast<NodeId>(dfg.size()); ++v) {
    const PeId pe = mrrg.pe_of(image[v]);
    r.mapping.push_back({pe, time.assignment[v].slot, time.assignment[v].fold});
    r.kernel[time.assignment[v].slot].push_back({pe, v});
  }
  for (auto& row : r.kernel) {
    std::sort(row.begin(), row.end(), [](const KernelEntry& a, const KernelEntry& b) { return a.pe < b.pe; });
  }
  r.time = std::move(time);
  r.image = std::move(image);
  return r;
}

}  // namespace

MapOutcome map_kernel(const Dfg& dfg, const CgraConfig& config, const MapOptions& options) {
  config.validate();
  const auto run_start = Clock::now();
  MapOutcome out;
  MapStats& st = out.stats;

  MobilitySchedule mobility;
  {
    PhaseTimer t(st.time_seconds);
    mobility = mobility_schedule(dfg);
    out.mii = mii(dfg, config);
  }
  out.ii_max = options.ii_max.value_or(std::max(out.mii + 16, mobility.length));

  auto time_left = [&] { return options.time_budget - Seconds(st.time_seconds); };
  auto space_left = [&] { return options.space_budget - Seconds(st.space_seconds); };
  auto finish = [&] {
    st.total_seconds = Seconds(Clock::now() - run_start).count();
    if (out.result) out.result->stats = st;
    return out;
  };

  for (int ii = out.mii; ii <= out.ii_max; ++ii) {
    st.iis_tried.push_back(ii);
    KernelMobilitySchedule kms;
    TimeModel model;
    {
      PhaseTimer t(st.time_seconds);
      kms = build_kms(mobility, ii);
      try {
        model = encode(kms, dfg, config);
      } catch (const UnsatForThisIi&) {
        continue;
      }
    }
    TimeSolver solver(model);
    std::optional<Mrrg> mrrg;
    for (int attempt = 0; options.retry_cap < 0 || attempt <= options.retry_cap; ++attempt) {
      TimeOutcome time_out;
      {
        PhaseTimer t(st.time_seconds);
        time_out = solver.next(time_left());
        st.time_steps = solver.total_steps();
      }
      if (time_out.status == TimeStatus::Timeout) {
        st.time_timeout = true;
        out.failure = FailureKind::TimeTimeout;
        return finish();
      }
      if (time_out.status != TimeStatus::Sat) break;
      ++st.time_solutions_tried;

      SpaceOutcome space_out;
      {
        PhaseTimer t(st.space_seconds);
        if (!mrrg) mrrg.emplace(config, ii, options.time_policy);
        const LabeledDfg ldfg = label_dfg(dfg, *time_out.solution);
        ++st.space_attempts;
        space_out = find_monomorphism(ldfg, *mrrg, space_left());
        st.space_nodes += space_out.stats.nodes_expanded;
        if (space_out.status == SpaceStatus::Found) {
          out.result = assemble(dfg, *mrrg, kms, out.mii, *time_out.solution, space_out.assignment->image);
          out.result->report =
              validate_all(dfg, config, ii, out.result->time, out.result->image, options.time_policy);
          if (!out.result->report.valid()) {
            throw std::logic_error("mapping failed validation: " + out.result->report.violations.front().detail);
          }
        }
      }
      if (space_out.status == SpaceStatus::Timeout) {
        st.space_timeout = true;
        out.failure = FailureKind::SpaceTimeout;
        return finish();
      }
      if (out.result) return finish();
    }
  }
  out.failure = FailureKind::UnsatAtIiMax;
  return finish();
}

ExpandedSchedule expand_schedule(const MappingResult& result, const Dfg& dfg, int iterations) {
  ExpandedSchedule x;
  x.ii = result.ii;
  x.stage_count = result.stage_count;
  x.iterations = iterations > 0 ? iterations : std::max(result.stage_count, 1);
  if (x.iterations < x.stage_count) {
    throw InputError(fmt::format("need at least {} iterations to reach the kernel, got {}", x.stage_count,
                                 x.iterations));
  }
  const int fill_end = (x.stage_count - 1) * x.ii;
  const int drain_start = x.iterations * x.ii;

  x.kernel.assign(x.ii, {});
  for (NodeId v = 0; v < static_cast<NodeId>(dfg.size()); ++v) {
    const auto& p = result.mapping[v];
    x.kernel[p.slot].push_back({p.pe, v, p.fold});
  }
  for (auto& row : x.kernel) {
    std::sort(row.begin(), row.end(), [](const KernelOp& a, const KernelOp& b) { return a.pe < b.pe; });
  }

  std::vector<ScheduledOp> all;
  for (int j = 0; j < x.iterations; ++j) {
    for (NodeId v = 0; v < static_cast<NodeId>(dfg.size()); ++v) {
      const auto& p = result.mapping[v];
      all.push_back({j * x.ii + (x.stage_count - 1 - p.fold) * x.ii + p.slot, p.pe, v, j});
    }
  }
  std::sort(all.begin(), all.end(), [](const ScheduledOp& a, const ScheduledOp& b) {
    return a.cycle != b.cycle ? a.cycle < b.cycle : a.pe < b.pe;
  });
  for (const auto& op : all) {
    if (op.cycle < fill_end) {
      x.prologue.push_back(op);
    } else if (op.cycle < drain_start) {
      x.steady.push_back(op);
    } else {
      x.epilogue.push_back(op);
    }
  }
  return x;
}

}  // namespace cgramap
