#include "cgramap/cycles.hpp"

#include <algorithm>
#include <functional>

#include "cgramap/model.hpp"
#include "cgramap/scheduling.hpp"

namespace cgramap {

namespace {

// Tarjan SCC restricted to vertices >= `start`; returns the component of `start`.
std::vector<int> component_of(const std::vector<std::vector<int>>& succ, int start) {
  const int n = static_cast<int>(succ.size());
  std::vector<int> index(n, -1), low(n, 0), comp_id(n, -1);
  std::vector<int> stack;
  std::vector<bool> on_stack(n, false);
  int counter = 0;
  int comps = 0;
  std::function<void(int)> strong = [&](int v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack[v] = true;
    for (int w : succ[v]) {
      if (w < start) continue;
      if (index[w] < 0) {
        strong(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack[w]) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      int w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[w] = false;
        comp_id[w] = comps;
      } while (w != v);
      ++comps;
    }
  };
  strong(start);
  std::vector<int> out;
  for (int v = start; v < n; ++v) {
    if (comp_id[v] == comp_id[start]) out.push_back(v);
  }
  return out;
}

class Johnson {
 public:
  Johnson(const std::vector<std::vector<int>>& succ, const std::function<bool(const std::vector<int>&)>& visit,
          std::size_t cap)
      : succ_(succ), visit_(visit), cap_(cap), blocked_(succ.size(), false), blocked_by_(succ.size()) {}

  std::size_t run() {
    const int n = static_cast<int>(succ_.size());
    for (int s = 0; s < n && !stop_; ++s) {
      const auto comp = component_of(succ_, s);
      in_comp_.assign(succ_.size(), false);
      for (int v : comp) in_comp_[v] = true;
      const bool self_loop = std::find(succ_[s].begin(), succ_[s].end(), s) != succ_[s].end();
      if (comp.size() == 1 && !self_loop) continue;
      for (int v : comp) {
        blocked_[v] = false;
        blocked_by_[v].clear();
      }
      start_ = s;
      circuit(s);
    }
    return found_;
  }

 private:
  void unblock(int u) {
    blocked_[u] = false;
    auto pending = std::move(blocked_by_[u]);
    blocked_by_[u].clear();
    for (int w : pending) {
      if (blocked_[w]) unblock(w);
    }
  }

  bool circuit(int v) {
    bool closed = false;
    path_.push_back(v);
    blocked_[v] = true;
    for (int w : succ_[v]) {
      if (stop_) break;
      if (!in_comp_[w]) continue;
      if (w == start_) {
        ++found_;
        if (!visit_(path_) || found_ >= cap_) stop_ = true;
        closed = true;
      } else if (!blocked_[w] && circuit(w)) {
        closed = true;
      }
    }
    if (closed) {
      unblock(v);
    } else {
      for (int w : succ_[v]) {
        if (!in_comp_[w]) continue;
        auto& b = blocked_by_[w];
        if (std::find(b.begin(), b.end(), v) == b.end()) b.push_back(v);
      }
    }
    path_.pop_back();
    return closed;
  }

  const std::vector<std::vector<int>>& succ_;
  const std::function<bool(const std::vector<int>&)>& visit_;
  std::size_t cap_;
  std::vector<bool> blocked_;
  std::vector<std::vector<int>> blocked_by_;
  std::vector<bool> in_comp_;
  std::vector<int> path_;
  int start_ = 0;
  std::size_t found_ = 0;
  bool stop_ = false;
};

}  // namespace

std::size_t enumerate_elementary_cycles(const std::vector<std::vector<int>>& successors,
                                        const std::function<bool(const std::vector<int>&)>& visit,
                                        std::size_t cap) {
  if (cap == 0) return 0;
  return Johnson(successors, visit, cap).run();
}

int rec_ii(const Dfg& dfg, std::size_t cycle_cap) {
  const int n = static_cast<int>(dfg.size());
  // Parallel edges collapse to the smallest iteration distance (data = 0),
  // which is the one that maximizes length / distance.
  std::vector<std::vector<int>> dist(n, std::vector<int>(n, -1));
  std::vector<std::vector<int>> succ(n);
  for (const auto& e : dfg.edges()) {
    const int d = e.kind == DepKind::Data ? 0 : e.distance;
    int& slot = dist[e.src][e.dst];
    if (slot < 0) succ[e.src].push_back(e.dst);
    slot = slot < 0 ? d : std::min(slot, d);
  }
  for (auto& l : succ) std::sort(l.begin(), l.end());

  int best = 1;
  enumerate_elementary_cycles(
      succ,
      [&](const std::vector<int>& cycle) {
        int distance = 0;
        for (std::size_t i = 0; i < cycle.size(); ++i) {
          distance += dist[cycle[i]][cycle[(i + 1) % cycle.size()]];
        }
        const int length = static_cast<int>(cycle.size());
        // Data edges are acyclic, so every cycle carries distance >= 1.
        best = std::max(best, (length + distance - 1) / distance);
        return true;
      },
      cycle_cap);
  return best;
}

}  // namespace cgramap
