#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace cgramap {

/// Johnson's elementary-circuit enumeration over a directed simple graph
/// (self loops allowed). `visit` receives each circuit as its vertex
/// sequence starting at the least vertex; return false to stop early.
/// Returns the number of circuits reported.
std::size_t enumerate_elementary_cycles(const std::vector<std::vector<int>>& successors,
                                        const std::function<bool(const std::vector<int>&)>& visit,
                                        std::size_t cap);

}  // namespace cgramap
