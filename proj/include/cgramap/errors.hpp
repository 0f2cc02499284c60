#pragma once

#include <stdexcept>
#include <string>

namespace cgramap {

/// Malformed or unsupported input (bad file contents, out-of-range index).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input that is well-formed but violates a graph invariant (e.g. a cycle
/// made only of data edges).
class StructuralError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A kernel mobility schedule left some node without candidates at this II.
class UnsatForThisIi : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cgramap
