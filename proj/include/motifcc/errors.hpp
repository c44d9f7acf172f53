#pragma once

#include <stdexcept>
#include <string>

namespace motifcc {

// Observation cannot be explained by any symbol / spec combination
// (e.g. more distinct motifs than the subset size, or a zero-probability
// observation under p_inter = 0).
struct InconsistencyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Belief-propagation message underflowed to all-zero; carries the iteration
// at which normalization became impossible.
struct NumericalCollapseError : std::runtime_error {
  NumericalCollapseError(const std::string& what, int iter)
      : std::runtime_error(what), iteration(iter) {}
  int iteration;
};

}  // namespace motifcc
