#ifndef TLAB_PATTERN_SEARCH_HPP
#define TLAB_PATTERN_SEARCH_HPP

#include "tlab/geometry.hpp"

#include <functional>

namespace tlab {

struct PatternSearchOptions {
  double initial_step = 1e-2;
  double min_step = 1e-8;
  int max_evaluations = 200;
};

struct PatternSearchResult {
  Vector x;
  double value = 0;
  int evaluations = 0;
};

/// Compass search: polls x +- step*e_i in a fixed order, moves to the first
/// improving point and halves the step after a failed sweep. Infeasible points
/// should evaluate to +inf (extreme barrier). An infeasible start is returned
/// unchanged.
PatternSearchResult pattern_search(const std::function<double(const Vector&)>& objective, const Vector& x0,
                                   const PatternSearchOptions& options);

}  // namespace tlab

#endif  // TLAB_PATTERN_SEARCH_HPP
