#include "tlab/pattern_search.hpp"

#include <cmath>

namespace tlab {

PatternSearchResult pattern_search(const std::function<double(const Vector&)>& objective, const Vector& x0,
                                   const PatternSearchOptions& options) {
  if (!(options.initial_step > 0) || !(options.min_step > 0) || options.max_evaluations < 1) {
    throw Error(ErrorKind::InvalidArgument, "pattern search needs positive steps and budget");
  }
  PatternSearchResult r{x0, objective(x0), 1};
  if (!std::isfinite(r.value)) return r;

  const auto n = x0.size();
  double step = options.initial_step;
  Vector trial(n);
  while (step >= options.min_step && r.evaluations < options.max_evaluations) {
    bool improved = false;
    for (Eigen::Index i = 0; i < n && !improved; ++i) {
      for (double sign : {1.0, -1.0}) {
        if (r.evaluations >= options.max_evaluations) break;
        trial = r.x;
        trial[i] += sign * step;
        const double f = objective(trial);
        ++r.evaluations;
        if (f < r.value) {
          r.x = trial;
          r.value = f;
          improved = true;
          break;
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  return r;
}

}  // namespace tlab
