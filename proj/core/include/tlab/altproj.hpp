#ifndef TLAB_ALTPROJ_HPP
#define TLAB_ALTPROJ_HPP

#include "tlab/geometry.hpp"
#include "tlab/scenario.hpp"

#include <optional>
#include <string_view>
#include <vector>

namespace tlab {

enum class Termination { Converged, Stalled, BudgetExhausted };
std::string_view to_string(Termination t);

/// x0, P_B(x0), P_A(P_B(x0)), ... with distances recorded per iterate.
struct APTrace {
  std::vector<Vector> points;
  std::vector<double> dist_a, dist_b, dist_inter;
  int cycles = 0;
  Termination reason = Termination::BudgetExhausted;

  /// Iterate after `cycle` full cycles (points[2*cycle]).
  const Vector& after_cycle(int cycle) const { return points[static_cast<std::size_t>(2 * cycle)]; }
  double inter_after_cycle(int cycle) const { return dist_inter[static_cast<std::size_t>(2 * cycle)]; }
};

struct StallPair {
  Vector p;  // in A
  Vector q;  // in B
  double gap = 0;
};

/// Applies P_B then P_A per cycle until d(x, A n B) <= tol after a cycle, a
/// stall is detected, or max_cycles is reached.
APTrace run_alternating_projections(const PairScenario& pair, const Vector& x0, int max_cycles, double tol);

struct RateFit {
  double rate_c = 0;       // per full cycle
  double alpha_coeff = 0;  // dist_inter(k) ~ alpha * c^k
  double quality = 0;      // coefficient of determination
  double half_step_rate() const;
};

/// Least-squares line through (k, log dist_inter after cycle k) over the
/// trailing `window` cycles. Throws NoDecay for stalled traces or when a
/// windowed distance is zero; InvalidArgument when the trace is too short.
RateFit fit_linear_rate(const APTrace& trace, int window);

/// Stationary pair when the last two full cycles repeat within tol while the
/// distance to the intersection stays above tol.
std::optional<StallPair> detect_stall(const APTrace& trace, double tol);

}  // namespace tlab

#endif  // TLAB_ALTPROJ_HPP
