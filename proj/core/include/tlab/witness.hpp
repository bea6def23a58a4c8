#ifndef TLAB_WITNESS_HPP
#define TLAB_WITNESS_HPP

#include "tlab/geometry.hpp"
#include "tlab/scenario.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace tlab {

/// Points a in A\B, b in B\A and x with unit directions u1 = (x-a)/|x-a|,
/// u2 = (x-b)/|x-b|.
struct WitnessTriple {
  Vector a, b, x;
  Vector u1, u2;
  double ratio_defect = 0;  // | |x-a|/|x-b| - 1 |
  double cone1_dist = 0;    // d(u1, N_A(a))
  double cone2_dist = 0;    // d(u2, N_B(b))

  double half_sum() const { return 0.5 * (u1 + u2).norm(); }
};

enum class WitnessMode {
  RatioBand,    // | |x-a|/|x-b| - 1 | <= eta
  Equidistant,  // | |x-a| - |x-b| | <= eta |x-a|
};

/// Admissible region for one radius: x in the shell inner < |x - xbar| <= rho,
/// a and b within rho of xbar, defects bounded by eta.
struct WitnessRegion {
  Vector xbar;
  double rho = 0;
  double inner = 0;
  double eta = 0;
};

/// Triple generated by x: a = P_A(x), b = P_B(x), so u1 and u2 are proximal
/// normals. When the distance condition fails, x slides along the segment to
/// the farther projection until both distances agree. nullopt when infeasible.
std::optional<WitnessTriple> witness_at(const PairScenario& pair, const Vector& x, WitnessMode mode,
                                        const WitnessRegion& region, const Tolerances& tol);

/// Start point for candidate `index`: even indices draw x uniformly in the
/// shell, odd ones take the midpoint of P_A(y), P_B(z) for y, z in the ball.
Vector witness_candidate(const PairScenario& pair, const WitnessRegion& region, std::uint64_t seed,
                         std::size_t index);

/// Refines each of n candidates by pattern search on x and returns the best
/// triple per candidate (nullopt where no feasible point was reached).
std::vector<std::optional<WitnessTriple>> search_witnesses(const PairScenario& pair, WitnessMode mode,
                                                           const WitnessRegion& region, std::size_t n,
                                                           std::uint64_t seed, int refine_budget,
                                                           const Tolerances& tol);

}  // namespace tlab

#endif  // TLAB_WITNESS_HPP
