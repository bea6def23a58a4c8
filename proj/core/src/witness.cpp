#include "tlab/witness.hpp"

#include "tlab/normal_cone.hpp"
#include "tlab/parallel.hpp"
#include "tlab/pattern_search.hpp"

#include <cmath>
#include <limits>

namespace tlab {

namespace {

bool within_band(WitnessMode mode, double da, double db, double eta) {
  if (mode == WitnessMode::RatioBand) return std::abs(da / db - 1.0) <= eta;
  return std::abs(da - db) <= eta * da;
}

// Moves x toward `anchor` (its projection on the farther set `near`) until the
// distances to both sets agree; `other` is the set whose distance is matched.
Vector slide_to_balance(const SetOracle& other, const Vector& anchor, const Vector& x) {
  const double full = (x - anchor).norm();
  double lo = 0.0;
  double hi = 1.0;
  for (int it = 0; it < 60; ++it) {
    const double t = 0.5 * (lo + hi);
    const Vector xt = anchor + t * (x - anchor);
    if (t * full > distance(other, xt)) {
      hi = t;
    } else {
      lo = t;
    }
  }
  return anchor + hi * (x - anchor);
}

}  // namespace

std::optional<WitnessTriple> witness_at(const PairScenario& pair, const Vector& x, WitnessMode mode,
                                        const WitnessRegion& region, const Tolerances& tol) {
  const double ft = tol.feas_tol;
  Projection pa = project(pair.set_a, x);
  Projection pb = project(pair.set_b, x);
  if (pa.dist <= ft || pb.dist <= ft) return std::nullopt;
  if (distance(pair.set_b, pa.point) <= ft || distance(pair.set_a, pb.point) <= ft) return std::nullopt;

  Vector xs = x;
  if (!within_band(mode, pa.dist, pb.dist, region.eta)) {
    if (pa.dist > pb.dist) {
      xs = slide_to_balance(pair.set_b, pa.point, x);
    } else {
      xs = slide_to_balance(pair.set_a, pb.point, x);
    }
    pa = project(pair.set_a, xs);
    pb = project(pair.set_b, xs);
    if (pa.dist <= ft || pb.dist <= ft) return std::nullopt;
    if (distance(pair.set_b, pa.point) <= ft || distance(pair.set_a, pb.point) <= ft) return std::nullopt;
    if (!within_band(mode, pa.dist, pb.dist, region.eta)) return std::nullopt;
  }

  const double rx = (xs - region.xbar).norm();
  if (rx > region.rho || rx <= region.inner) return std::nullopt;
  if ((pa.point - region.xbar).norm() > region.rho || (pb.point - region.xbar).norm() > region.rho) {
    return std::nullopt;
  }

  WitnessTriple w;
  w.u1 = (xs - pa.point) / pa.dist;
  w.u2 = (xs - pb.point) / pb.dist;
  w.ratio_defect = std::abs(pa.dist / pb.dist - 1.0);
  w.cone1_dist = normal_cone_distance(pair.set_a, pa.point, w.u1, ft);
  w.cone2_dist = normal_cone_distance(pair.set_b, pb.point, w.u2, ft);
  if (w.cone1_dist > region.eta || w.cone2_dist > region.eta) return std::nullopt;
  w.a = std::move(pa.point);
  w.b = std::move(pb.point);
  w.x = std::move(xs);
  return w;
}

Vector witness_candidate(const PairScenario& pair, const WitnessRegion& region, std::uint64_t seed,
                         std::size_t index) {
  Rng rng = make_rng(seed, "witness_candidate", index);
  if (index % 2 == 0) return random_in_shell(rng, region.xbar, region.inner, region.rho);
  const Vector y = random_in_ball(rng, region.xbar, region.rho);
  const Vector z = random_in_ball(rng, region.xbar, region.rho);
  return 0.5 * (project(pair.set_a, y).point + project(pair.set_b, z).point);
}

std::vector<std::optional<WitnessTriple>> search_witnesses(const PairScenario& pair, WitnessMode mode,
                                                           const WitnessRegion& region, std::size_t n,
                                                           std::uint64_t seed, int refine_budget,
                                                           const Tolerances& tol) {
  std::vector<std::optional<WitnessTriple>> out(n);
  PatternSearchOptions ps;
  ps.initial_step = 0.25 * region.rho;
  ps.min_step = 1e-9 * region.rho;
  ps.max_evaluations = refine_budget;

  parallel_for(n, [&](std::size_t i) {
    const Vector x0 = witness_candidate(pair, region, seed, i);
    auto objective = [&](const Vector& x) {
      const auto w = witness_at(pair, x, mode, region, tol);
      return w ? w->half_sum() : std::numeric_limits<double>::infinity();
    };
    const auto best = pattern_search(objective, x0, ps);
    if (std::isfinite(best.value)) out[i] = witness_at(pair, best.x, mode, region, tol);
  });
  return out;
}

}  // namespace tlab
