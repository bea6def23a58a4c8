#ifndef TLAB_ESTIMATORS_HPP
#define TLAB_ESTIMATORS_HPP

#include "tlab/geometry.hpp"
#include "tlab/scenario.hpp"
#include "tlab/witness.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace tlab {

struct RadiusValue {
  double rho = 0;
  double value = 0;
  std::size_t samples = 0;  // feasible samples that entered the min/max
};

struct ConstantEstimate {
  std::string name;
  std::vector<RadiusValue> per_radius;
  double value = 0;  // value at the smallest radius
  std::uint64_t seed = 0;
  bool no_witness = false;  // empty search at the smallest radius; value is the convention
  bool degenerate = false;  // every sampled x was in A n B
  std::size_t skipped = 0;  // samples dropped because the intersection locator failed
  std::uint64_t harvest_id = 0;
};

/// Unit pair (v1, v2) = (u1, u2) of a feasible witness triple.
struct RelativeNormalPair {
  Vector v1, v2;
  Vector a, b, x;
  double ratio_defect = 0;
  double align1_defect = 0;
  double align2_defect = 0;
  double cone1_dist = 0;
  double cone2_dist = 0;
};

struct EstimatorConfig {
  RadiusSchedule schedule;
  std::size_t samples = 128;      // candidates per radius
  std::size_t translations = 16;  // translation pairs per radius (tr)
  int refine_budget = 60;         // pattern-search evaluations per candidate
  Tolerances tol;

  void validate() const;
};

/// min over x in the shell of max{d(x,A), d(x,B)} / d(x, A n B).
ConstantEstimate estimate_subtransversality(const PairScenario& pair, const EstimatorConfig& config);
/// Same ratio for translated sets A - x1, B - x2 with x1, x2 in the rho-ball;
/// an empty translated intersection contributes 0.
ConstantEstimate estimate_transversality(const PairScenario& pair, const EstimatorConfig& config);
/// Half the smallest |u1 + u2| over witness triples in the ratio band.
ConstantEstimate estimate_intrinsic(const PairScenario& pair, const EstimatorConfig& config);
/// As estimate_intrinsic with the equidistance constraint.
ConstantEstimate estimate_strc(const PairScenario& pair, const EstimatorConfig& config);

/// Pairs of the refined witness triples at one radius (shell inner radius
/// factor*rho); may be empty.
std::vector<RelativeNormalPair> harvest_normal_pairs(const PairScenario& pair, double rho, double eta, std::size_t n,
                                                     std::uint64_t seed, const EstimatorConfig& config = {});

struct EuclideanConstants {
  double itr1 = 0;
  double itr2 = -1;
  double itr3 = 1.4142135623730951;
  double itr_from_pairs = 1;
  bool positively_independent = false;  // some pair with v1 not a positive multiple of v2
  std::size_t pairs = 0;
};

/// Max |v1 - v2|, -min <v1, v2>, the distance from (v, -v) to the cone of
/// pairs minimized over a sphere mesh, and half the smallest |v1 + v2|.
/// Throws NonUnitPair.
EuclideanConstants derived_euclidean_constants(const std::vector<RelativeNormalPair>& pairs,
                                               double unit_tol = 1e-10);

/// Deterministic unit directions: an angle grid in R^2, a Fibonacci lattice in
/// R^3, seeded random points otherwise.
std::vector<Vector> sphere_mesh(Eigen::Index dim);

/// itr and the pair constants computed from one harvest per radius.
struct IntrinsicFamily {
  ConstantEstimate itr, itr1, itr2, itr3;
  std::vector<RelativeNormalPair> pairs;  // harvest at the smallest radius
  bool positively_independent = false;
  double itr_from_pairs = 1;
};
IntrinsicFamily estimate_intrinsic_family(const PairScenario& pair, const EstimatorConfig& config);

struct ItrhatEstimates {
  ConstantEstimate itrhat1, itrhat2;
};
ItrhatEstimates estimate_itrhat(const PairScenario& pair, const EstimatorConfig& config);

struct ScenarioEstimates {
  ConstantEstimate str, tr, itr, strc, itr1, itr2, itr3, itrhat1, itrhat2;
  std::vector<RelativeNormalPair> pairs;
  bool positively_independent = false;
  double itr_from_pairs = 1;

  /// In the fixed output order str, tr, itr, strc, itr1, itr2, itr3, itrhat1, itrhat2.
  std::vector<const ConstantEstimate*> all() const;
};
ScenarioEstimates estimate_all(const PairScenario& pair, const EstimatorConfig& config);

/// Throws InvalidArgument when an estimate violates its range.
void check_estimate_range(const ConstantEstimate& est);

}  // namespace tlab

#endif  // TLAB_ESTIMATORS_HPP
