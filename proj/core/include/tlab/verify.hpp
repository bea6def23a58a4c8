#ifndef TLAB_VERIFY_HPP
#define TLAB_VERIFY_HPP

#include "tlab/altproj.hpp"
#include "tlab/estimators.hpp"
#include "tlab/scenario.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace tlab {

enum class Relation {
  Equal,      // |lhs - rhs| <= tol
  AtMost,     // lhs <= rhs + tol
  AtLeast,    // lhs >= rhs - tol
  Above,      // lhs > rhs
  SameSide,   // (lhs <= tol) == (rhs <= tol)
};
std::string_view to_string(Relation r);

struct Check {
  std::string id;
  double lhs = 0;
  double rhs = 0;
  double tol = 0;
  Relation relation = Relation::Equal;
  bool pass = false;
  std::string detail;
};

/// Evaluates the relation and fills `pass`.
Check make_check(std::string id, double lhs, double rhs, double tol, Relation relation, std::string detail = {});

struct VerificationReport {
  std::string label;
  std::vector<Check> checks;
  bool overall = true;

  void add(Check c);
  void merge(const VerificationReport& other);
  std::vector<const Check*> failures() const;
};

struct VerifyTolerances {
  double identity = 0.05;     // sampled-constant identities
  double bound_slack = 0.02;  // one-sided bound on itrhat1
  double lemma_rel = 1e-9;
  double lemma_slack = 1e-12;
  double rate_slack = 0.05;
  int rate_window = 8;
  std::size_t lemma_trials = 10000;
};

/// 2 * eta at the smallest radius: below it a constant is treated as zero.
double positivity_threshold(const RadiusSchedule& schedule, const Tolerances& tol);

/// itr^2 + itr1^2/4 = 1, itr2 + 2 itr^2 = 1 and the itr3 relation (sqrt(2) itr
/// or the itr3 = itr = 1 branch). Throws InconsistentInputs when the constants
/// come from different harvests.
VerificationReport check_unit_pair_identities(const ScenarioEstimates& est, double tol);
/// itrhat1^2 + itrhat2^2 = 1, the bound itrhat1 <= 2 itr sqrt(1 - itr^2) for
/// itr < 1/sqrt(2) - slack, and agreement of itrhat1 and itr on being zero.
VerificationReport check_itrhat_identities(const ScenarioEstimates& est, double tol, double bound_slack,
                                           double threshold);
/// 0 <= itr <= strc <= 1 and tr <= str; strc = str on convex pairs.
VerificationReport check_constant_chain(const ScenarioEstimates& est, double tol, bool convex);

struct EquivalenceCase {
  std::string label;
  bool convex = true;
  double str = 0, itr = 0, strc = 0;
};
/// Positivity of itr, strc and str agrees on every case. Throws NonConvexScenario.
VerificationReport check_convex_equivalence(const std::vector<EquivalenceCase>& cases, double threshold);

/// Random-probe checks of the alignment identity
/// | |v|u - |u|v |^2 = 2|u||v|(|u||v| - <u,v>), the normalized-sum inequality
/// |u+v|/(|u|+|v|) >= |u/|u| + v/|v||/2, and the limit of normalized sums of
/// sequences sharing a limiting direction.
VerificationReport lemma_property_suite(std::uint64_t seed, std::size_t trials, double rel_tol = 1e-9,
                                        double slack = 1e-12);

/// One check per scenario invariant, naming the failing one.
VerificationReport check_scenario_validity(const PairScenario& pair, const Tolerances& tol);

/// Projection feasibility; on convex pairs Fejer monotonicity of the distance
/// to A n B and, when str_value exceeds the threshold, the half-step rate
/// bound sqrt(1 - str^2) + slack.
VerificationReport check_alternating_projections(const PairScenario& pair, const APTrace& trace, double str_value,
                                                 double threshold, const Tolerances& tol,
                                                 const VerifyTolerances& vtol);

/// Re-tests every proximal direction emitted at xbar and at the harvested
/// witnesses with half the step.
VerificationReport check_proximal_directions(const PairScenario& pair, const std::vector<RelativeNormalPair>& pairs,
                                             const Tolerances& tol, std::size_t max_witnesses = 16);

/// On convex pairs: no harvested pair with |v1 + v2| <= threshold when str is
/// positive, and one such pair when it is not.
VerificationReport check_opposite_pairs(const ScenarioEstimates& est, double threshold);

struct ScenarioVerification {
  VerificationReport report;
  ScenarioEstimates estimates;
  std::optional<APTrace> trace;
};

/// All per-scenario checks. Invalid scenarios only get the validity checks.
ScenarioVerification verify_scenario(const PairScenario& pair, const EstimatorConfig& config,
                                     const VerifyTolerances& vtol = {});

}  // namespace tlab

#endif  // TLAB_VERIFY_HPP
