#include "tlab/verify.hpp"

#include "tlab/normal_cone.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace tlab {

std::string_view to_string(Relation r) {
  switch (r) {
    case Relation::Equal:
      return "eq";
    case Relation::AtMost:
      return "le";
    case Relation::AtLeast:
      return "ge";
    case Relation::Above:
      return "gt";
    case Relation::SameSide:
      return "same_side";
  }
  return "?";
}

Check make_check(std::string id, double lhs, double rhs, double tol, Relation relation, std::string detail) {
  Check c{std::move(id), lhs, rhs, tol, relation, false, std::move(detail)};
  switch (relation) {
    case Relation::Equal:
      c.pass = std::abs(lhs - rhs) <= tol;
      break;
    case Relation::AtMost:
      c.pass = lhs <= rhs + tol;
      break;
    case Relation::AtLeast:
      c.pass = lhs >= rhs - tol;
      break;
    case Relation::Above:
      c.pass = lhs > rhs;
      break;
    case Relation::SameSide:
      c.pass = (lhs <= tol) == (rhs <= tol);
      break;
  }
  return c;
}

void VerificationReport::add(Check c) {
  overall = overall && c.pass;
  checks.push_back(std::move(c));
}

void VerificationReport::merge(const VerificationReport& other) {
  for (const auto& c : other.checks) add(c);
}

std::vector<const Check*> VerificationReport::failures() const {
  std::vector<const Check*> out;
  for (const auto& c : checks)
    if (!c.pass) out.push_back(&c);
  return out;
}

double positivity_threshold(const RadiusSchedule& schedule, const Tolerances& tol) {
  return 2.0 * schedule.relaxation(tol.eta0, schedule.smallest());
}

VerificationReport check_unit_pair_identities(const ScenarioEstimates& est, double tol) {
  const auto id = est.itr.harvest_id;
  if (est.itr1.harvest_id != id || est.itr2.harvest_id != id || est.itr3.harvest_id != id) {
    throw Error(ErrorKind::InconsistentInputs, "pair constants come from different harvests");
  }
  VerificationReport r;
  const double itr = est.itr.value;
  r.add(make_check("itr_sq_plus_quarter_itr1_sq", itr * itr + 0.25 * est.itr1.value * est.itr1.value, 1.0, tol,
                   Relation::Equal));
  r.add(make_check("itr2_plus_twice_itr_sq", est.itr2.value + 2.0 * itr * itr, 1.0, tol, Relation::Equal));
  if (est.positively_independent || est.pairs.empty()) {
    r.add(make_check("itr3_eq_sqrt2_itr", est.itr3.value, std::numbers::sqrt2 * itr, tol, Relation::Equal));
  } else {
    r.add(make_check("itr3_eq_one", est.itr3.value, 1.0, tol, Relation::Equal, "all pairs positively dependent"));
    r.add(make_check("itr_eq_one", itr, 1.0, tol, Relation::Equal, "all pairs positively dependent"));
  }
  r.add(make_check("itr_matches_pair_minimum", itr, est.itr_from_pairs, 1e-9, Relation::Equal));
  return r;
}

VerificationReport check_itrhat_identities(const ScenarioEstimates& est, double tol, double bound_slack,
                                           double threshold) {
  VerificationReport r;
  const double h1 = est.itrhat1.value;
  const double h2 = est.itrhat2.value;
  const double itr = est.itr.value;
  r.add(make_check("itrhat1_sq_plus_itrhat2_sq", h1 * h1 + h2 * h2, 1.0, tol, Relation::Equal));
  if (itr < 1.0 / std::numbers::sqrt2 - bound_slack) {
    r.add(make_check("itrhat1_le_2itr_sqrt_1_minus_itr_sq", h1, 2.0 * itr * std::sqrt(1.0 - itr * itr), bound_slack,
                     Relation::AtMost));
  }
  r.add(make_check("itrhat1_zero_iff_itr_zero", h1, itr, threshold, Relation::SameSide));
  return r;
}

VerificationReport check_constant_chain(const ScenarioEstimates& est, double tol, bool convex) {
  VerificationReport r;
  r.add(make_check("constants_nonnegative", std::min({est.str.value, est.tr.value, est.itr.value, est.strc.value}),
                   0.0, 0.0, Relation::AtLeast));
  r.add(make_check("itr_le_strc", est.itr.value, est.strc.value, tol, Relation::AtMost));
  r.add(make_check("strc_le_one", est.strc.value, 1.0, 0.0, Relation::AtMost));
  r.add(make_check("tr_le_str", est.tr.value, est.str.value, tol, Relation::AtMost));
  if (convex) r.add(make_check("strc_eq_str", est.strc.value, est.str.value, tol, Relation::Equal));
  return r;
}

VerificationReport check_convex_equivalence(const std::vector<EquivalenceCase>& cases, double threshold) {
  VerificationReport r;
  for (const auto& c : cases) {
    if (!c.convex) throw Error(ErrorKind::NonConvexScenario, "scenario '" + c.label + "' is not convex");
  }
  for (const auto& c : cases) {
    const double lo = std::min({c.str, c.itr, c.strc});
    const double hi = std::max({c.str, c.itr, c.strc});
    r.add(make_check("positivity_agreement:" + c.label, lo, hi, threshold, Relation::SameSide,
                     (hi <= threshold ? "all zero" : lo > threshold ? "all positive" : "mixed")));
  }
  return r;
}

VerificationReport lemma_property_suite(std::uint64_t seed, std::size_t trials, double rel_tol, double slack) {
  if (trials < 1) throw Error(ErrorKind::InvalidArgument, "trials must be positive");
  Rng rng = make_rng(seed, "lemma_suite");
  std::uniform_real_distribution<double> expo(-3.0, 3.0);
  auto random_vector = [&](Eigen::Index n) { return std::pow(10.0, expo(rng)) * random_unit(rng, n); };

  double worst_rel = 0;
  double worst_slack = std::numeric_limits<double>::infinity();
  auto probe = [&](const Vector& u, const Vector& v) {
    const double nu = u.norm();
    const double nv = v.norm();
    const double lhs = (nv * u - nu * v).squaredNorm();
    const double rhs = 2.0 * nu * nv * (nu * nv - u.dot(v));
    worst_rel = std::max(worst_rel, std::abs(lhs - rhs) / (nu * nu * nv * nv));
    const double ratio = (u + v).norm() / (nu + nv);
    const double half = 0.5 * (u / nu + v / nv).norm();
    worst_slack = std::min(worst_slack, ratio - half);
  };
  probe(Vector{{1.0, 0.0}}, Vector{{0.0, 1.0}});
  probe(Vector{{1.0, 2.0, 3.0}}, Vector{{1.0, 2.0, 3.0}});
  for (std::size_t t = 0; t < trials; ++t) {
    const Eigen::Index n = 2 + static_cast<Eigen::Index>(t % 3);
    probe(random_vector(n), random_vector(n));
  }

  // normalized sums of sequences whose directions both converge to u
  constexpr int kTerms = 40;
  double worst_limit = 0;
  std::uniform_real_distribution<double> scale(-3.0, 3.0);
  const std::size_t sequences = std::max<std::size_t>(1, trials / 10);
  for (std::size_t s = 0; s < sequences; ++s) {
    const Vector u = random_unit(rng, 3);
    double defect = 0;
    for (int k = 1; k <= kTerms; ++k) {
      const double shrink = std::ldexp(1.0, -k);
      const Vector uk = std::pow(10.0, scale(rng)) * (u + shrink * random_unit(rng, 3));
      const Vector vk = std::pow(10.0, scale(rng)) * (u + shrink * random_unit(rng, 3));
      defect = ((uk + vk).normalized() - u).norm();
    }
    worst_limit = std::max(worst_limit, defect);
  }

  VerificationReport r;
  r.add(make_check("alignment_identity_rel_error", worst_rel, 0.0, rel_tol, Relation::AtMost,
                   std::to_string(trials + 2) + " pairs"));
  r.add(make_check("normalized_sum_inequality_slack", worst_slack, 0.0, slack, Relation::AtLeast,
                   std::to_string(trials + 2) + " pairs"));
  r.add(make_check("normalized_sum_limit_defect", worst_limit, 0.0, 1e-6, Relation::AtMost,
                   std::to_string(sequences) + " sequences of " + std::to_string(kTerms) + " terms"));
  return r;
}

VerificationReport check_scenario_validity(const PairScenario& pair, const Tolerances& tol) {
  VerificationReport r;
  const auto issues = validate_scenario(pair, tol);
  for (const char* inv : {"xbar_in_a", "xbar_in_b", "xbar_in_intersection", "intersection_consistent"}) {
    const auto it = std::find_if(issues.begin(), issues.end(), [&](const ScenarioIssue& i) { return i.invariant == inv; });
    const bool ok = it == issues.end();
    r.add(make_check(std::string("scenario.") + inv, ok ? 0.0 : 1.0, 0.0, 0.0, Relation::Equal,
                     ok ? std::string() : it->detail));
  }
  return r;
}

VerificationReport check_alternating_projections(const PairScenario& pair, const APTrace& trace, double str_value,
                                                 double threshold, const Tolerances& tol,
                                                 const VerifyTolerances& vtol) {
  VerificationReport r;
  double worst = 0;
  for (std::size_t i = 1; i < trace.points.size(); ++i) {
    worst = std::max(worst, i % 2 == 1 ? trace.dist_b[i] : trace.dist_a[i]);
  }
  r.add(make_check("ap_projection_feasibility", worst, tol.feas_tol, 0.0, Relation::AtMost));
  if (!pair.is_convex()) return r;

  double rise = 0;
  for (std::size_t i = 1; i < trace.dist_inter.size(); ++i) {
    rise = std::max(rise, trace.dist_inter[i] - trace.dist_inter[i - 1]);
  }
  const double scale = 1.0 + trace.dist_inter.front();
  r.add(make_check("ap_fejer_monotone", rise, 0.0, 1e-12 * scale, Relation::AtMost));

  if (str_value > threshold) {
    const double bound = std::sqrt(std::max(0.0, 1.0 - str_value * str_value));
    const int window = std::min(vtol.rate_window, trace.cycles - 2);
    double rate = 0;
    std::string detail;
    if (trace.reason == Termination::Converged && window < 2) {
      detail = "finite convergence after " + std::to_string(trace.cycles) + " cycles";
    } else if (window < 2) {
      rate = 1.0;
      detail = "trace too short to fit";
    } else {
      try {
        rate = fit_linear_rate(trace, window).half_step_rate();
        detail = "window " + std::to_string(window);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::NoDecay || trace.reason != Termination::Converged) throw;
        detail = "finite convergence";
      }
    }
    r.add(make_check("ap_half_step_rate_bound", rate, bound, vtol.rate_slack, Relation::AtMost, detail));
  }
  return r;
}

VerificationReport check_proximal_directions(const PairScenario& pair, const std::vector<RelativeNormalPair>& pairs,
                                             const Tolerances& tol, std::size_t max_witnesses) {
  std::size_t total = 0;
  std::size_t valid = 0;
  std::string detail;
  auto probe = [&](const SetOracle& set, const Vector& a, std::uint64_t seed) {
    const double eps = default_normal_eps(a);
    try {
      const auto fan = proximal_normal_directions(set, a, eps, 16, seed, tol.feas_tol);
      for (const auto& d : fan.directions) {
        ++total;
        if (std::abs(d.norm() - 1.0) <= tol.feas_tol && passes_inverse_projection(set, a, d, 0.5 * eps, tol.feas_tol))
          ++valid;
      }
    } catch (const Error& e) {
      ++total;
      if (detail.empty()) detail = e.what();
    }
  };
  const auto seed = derive_seed(pair.seed, "proximal_check");
  probe(pair.set_a, pair.xbar, seed);
  probe(pair.set_b, pair.xbar, seed);
  for (std::size_t i = 0; i < pairs.size() && i < max_witnesses; ++i) {
    probe(pair.set_a, pairs[i].a, derive_seed(seed, "a", i));
    probe(pair.set_b, pairs[i].b, derive_seed(seed, "b", i));
  }
  if (detail.empty()) detail = std::to_string(valid) + " of " + std::to_string(total) + " directions";
  VerificationReport r;
  r.add(make_check("proximal_directions_valid", total ? static_cast<double>(valid) / static_cast<double>(total) : 1.0,
                   1.0, 0.0, Relation::Equal, detail));
  return r;
}

VerificationReport check_opposite_pairs(const ScenarioEstimates& est, double threshold) {
  double min_sum = 2.0;
  for (const auto& p : est.pairs) min_sum = std::min(min_sum, (p.v1 + p.v2).norm());
  VerificationReport r;
  if (est.str.value > threshold) {
    r.add(make_check("no_opposite_normal_pair", min_sum, threshold, 0.0, Relation::Above));
  } else {
    r.add(make_check("opposite_normal_pair_found", min_sum, threshold, 0.0, Relation::AtMost));
  }
  return r;
}

ScenarioVerification verify_scenario(const PairScenario& pair, const EstimatorConfig& config,
                                     const VerifyTolerances& vtol) {
  ScenarioVerification out;
  out.report.label = pair.label;
  out.report.merge(check_scenario_validity(pair, config.tol));
  if (!out.report.overall) return out;

  const double thr = positivity_threshold(config.schedule, config.tol);
  out.estimates = estimate_all(pair, config);
  const auto& est = out.estimates;
  const bool convex = pair.is_convex();
  out.report.merge(check_unit_pair_identities(est, vtol.identity));
  out.report.merge(check_itrhat_identities(est, vtol.identity, vtol.bound_slack, thr));
  out.report.merge(check_constant_chain(est, vtol.identity, convex));
  if (convex) out.report.merge(check_opposite_pairs(est, thr));
  out.report.merge(check_proximal_directions(pair, est.pairs, config.tol));
  if (pair.ap_start) {
    out.trace = run_alternating_projections(pair, pair.ap_start->x0, pair.ap_start->max_cycles, pair.ap_start->tol);
    out.report.merge(check_alternating_projections(pair, *out.trace, est.str.value, thr, config.tol, vtol));
  }
  return out;
}

}  // namespace tlab
