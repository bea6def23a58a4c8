#include "tlab/estimators.hpp"

#include "tlab/normal_cone.hpp"
#include "tlab/parallel.hpp"
#include "tlab/pattern_search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>

namespace tlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

void finish(ConstantEstimate& est) { est.value = est.per_radius.back().value; }

WitnessRegion region_for(const PairScenario& pair, const EstimatorConfig& cfg, double rho) {
  return {pair.xbar, rho, cfg.schedule.factor * rho, cfg.schedule.relaxation(cfg.tol.eta0, rho)};
}

bool in_shell(const Vector& x, const Vector& xbar, double inner, double rho) {
  const double r = (x - xbar).norm();
  return r > inner && r <= rho;
}

PatternSearchOptions refine_options(double rho, int budget) {
  PatternSearchOptions ps;
  ps.initial_step = 0.25 * rho;
  ps.min_step = 1e-9 * rho;
  ps.max_evaluations = budget;
  return ps;
}

RelativeNormalPair to_pair(const PairScenario& pair, const WitnessTriple& w, double feas_tol) {
  RelativeNormalPair p;
  p.v1 = w.u1;
  p.v2 = w.u2;
  p.a = w.a;
  p.b = w.b;
  p.x = w.x;
  p.ratio_defect = w.ratio_defect;
  p.cone1_dist = w.cone1_dist;
  p.cone2_dist = w.cone2_dist;
  p.align1_defect = alignment_defect(w.u1, normal_cone_projection(pair.set_a, w.a, w.u1, feas_tol));
  p.align2_defect = alignment_defect(w.u2, normal_cone_projection(pair.set_b, w.b, w.u2, feas_tol));
  return p;
}

struct WitnessSweep {
  ConstantEstimate est;
  std::vector<std::vector<RelativeNormalPair>> harvests;  // per radius
};

WitnessSweep witness_sweep(const PairScenario& pair, const EstimatorConfig& cfg, WitnessMode mode,
                           const std::string& name) {
  cfg.validate();
  WitnessSweep sweep;
  ConstantEstimate& est = sweep.est;
  est.name = name;
  est.seed = derive_seed(pair.seed, name);
  const auto radii = cfg.schedule.radii();
  for (std::size_t k = 0; k < radii.size(); ++k) {
    const double rho = radii[k];
    const auto region = region_for(pair, cfg, rho);
    const auto triples = search_witnesses(pair, mode, region, cfg.samples, derive_seed(est.seed, "radius", k),
                                          cfg.refine_budget, cfg.tol);
    std::vector<RelativeNormalPair> pairs;
    double best = kInf;
    for (const auto& t : triples) {
      if (!t) continue;
      best = std::min(best, t->half_sum());
      pairs.push_back(to_pair(pair, *t, cfg.tol.feas_tol));
    }
    est.per_radius.push_back({rho, pairs.empty() ? 1.0 : clamp01(best), pairs.size()});
    est.no_witness = pairs.empty();
    sweep.harvests.push_back(std::move(pairs));
  }
  finish(est);
  return sweep;
}

}  // namespace

void EstimatorConfig::validate() const {
  schedule.validate();
  tol.validate();
  if (samples < 1 || translations < 1 || refine_budget < 1) {
    throw Error(ErrorKind::InvalidArgument, "samples, translations and refine budget must be positive");
  }
}

ConstantEstimate estimate_subtransversality(const PairScenario& pair, const EstimatorConfig& cfg) {
  cfg.validate();
  ConstantEstimate est;
  est.name = "str";
  est.seed = derive_seed(pair.seed, "str");
  const double ft = cfg.tol.feas_tol;
  const auto radii = cfg.schedule.radii();
  for (std::size_t k = 0; k < radii.size(); ++k) {
    const double rho = radii[k];
    const double inner = cfg.schedule.factor * rho;
    const auto seed = derive_seed(est.seed, "radius", k);
    auto objective = [&](const Vector& x) {
      if (!in_shell(x, pair.xbar, inner, rho)) return kInf;
      const double di = distance(pair.intersection, x);
      if (di <= ft) return kInf;
      return std::max(distance(pair.set_a, x), distance(pair.set_b, x)) / di;
    };
    std::vector<double> vals(cfg.samples, kInf);
    const auto region = region_for(pair, cfg, rho);
    parallel_for(cfg.samples, [&](std::size_t i) {
      Rng rng = make_rng(seed, "x", i);
      Vector x0 = random_in_shell(rng, pair.xbar, inner, rho);
      if (i % 2 == 1) {
        // points between the sets, pushed radially into the shell
        const Vector m = witness_candidate(pair, region, seed, i) - pair.xbar;
        const double r = m.norm();
        if (r > 0) x0 = pair.xbar + m * ((x0 - pair.xbar).norm() / r);
      }
      vals[i] = pattern_search(objective, x0, refine_options(rho, 4 * cfg.refine_budget)).value;
    });
    const auto used = static_cast<std::size_t>(std::count_if(vals.begin(), vals.end(),
                                                             [](double v) { return std::isfinite(v); }));
    const double best = *std::min_element(vals.begin(), vals.end());
    est.per_radius.push_back({rho, used == 0 ? 1.0 : clamp01(best), used});
    est.degenerate = used == 0;
  }
  finish(est);
  return est;
}

ConstantEstimate estimate_transversality(const PairScenario& pair, const EstimatorConfig& cfg) {
  cfg.validate();
  ConstantEstimate est;
  est.name = "tr";
  est.seed = derive_seed(pair.seed, "tr");
  const double ft = cfg.tol.feas_tol;
  const std::size_t per = std::max<std::size_t>(1, cfg.samples / cfg.translations);
  const int budget = std::max(1, cfg.refine_budget / 3);
  const auto radii = cfg.schedule.radii();
  const Vector origin = Vector::Zero(pair.dimension());

  for (std::size_t k = 0; k < radii.size(); ++k) {
    const double rho = radii[k];
    const double inner = cfg.schedule.factor * rho;
    const auto seed = derive_seed(est.seed, "radius", k);
    struct Outcome {
      double value = kInf;
      std::size_t used = 0;
      std::size_t skipped = 0;
    };
    std::vector<Outcome> outcomes(cfg.translations);

    parallel_for(cfg.translations, [&](std::size_t j) {
      Rng trng = make_rng(seed, "translation", j);
      const Vector x1 = random_in_ball(trng, origin, rho);
      const Vector x2 = random_in_ball(trng, origin, rho);
      const SetOracle a = pair.set_a.translated(-x1);
      const SetOracle b = pair.set_b.translated(-x2);
      Outcome& out = outcomes[j];
      auto objective = [&](const Vector& x) {
        if (!in_shell(x, pair.xbar, inner, rho)) return kInf;
        const auto probe = nearest_in_intersection(a, b, x);
        if (probe.status != ProbeStatus::Found || probe.distance <= ft) return kInf;
        return std::max(distance(a, x), distance(b, x)) / probe.distance;
      };
      for (std::size_t i = 0; i < per; ++i) {
        Rng rng = make_rng(derive_seed(seed, "translation_points", j), "point", i);
        const Vector x0 = random_in_shell(rng, pair.xbar, inner, rho);
        const auto probe = nearest_in_intersection(a, b, x0);
        if (probe.status == ProbeStatus::Failed) {
          ++out.skipped;
          continue;
        }
        if (probe.status == ProbeStatus::Empty) {
          out.value = 0.0;
          ++out.used;
          break;
        }
        if (probe.distance <= ft) continue;
        const auto r = pattern_search(objective, x0, refine_options(rho, budget));
        if (std::isfinite(r.value)) {
          out.value = std::min(out.value, r.value);
          ++out.used;
        }
      }
    });

    double best = kInf;
    std::size_t used = 0;
    for (const auto& o : outcomes) {
      best = std::min(best, o.value);
      used += o.used;
      est.skipped += o.skipped;
    }
    est.per_radius.push_back({rho, used == 0 ? 1.0 : clamp01(best), used});
    est.degenerate = used == 0;
  }
  finish(est);
  return est;
}

IntrinsicFamily estimate_intrinsic_family(const PairScenario& pair, const EstimatorConfig& cfg) {
  auto sweep = witness_sweep(pair, cfg, WitnessMode::RatioBand, "itr");
  IntrinsicFamily fam;
  fam.itr = std::move(sweep.est);
  fam.itr.harvest_id = derive_seed(fam.itr.seed, "harvest", cfg.samples);
  auto make = [&](const char* name) {
    ConstantEstimate e;
    e.name = name;
    e.seed = fam.itr.seed;
    e.harvest_id = fam.itr.harvest_id;
    return e;
  };
  fam.itr1 = make("itr1");
  fam.itr2 = make("itr2");
  fam.itr3 = make("itr3");
  for (std::size_t k = 0; k < sweep.harvests.size(); ++k) {
    const auto& pairs = sweep.harvests[k];
    const double rho = fam.itr.per_radius[k].rho;
    const auto c = derived_euclidean_constants(pairs);
    fam.itr1.per_radius.push_back({rho, std::clamp(c.itr1, 0.0, 2.0), c.pairs});
    fam.itr2.per_radius.push_back({rho, std::clamp(c.itr2, -1.0, 1.0), c.pairs});
    fam.itr3.per_radius.push_back({rho, std::clamp(c.itr3, 0.0, std::numbers::sqrt2), c.pairs});
    fam.positively_independent = c.positively_independent;
    fam.itr_from_pairs = c.itr_from_pairs;
  }
  for (auto* e : {&fam.itr1, &fam.itr2, &fam.itr3}) {
    e->no_witness = fam.itr.no_witness;
    finish(*e);
  }
  fam.pairs = std::move(sweep.harvests.back());
  return fam;
}

ConstantEstimate estimate_intrinsic(const PairScenario& pair, const EstimatorConfig& cfg) {
  return estimate_intrinsic_family(pair, cfg).itr;
}

ConstantEstimate estimate_strc(const PairScenario& pair, const EstimatorConfig& cfg) {
  return witness_sweep(pair, cfg, WitnessMode::Equidistant, "strc").est;
}

std::vector<RelativeNormalPair> harvest_normal_pairs(const PairScenario& pair, double rho, double eta, std::size_t n,
                                                     std::uint64_t seed, const EstimatorConfig& cfg) {
  if (!(rho > 0) || !(eta > 0) || n < 1) {
    throw Error(ErrorKind::InvalidArgument, "harvest needs rho > 0, eta > 0 and n >= 1");
  }
  const WitnessRegion region{pair.xbar, rho, cfg.schedule.factor * rho, eta};
  const auto triples = search_witnesses(pair, WitnessMode::RatioBand, region, n, seed, cfg.refine_budget, cfg.tol);
  std::vector<RelativeNormalPair> out;
  for (const auto& t : triples) {
    if (t) out.push_back(to_pair(pair, *t, cfg.tol.feas_tol));
  }
  return out;
}

std::vector<Vector> sphere_mesh(Eigen::Index dim) {
  std::vector<Vector> mesh;
  if (dim == 1) {
    mesh.push_back(Vector::Constant(1, 1.0));
    mesh.push_back(Vector::Constant(1, -1.0));
  } else if (dim == 2) {
    constexpr int kAngles = 2048;
    for (int i = 0; i < kAngles; ++i) {
      const double t = 2.0 * std::numbers::pi * i / kAngles;
      mesh.push_back(Vector{{std::cos(t), std::sin(t)}});
    }
  } else if (dim == 3) {
    constexpr int kPoints = 4096;
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < kPoints; ++i) {
      const double z = 1.0 - (2.0 * i + 1.0) / kPoints;
      const double r = std::sqrt(1.0 - z * z);
      const double phi = golden * i;
      mesh.push_back(Vector{{r * std::cos(phi), r * std::sin(phi), z}});
    }
  } else {
    Rng rng = make_rng(0x5eedu, "sphere_mesh", static_cast<std::uint64_t>(dim));
    for (int i = 0; i < 4096; ++i) mesh.push_back(random_unit(rng, dim));
  }
  return mesh;
}

EuclideanConstants derived_euclidean_constants(const std::vector<RelativeNormalPair>& pairs, double unit_tol) {
  EuclideanConstants c;
  c.pairs = pairs.size();
  if (pairs.empty()) return c;

  for (const auto& p : pairs) {
    if (std::abs(p.v1.norm() - 1.0) > unit_tol || std::abs(p.v2.norm() - 1.0) > unit_tol) {
      throw Error(ErrorKind::NonUnitPair, "normal pair is not unit-normalized");
    }
  }
  double max_diff = 0;
  double min_dot = kInf;
  double min_sum = kInf;
  for (const auto& p : pairs) {
    max_diff = std::max(max_diff, (p.v1 - p.v2).norm());
    min_dot = std::min(min_dot, p.v1.dot(p.v2));
    min_sum = std::min(min_sum, (p.v1 + p.v2).norm());
    if ((p.v1 - p.v2).norm() > 1e-6) c.positively_independent = true;
  }
  c.itr1 = max_diff;
  c.itr2 = -min_dot;
  c.itr_from_pairs = 0.5 * min_sum;

  // distance from (v, -v) to the cone {(s v1, t v2) : s, t >= 0}
  auto cone_gap = [](const Vector& v, const RelativeNormalPair& p) {
    const Vector r1 = v - std::max(0.0, v.dot(p.v1)) * p.v1;
    const Vector r2 = -v - std::max(0.0, -v.dot(p.v2)) * p.v2;
    return std::sqrt(r1.squaredNorm() + r2.squaredNorm());
  };
  auto mesh = sphere_mesh(pairs.front().v1.size());
  for (const auto& p : pairs) {
    const Vector d = p.v1 - p.v2;
    if (d.norm() > 1e-12) mesh.push_back(d.normalized());
  }
  double best = std::numbers::sqrt2;
  for (const auto& v : mesh) {
    for (const auto& p : pairs) best = std::min(best, cone_gap(v, p));
  }
  c.itr3 = best;
  return c;
}

ItrhatEstimates estimate_itrhat(const PairScenario& pair, const EstimatorConfig& cfg) {
  cfg.validate();
  ItrhatEstimates out;
  out.itrhat1.name = "itrhat1";
  out.itrhat2.name = "itrhat2";
  const auto seed_root = derive_seed(pair.seed, "itrhat");
  out.itrhat1.seed = out.itrhat2.seed = seed_root;
  const double ft = cfg.tol.feas_tol;
  const auto n = pair.dimension();
  const auto radii = cfg.schedule.radii();

  for (std::size_t k = 0; k < radii.size(); ++k) {
    const double rho = radii[k];
    const auto region = region_for(pair, cfg, rho);
    const auto seed = derive_seed(seed_root, "radius", k);

    struct Eval {
      double dist_max;  // max{d(u, N_A(a)), d(-u, N_B(b))}
      double supp_min;  // [min{|P_{N_A} u|, |P_{N_B}(-u)|}]_+
    };
    auto evaluate = [&](const Vector& w) -> std::optional<Eval> {
      const Vector a = project(pair.set_a, w.head(n)).point;
      const Vector b = project(pair.set_b, w.tail(n)).point;
      const double ra = (a - pair.xbar).norm();
      const double rb = (b - pair.xbar).norm();
      if (ra > rho || rb > rho || std::max(ra, rb) <= region.inner) return std::nullopt;
      const double gap = (b - a).norm();
      if (gap <= ft) return std::nullopt;
      if (distance(pair.set_b, a) <= ft || distance(pair.set_a, b) <= ft) return std::nullopt;
      const Vector u = (b - a) / gap;
      const Vector pa = normal_cone_projection(pair.set_a, a, u, ft);
      const Vector pb = normal_cone_projection(pair.set_b, b, -u, ft);
      return Eval{std::max((u - pa).norm(), (-u - pb).norm()), std::max(0.0, std::min(pa.norm(), pb.norm()))};
    };
    auto obj1 = [&](const Vector& w) {
      const auto e = evaluate(w);
      return e ? e->dist_max : kInf;
    };
    auto obj2 = [&](const Vector& w) {
      const auto e = evaluate(w);
      return e ? -e->supp_min : kInf;
    };

    std::vector<double> best1(cfg.samples, kInf);
    std::vector<double> best2(cfg.samples, -kInf);
    parallel_for(cfg.samples, [&](std::size_t i) {
      Vector w(2 * n);
      if (i % 2 == 0) {
        Rng rng = make_rng(seed, "pair", i);
        w.head(n) = random_in_ball(rng, pair.xbar, rho);
        w.tail(n) = random_in_ball(rng, pair.xbar, rho);
      } else {
        const Vector x = witness_candidate(pair, region, seed, i);
        w.head(n) = x;
        w.tail(n) = x;
      }
      const auto ps = refine_options(rho, 2 * cfg.refine_budget);
      const auto r1 = pattern_search(obj1, w, ps);
      if (!std::isfinite(r1.value)) return;
      best1[i] = r1.value;
      best2[i] = -pattern_search(obj2, w, ps).value;
    });

    const auto used = static_cast<std::size_t>(std::count_if(best1.begin(), best1.end(),
                                                             [](double v) { return std::isfinite(v); }));
    const double v1 = used ? clamp01(*std::min_element(best1.begin(), best1.end())) : 1.0;
    const double v2 = used ? clamp01(*std::max_element(best2.begin(), best2.end())) : 0.0;
    out.itrhat1.per_radius.push_back({rho, v1, used});
    out.itrhat2.per_radius.push_back({rho, v2, used});
    out.itrhat1.no_witness = out.itrhat2.no_witness = used == 0;
  }
  finish(out.itrhat1);
  finish(out.itrhat2);
  return out;
}

std::vector<const ConstantEstimate*> ScenarioEstimates::all() const {
  return {&str, &tr, &itr, &strc, &itr1, &itr2, &itr3, &itrhat1, &itrhat2};
}

ScenarioEstimates estimate_all(const PairScenario& pair, const EstimatorConfig& cfg) {
  ScenarioEstimates s;
  s.str = estimate_subtransversality(pair, cfg);
  s.tr = estimate_transversality(pair, cfg);
  auto fam = estimate_intrinsic_family(pair, cfg);
  s.itr = std::move(fam.itr);
  s.itr1 = std::move(fam.itr1);
  s.itr2 = std::move(fam.itr2);
  s.itr3 = std::move(fam.itr3);
  s.pairs = std::move(fam.pairs);
  s.positively_independent = fam.positively_independent;
  s.itr_from_pairs = fam.itr_from_pairs;
  s.strc = estimate_strc(pair, cfg);
  auto hat = estimate_itrhat(pair, cfg);
  s.itrhat1 = std::move(hat.itrhat1);
  s.itrhat2 = std::move(hat.itrhat2);
  for (const auto* e : s.all()) check_estimate_range(*e);
  return s;
}

void check_estimate_range(const ConstantEstimate& est) {
  double lo = 0;
  double hi = 1;
  if (est.name == "itr1") {
    hi = 2;
  } else if (est.name == "itr2") {
    lo = -1;
  } else if (est.name == "itr3") {
    hi = std::numbers::sqrt2;
  }
  if (est.per_radius.empty()) throw Error(ErrorKind::InvalidArgument, est.name + " has no per-radius values");
  for (std::size_t k = 0; k < est.per_radius.size(); ++k) {
    const double v = est.per_radius[k].value;
    if (!(v >= lo && v <= hi)) throw Error(ErrorKind::InvalidArgument, est.name + " value out of range");
    if (k > 0 && !(est.per_radius[k].rho < est.per_radius[k - 1].rho)) {
      throw Error(ErrorKind::InvalidArgument, est.name + " radii are not strictly decreasing");
    }
  }
  if (est.value != est.per_radius.back().value) {
    throw Error(ErrorKind::InvalidArgument, est.name + " value differs from its smallest-radius entry");
  }
}

}  // namespace tlab
