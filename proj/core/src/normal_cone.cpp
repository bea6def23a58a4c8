#include "tlab/normal_cone.hpp"

#include "json_writer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tlab {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_member(const SetOracle& set, const Vector& a, double feas_tol) {
  require_dimension(a, set.dimension(), "base point");
  require_finite(a, "base point");
  const double d = distance(set, a);
  if (d > feas_tol) {
    throw Error(ErrorKind::NotInSet, "base point is at distance " + detail::format_real(d) + " from the set");
  }
}

std::vector<const HalfSpace*> active_constraints(const ConvexPolyhedron& p, const Vector& a, double tol) {
  std::vector<const HalfSpace*> active;
  for (const auto& c : p.constraints) {
    if (c.normal.dot(a) - c.offset >= -tol) active.push_back(&c);
  }
  return active;
}

bool on_ball_boundary(const Ball& b, const Vector& a, double tol) {
  return b.radius > 0 && (a - b.center).norm() >= b.radius - tol;
}

Vector ray_projection(const Vector& w, const Vector& u) { return std::max(0.0, w.dot(u)) * w; }

Vector canonical_sign(Vector w) {
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    if (std::abs(w[i]) > 1e-12) {
      if (w[i] < 0) w = -w;
      break;
    }
  }
  return w;
}

Matrix orthogonal_complement(const Matrix& basis, Eigen::Index n) {
  const Eigen::Index k = basis.cols();
  if (k == 0) return Matrix::Identity(n, n);
  if (k >= n) return Matrix(n, 0);
  Eigen::HouseholderQR<Matrix> qr(basis);
  Matrix q = qr.householderQ() * Matrix::Identity(n, n);
  Matrix comp = q.rightCols(n - k);
  for (Eigen::Index j = 0; j < comp.cols(); ++j) comp.col(j) = canonical_sign(comp.col(j));
  return comp;
}

// Projection of u onto the normal cone of a single (non-union) set at a.
Vector piece_projection(const SetOracle& set, const Vector& a, const Vector& u, double tol) {
  return std::visit(
      overloaded{
          [&](const AffineSubspace& s) -> Vector {
            if (s.basis.cols() == 0) return u;
            return u - s.basis * (s.basis.transpose() * u);
          },
          [&](const HalfSpace& h) -> Vector {
            if (h.normal.dot(a) - h.offset >= -tol) return ray_projection(h.normal, u);
            return Vector::Zero(u.size());
          },
          [&](const Ball& b) -> Vector {
            if (b.radius == 0) return u;
            if (!on_ball_boundary(b, a, tol)) return Vector::Zero(u.size());
            return ray_projection((a - b.center).normalized(), u);
          },
          [&](const Sphere& s) -> Vector {
            const Vector w = (a - s.center).normalized();
            return w.dot(u) * w;
          },
          [&](const ConvexPolyhedron& p) -> Vector {
            const auto active = active_constraints(p, a, tol);
            if (active.empty()) return Vector::Zero(u.size());
            if (active.size() == 1) return ray_projection(active.front()->normal, u);
            Matrix g(u.size(), static_cast<Eigen::Index>(active.size()));
            for (std::size_t j = 0; j < active.size(); ++j) g.col(static_cast<Eigen::Index>(j)) = active[j]->normal;
            return g * nonnegative_least_squares(g, u);
          },
          [&](const FiniteUnion&) -> Vector { return Vector::Zero(u.size()); },
          [&](const PointSet&) -> Vector { return u; },
      },
      set.kind());
}

// Closed-form generators of a single (non-union) set at a.
std::vector<Vector> piece_generators(const SetOracle& set, const Vector& a, double tol) {
  const auto n = set.dimension();
  auto signed_axes = [n] {
    std::vector<Vector> out;
    for (Eigen::Index i = 0; i < n; ++i) {
      out.push_back(Vector::Unit(n, i));
      out.push_back(-Vector::Unit(n, i));
    }
    return out;
  };
  return std::visit(
      overloaded{
          [&](const AffineSubspace& s) {
            const Matrix comp = orthogonal_complement(s.basis, n);
            std::vector<Vector> out;
            for (Eigen::Index j = 0; j < comp.cols(); ++j) {
              out.push_back(comp.col(j));
              out.push_back(-comp.col(j));
            }
            return out;
          },
          [&](const HalfSpace& h) {
            if (h.normal.dot(a) - h.offset >= -tol) return std::vector<Vector>{h.normal};
            return std::vector<Vector>{};
          },
          [&](const Ball& b) {
            if (b.radius == 0) return signed_axes();
            if (!on_ball_boundary(b, a, tol)) return std::vector<Vector>{};
            return std::vector<Vector>{(a - b.center).normalized()};
          },
          [&](const Sphere& s) {
            const Vector w = (a - s.center).normalized();
            return std::vector<Vector>{w, -w};
          },
          [&](const ConvexPolyhedron& p) {
            std::vector<Vector> out;
            for (const auto* c : active_constraints(p, a, tol)) out.push_back(c->normal);
            return out;
          },
          [&](const FiniteUnion&) { return std::vector<Vector>{}; },
          [&](const PointSet&) { return signed_axes(); },
      },
      set.kind());
}

std::vector<const SetOracle*> members_containing(const FiniteUnion& u, const Vector& a, double tol) {
  std::vector<const SetOracle*> out;
  for (const auto& m : u.members) {
    if (distance(m, a) <= tol) out.push_back(&m);
  }
  return out;
}

Vector projection_unchecked(const SetOracle& set, const Vector& a, const Vector& u, double tol) {
  const auto* uni = std::get_if<FiniteUnion>(&set.kind());
  if (!uni) return piece_projection(set, a, u, tol);
  Vector best;
  double best_d = std::numeric_limits<double>::infinity();
  for (const auto* m : members_containing(*uni, a, tol)) {
    Vector p = projection_unchecked(*m, a, u, tol);
    const double d = (u - p).norm();
    if (d < best_d) {
      best_d = d;
      best = std::move(p);
    }
  }
  return best;
}

}  // namespace

bool passes_inverse_projection(const SetOracle& set, const Vector& a, const Vector& u, double eps,
                               double feas_tol) {
  return (project(set, a + eps * u).point - a).norm() <= feas_tol;
}

NormalFan proximal_normal_directions(const SetOracle& set, const Vector& a, double eps, std::size_t m,
                                     std::uint64_t seed, double feas_tol) {
  require_member(set, a, feas_tol);
  if (!(eps > 0) || !std::isfinite(eps)) throw Error(ErrorKind::InvalidArgument, "eps must be positive");
  if (m < 1) throw Error(ErrorKind::InvalidArgument, "m must be at least 1");

  NormalFan fan;
  fan.base = a;
  std::vector<Vector> candidates;
  bool exact = true;

  if (const auto* uni = std::get_if<FiniteUnion>(&set.kind())) {
    const auto holders = members_containing(*uni, a, feas_tol);
    fan.ambiguous = holders.size() > 1;
    for (const auto* h : holders) {
      NormalFan sub = proximal_normal_directions(*h, a, eps, m, seed, feas_tol);
      exact = exact && sub.exact;
      fan.ambiguous = fan.ambiguous || sub.ambiguous;
      candidates.insert(candidates.end(), sub.directions.begin(), sub.directions.end());
    }
    if (fan.ambiguous) {
      exact = false;
      Rng rng = make_rng(seed, "normal_fan");
      for (std::size_t i = 0; i < m; ++i) candidates.push_back(random_unit(rng, set.dimension()));
    }
  } else {
    candidates = piece_generators(set, a, feas_tol);
  }

  for (auto& c : candidates) {
    if (!passes_inverse_projection(set, a, c, eps, feas_tol)) continue;
    const bool dup = std::any_of(fan.directions.begin(), fan.directions.end(),
                                 [&](const Vector& d) { return (d - c).norm() <= feas_tol; });
    if (!dup) fan.directions.push_back(std::move(c));
  }
  if (!candidates.empty() && fan.directions.empty() && exact) {
    throw Error(ErrorKind::EpsilonTooLarge, "inverse-projection test rejected every exact generator");
  }
  fan.exact = exact;
  return fan;
}

Vector normal_cone_projection(const SetOracle& set, const Vector& a, const Vector& u, double feas_tol) {
  require_member(set, a, feas_tol);
  require_dimension(u, set.dimension(), "direction");
  require_finite(u, "direction");
  return projection_unchecked(set, a, u, feas_tol);
}

double normal_cone_distance(const SetOracle& set, const Vector& a, const Vector& u, double feas_tol) {
  return (u - normal_cone_projection(set, a, u, feas_tol)).norm();
}

double normal_cone_support(const SetOracle& set, const Vector& a, const Vector& u, double feas_tol) {
  return normal_cone_projection(set, a, u, feas_tol).norm();
}

double fan_distance(const NormalFan& fan, const Vector& u) {
  double best = u.norm();
  for (const auto& g : fan.directions) best = std::min(best, (u - ray_projection(g, u)).norm());
  return best;
}

double frechet_normal_defect(const SetOracle& set, const Vector& a, const Vector& u,
                             const RadiusSchedule& radii, std::size_t n, std::uint64_t seed,
                             double feas_tol) {
  require_member(set, a, feas_tol);
  require_dimension(u, set.dimension(), "direction");
  if (std::abs(u.norm() - 1.0) > 1e-8) throw Error(ErrorKind::InvalidArgument, "direction must be a unit vector");
  radii.validate();

  const auto pts = sample_set_near(set, a, radii.smallest(), n, seed, feas_tol);
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& p : pts) {
    const Vector d = p - a;
    const double r = d.norm();
    if (r <= feas_tol) continue;
    worst = std::max(worst, u.dot(d) / r);
  }
  if (!std::isfinite(worst)) {
    throw Error(ErrorKind::EmptySample, "the set has no sampled points near the base other than the base itself");
  }
  return worst;
}

double alignment_defect(const Vector& v, const Vector& w) {
  const double nv = v.norm();
  const double nw = w.norm();
  if (nv == 0 || nw == 0) return 0.0;
  return std::max(0.0, 1.0 - v.dot(w) / (nv * nw));
}

Vector nonnegative_least_squares(const Matrix& G, const Vector& u) {
  const Eigen::Index k = G.cols();
  Vector x = Vector::Zero(k);
  std::vector<bool> passive(static_cast<std::size_t>(k), false);
  const double tol = 1e-14 * std::max(1.0, G.cwiseAbs().maxCoeff()) * std::max(1.0, u.norm());

  auto solve_passive = [&](Vector& z) {
    std::vector<Eigen::Index> idx;
    for (Eigen::Index j = 0; j < k; ++j)
      if (passive[static_cast<std::size_t>(j)]) idx.push_back(j);
    z = Vector::Zero(k);
    if (idx.empty()) return;
    Matrix sub(G.rows(), static_cast<Eigen::Index>(idx.size()));
    for (std::size_t c = 0; c < idx.size(); ++c) sub.col(static_cast<Eigen::Index>(c)) = G.col(idx[c]);
    const Vector s = sub.completeOrthogonalDecomposition().solve(u);
    for (std::size_t c = 0; c < idx.size(); ++c) z[idx[c]] = s[static_cast<Eigen::Index>(c)];
  };

  for (int outer = 0; outer < 3 * static_cast<int>(k) + 10; ++outer) {
    const Vector w = G.transpose() * (u - G * x);
    Eigen::Index enter = -1;
    double best = tol;
    for (Eigen::Index j = 0; j < k; ++j) {
      if (!passive[static_cast<std::size_t>(j)] && w[j] > best) {
        best = w[j];
        enter = j;
      }
    }
    if (enter < 0) break;
    passive[static_cast<std::size_t>(enter)] = true;

    Vector z;
    for (int inner = 0; inner <= k; ++inner) {
      solve_passive(z);
      bool feasible = true;
      for (Eigen::Index j = 0; j < k; ++j)
        if (passive[static_cast<std::size_t>(j)] && z[j] <= 0) feasible = false;
      if (feasible) break;
      double alpha = 1.0;
      for (Eigen::Index j = 0; j < k; ++j) {
        if (passive[static_cast<std::size_t>(j)] && z[j] <= 0 && x[j] - z[j] > 0) {
          alpha = std::min(alpha, x[j] / (x[j] - z[j]));
        }
      }
      x += alpha * (z - x);
      for (Eigen::Index j = 0; j < k; ++j) {
        if (passive[static_cast<std::size_t>(j)] && x[j] <= tol) {
          passive[static_cast<std::size_t>(j)] = false;
          x[j] = 0;
        }
      }
    }
    x = z.cwiseMax(0.0);
  }
  return x;
}

std::string fan_to_json(const NormalFan& fan) {
  nlohmann::json j;
  j["base"] = detail::vector_to_json(fan.base);
  nlohmann::json dirs = nlohmann::json::array();
  for (const auto& d : fan.directions) dirs.push_back(detail::vector_to_json(d));
  j["directions"] = dirs;
  j["exact"] = fan.exact;
  j["ambiguous"] = fan.ambiguous;
  return detail::dump_json(j);
}

}  // namespace tlab
