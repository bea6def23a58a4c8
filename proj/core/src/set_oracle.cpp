#include "tlab/set_oracle.hpp"

#include "tlab/normal_cone.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <utility>

namespace tlab {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void check_input(const SetOracle& set, const Vector& x) {
  require_dimension(x, set.dimension(), "query point");
  require_finite(x, "query point");
}

Projection project_affine(const AffineSubspace& s, const Vector& x) {
  Vector p = s.point;
  if (s.basis.cols() > 0) p += s.basis * (s.basis.transpose() * (x - s.point));
  return {p, (x - p).norm()};
}

Projection project_half_space(const HalfSpace& h, const Vector& x) {
  const double violation = h.normal.dot(x) - h.offset;
  if (violation <= 0) return {x, 0.0};
  return {x - violation * h.normal, violation};
}

Projection project_ball(const Ball& b, const Vector& x) {
  const Vector d = x - b.center;
  const double r = d.norm();
  if (r <= b.radius) return {x, 0.0};
  Vector p = b.center + (b.radius / r) * d;
  return {p, (x - p).norm()};
}

Projection project_sphere(const Sphere& s, const Vector& x) {
  const Vector d = x - s.center;
  const double r = d.norm();
  Vector p(x.size());
  if (r == 0) {
    // every sphere point is nearest; take the one along the first axis
    p = s.center;
    p[0] += s.radius;
  } else {
    p = s.center + (s.radius / r) * d;
  }
  return {p, (x - p).norm()};
}

Projection project_points(const PointSet& ps, const Vector& x) {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < ps.points.size(); ++i) {
    const double d = (x - ps.points[i]).norm();
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return {ps.points[best], best_d};
}

Matrix orthonormalize(const Matrix& spanning) {
  if (spanning.cols() == 0) return spanning;
  // already orthonormal columns are kept bit for bit, so scenario files round-trip
  const Matrix gram = spanning.transpose() * spanning;
  if ((gram - Matrix::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff() <= 1e-14) return spanning;
  Eigen::ColPivHouseholderQR<Matrix> qr(spanning);
  qr.setThreshold(1e-12);
  if (qr.rank() != spanning.cols()) {
    throw Error(ErrorKind::InvalidArgument, "affine subspace spanning vectors are linearly dependent");
  }
  Matrix q = qr.householderQ() * Matrix::Identity(spanning.rows(), spanning.cols());
  // canonical orientation: first significant component of each column positive
  for (Eigen::Index j = 0; j < q.cols(); ++j) {
    for (Eigen::Index i = 0; i < q.rows(); ++i) {
      if (std::abs(q(i, j)) > 1e-12) {
        if (q(i, j) < 0) q.col(j) *= -1.0;
        break;
      }
    }
  }
  return q;
}

HalfSpace make_half_space(const Vector& normal, double offset) {
  require_finite(normal, "half-space normal");
  const double norm = normal.norm();
  if (!(norm > 0) || !std::isfinite(offset)) {
    throw Error(ErrorKind::InvalidArgument, "half-space needs a nonzero normal and finite offset");
  }
  return {normal / norm, offset / norm};
}

}  // namespace

SetOracle::SetOracle(Kind kind, Eigen::Index dim, std::string label)
    : kind_(std::move(kind)), dim_(dim), label_(std::move(label)) {
  if (dim_ < 1) throw Error(ErrorKind::InvalidArgument, "sets need ambient dimension >= 1");
}

SetOracle SetOracle::affine(Vector point, const Matrix& spanning, std::string label) {
  require_finite(point, "affine point");
  if (spanning.rows() != point.size() && spanning.cols() > 0) {
    throw Error(ErrorKind::DimensionMismatch, "affine basis rows differ from point dimension");
  }
  if (!spanning.allFinite()) throw Error(ErrorKind::NonFiniteInput, "affine basis");
  const auto n = point.size();
  Matrix basis = spanning.cols() > 0 ? orthonormalize(spanning) : Matrix(n, 0);
  return SetOracle(AffineSubspace{std::move(point), std::move(basis)}, n, std::move(label));
}

SetOracle SetOracle::line(Vector point, const Vector& direction, std::string label) {
  Matrix span = direction;
  return affine(std::move(point), span, std::move(label));
}

SetOracle SetOracle::whole_space(Eigen::Index n, std::string label) {
  return affine(Vector::Zero(n), Matrix::Identity(n, n), std::move(label));
}

SetOracle SetOracle::half_space(const Vector& normal, double offset, std::string label) {
  const auto n = normal.size();
  return SetOracle(make_half_space(normal, offset), n, std::move(label));
}

SetOracle SetOracle::ball(Vector center, double radius, std::string label) {
  require_finite(center, "ball center");
  if (!(radius >= 0) || !std::isfinite(radius)) {
    throw Error(ErrorKind::InvalidArgument, "ball radius must be finite and nonnegative");
  }
  const auto n = center.size();
  return SetOracle(Ball{std::move(center), radius}, n, std::move(label));
}

SetOracle SetOracle::sphere(Vector center, double radius, std::string label) {
  require_finite(center, "sphere center");
  if (!(radius > 0) || !std::isfinite(radius)) {
    throw Error(ErrorKind::InvalidArgument, "sphere radius must be finite and positive");
  }
  const auto n = center.size();
  return SetOracle(Sphere{std::move(center), radius}, n, std::move(label));
}

SetOracle SetOracle::polyhedron(std::vector<HalfSpace> constraints, std::string label) {
  if (constraints.empty()) throw Error(ErrorKind::InvalidArgument, "polyhedron without constraints");
  const auto n = constraints.front().normal.size();
  for (auto& c : constraints) {
    require_dimension(c.normal, n, "polyhedron constraint");
    c = make_half_space(c.normal, c.offset);
  }
  return SetOracle(ConvexPolyhedron{std::move(constraints)}, n, std::move(label));
}

SetOracle SetOracle::finite_union(std::vector<SetOracle> members, std::string label) {
  if (members.empty()) throw Error(ErrorKind::InvalidArgument, "union without members");
  const auto n = members.front().dimension();
  for (const auto& m : members) {
    if (m.dimension() != n) throw Error(ErrorKind::DimensionMismatch, "union members differ in dimension");
  }
  return SetOracle(FiniteUnion{std::move(members)}, n, std::move(label));
}

SetOracle SetOracle::points(std::vector<Vector> points, std::string label) {
  if (points.empty()) throw Error(ErrorKind::InvalidArgument, "empty point set");
  const auto n = points.front().size();
  for (const auto& p : points) {
    require_dimension(p, n, "point");
    require_finite(p, "point");
  }
  return SetOracle(PointSet{std::move(points)}, n, std::move(label));
}

std::string_view SetOracle::kind_name() const {
  return std::visit(overloaded{
                        [](const AffineSubspace&) { return std::string_view("affine_subspace"); },
                        [](const HalfSpace&) { return std::string_view("half_space"); },
                        [](const Ball&) { return std::string_view("ball"); },
                        [](const Sphere&) { return std::string_view("sphere"); },
                        [](const ConvexPolyhedron&) { return std::string_view("polyhedron"); },
                        [](const FiniteUnion&) { return std::string_view("union"); },
                        [](const PointSet&) { return std::string_view("points"); },
                    },
                    kind_);
}

bool SetOracle::is_convex() const {
  return std::visit(overloaded{
                        [](const Sphere&) { return false; },
                        [](const PointSet& ps) {
                          for (const auto& p : ps.points) {
                            if ((p - ps.points.front()).norm() > 0) return false;
                          }
                          return true;
                        },
                        [](const FiniteUnion& u) {
                          return u.members.size() == 1 && u.members.front().is_convex();
                        },
                        [](const auto&) { return true; },
                    },
                    kind_);
}

SetOracle SetOracle::translated(const Vector& shift) const {
  require_dimension(shift, dim_, "translation");
  require_finite(shift, "translation");
  Kind moved = std::visit(
      overloaded{
          [&](const AffineSubspace& s) -> Kind { return AffineSubspace{s.point + shift, s.basis}; },
          [&](const HalfSpace& h) -> Kind { return HalfSpace{h.normal, h.offset + h.normal.dot(shift)}; },
          [&](const Ball& b) -> Kind { return Ball{b.center + shift, b.radius}; },
          [&](const Sphere& s) -> Kind { return Sphere{s.center + shift, s.radius}; },
          [&](const ConvexPolyhedron& p) -> Kind {
            ConvexPolyhedron out = p;
            for (auto& c : out.constraints) c.offset += c.normal.dot(shift);
            return out;
          },
          [&](const FiniteUnion& u) -> Kind {
            FiniteUnion out;
            out.members.reserve(u.members.size());
            for (const auto& m : u.members) out.members.push_back(m.translated(shift));
            return out;
          },
          [&](const PointSet& ps) -> Kind {
            PointSet out = ps;
            for (auto& p : out.points) p += shift;
            return out;
          },
      },
      kind_);
  return SetOracle(std::move(moved), dim_, label_);
}

std::vector<SetOracle> SetOracle::convex_pieces() const {
  std::vector<SetOracle> out;
  if (const auto* u = std::get_if<FiniteUnion>(&kind_)) {
    for (const auto& m : u->members) {
      auto sub = m.convex_pieces();
      out.insert(out.end(), sub.begin(), sub.end());
    }
  } else if (const auto* ps = std::get_if<PointSet>(&kind_)) {
    for (const auto& p : ps->points) out.push_back(SetOracle(PointSet{{p}}, dim_, label_));
  } else {
    out.push_back(*this);
  }
  return out;
}

Vector project_polyhedron(const std::vector<HalfSpace>& constraints, const Vector& x) {
  bool feasible = true;
  for (const auto& c : constraints) {
    if (c.normal.dot(x) > c.offset) {
      feasible = false;
      break;
    }
  }
  if (feasible) return x;

  const std::size_t m = constraints.size();
  std::vector<Vector> increments(m, Vector::Zero(x.size()));
  Vector y = x;
  const double scale = 1.0 + x.norm();
  constexpr int kMaxSweeps = 200000;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    const Vector start = y;
    for (std::size_t i = 0; i < m; ++i) {
      const Vector z = y + increments[i];
      const double violation = constraints[i].normal.dot(z) - constraints[i].offset;
      y = violation > 0 ? Vector(z - violation * constraints[i].normal) : z;
      increments[i] = z - y;
    }
    if ((y - start).norm() <= 1e-15 * scale) {
      double worst = 0;
      for (const auto& c : constraints) worst = std::max(worst, c.normal.dot(y) - c.offset);
      if (worst <= 1e-13 * scale) break;
    }
  }
  return y;
}

Projection project(const SetOracle& set, const Vector& x) {
  check_input(set, x);
  return std::visit(overloaded{
                        [&](const AffineSubspace& s) { return project_affine(s, x); },
                        [&](const HalfSpace& h) { return project_half_space(h, x); },
                        [&](const Ball& b) { return project_ball(b, x); },
                        [&](const Sphere& s) { return project_sphere(s, x); },
                        [&](const ConvexPolyhedron& p) {
                          Vector q = project_polyhedron(p.constraints, x);
                          const double d = (x - q).norm();
                          return Projection{std::move(q), d};
                        },
                        [&](const FiniteUnion& u) {
                          Projection best{Vector(), std::numeric_limits<double>::infinity()};
                          for (const auto& m : u.members) {
                            Projection p = project(m, x);
                            if (p.dist < best.dist) best = std::move(p);
                          }
                          return best;
                        },
                        [&](const PointSet& ps) { return project_points(ps, x); },
                    },
                    set.kind());
}

double distance(const SetOracle& set, const Vector& x) { return project(set, x).dist; }

bool contains(const SetOracle& set, const Vector& x, double tol) {
  if (!(tol > 0)) throw Error(ErrorKind::InvalidArgument, "membership tolerance must be positive");
  return distance(set, x) <= tol;
}

std::vector<Vector> sample_set_near(const SetOracle& set, const Vector& center, double rho,
                                    std::size_t n, std::uint64_t seed, double feas_tol) {
  check_input(set, center);
  if (!(rho > 0) || n < 1) throw Error(ErrorKind::InvalidArgument, "sampling needs rho > 0 and n >= 1");
  Rng rng = make_rng(seed, "sample_set_near");
  std::vector<Vector> out;
  out.reserve(n);
  const std::size_t attempts = std::max<std::size_t>(64, 50 * n);
  for (std::size_t t = 0; t < attempts && out.size() < n; ++t) {
    const Vector probe = random_in_ball(rng, center, rho);
    Vector p = project(set, probe).point;
    if ((p - center).norm() > rho) continue;
    const bool duplicate = std::any_of(out.begin(), out.end(),
                                       [&](const Vector& q) { return (p - q).norm() <= feas_tol; });
    if (!duplicate) out.push_back(std::move(p));
  }
  if (out.empty()) {
    std::ostringstream os;
    os << "no point of '" << set.label() << "' within " << rho << " of the center";
    throw Error(ErrorKind::EmptySample, os.str());
  }
  return out;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Matrix polyhedron_normals(const ConvexPolyhedron& poly, Eigen::Index n) {
  Matrix g(n, static_cast<Eigen::Index>(poly.constraints.size()));
  for (std::size_t i = 0; i < poly.constraints.size(); ++i) g.col(static_cast<Eigen::Index>(i)) = poly.constraints[i].normal;
  return g;
}

// Nearest w' to w for which sup over the convex piece of <w', .> is finite.
Vector bounded_direction(const SetOracle& s, const Vector& w) {
  return std::visit(overloaded{
                        [&](const AffineSubspace& a) -> Vector {
                          return a.basis.cols() > 0 ? Vector(w - a.basis * (a.basis.transpose() * w)) : w;
                        },
                        [&](const HalfSpace& h) -> Vector { return std::max(0.0, h.normal.dot(w)) * h.normal; },
                        [&](const ConvexPolyhedron& poly) -> Vector {
                          const Matrix g = polyhedron_normals(poly, w.size());
                          return g * nonnegative_least_squares(g, w);
                        },
                        [&](const auto&) -> Vector { return w; },
                    },
                    s.kind());
}

// Upper bound on sup over the convex piece of <w, .>; +inf when w is not a bounded direction.
double support_bound(const SetOracle& s, const Vector& w) {
  const double slack = 1e-12 * w.norm();
  return std::visit(overloaded{
                        [&](const AffineSubspace& a) {
                          if (a.basis.cols() > 0 && (a.basis.transpose() * w).norm() > slack) return kInf;
                          return w.dot(a.point);
                        },
                        [&](const HalfSpace& h) {
                          const double t = h.normal.dot(w);
                          if (t < 0 || (w - t * h.normal).norm() > slack) return kInf;
                          return t * h.offset;
                        },
                        [&](const Ball& b) { return w.dot(b.center) + b.radius * w.norm(); },
                        [&](const Sphere& b) { return w.dot(b.center) + b.radius * w.norm(); },
                        [&](const ConvexPolyhedron& poly) {
                          const Matrix g = polyhedron_normals(poly, w.size());
                          const Vector lambda = nonnegative_least_squares(g, w);
                          if ((g * lambda - w).norm() > slack) return kInf;
                          double value = 0;
                          for (std::size_t i = 0; i < poly.constraints.size(); ++i) {
                            value += lambda[static_cast<Eigen::Index>(i)] * poly.constraints[i].offset;
                          }
                          return value;
                        },
                        [&](const PointSet& ps) {
                          double value = -kInf;
                          for (const auto& p : ps.points) value = std::max(value, w.dot(p));
                          return value;
                        },
                        [&](const FiniteUnion&) { return kInf; },
                    },
                    s.kind());
}

// True when a hyperplane strictly separates p and q by more than `margin`,
// with the normal built from the current iterates a in p, b in q.
bool separated(const SetOracle& p, const SetOracle& q, const Vector& a, const Vector& b, double margin) {
  const Vector g = b - a;
  const Vector w1 = bounded_direction(p, g);
  const Vector w2 = -bounded_direction(q, -g);
  for (const Vector& w : {g, w1, w2, Vector(bounded_direction(p, w2)), Vector(-bounded_direction(q, -w1))}) {
    const double len = w.norm();
    if (!(len > 0)) continue;
    const Vector unit = w / len;
    const double gap = -support_bound(q, -unit) - support_bound(p, unit);
    if (gap > margin) return true;
  }
  return false;
}

IntersectionProbe found(const Vector& x, Vector point) {
  const double d = (x - point).norm();
  return {ProbeStatus::Found, d, std::move(point)};
}

IntersectionProbe empty_probe() { return {ProbeStatus::Empty, kInf, Vector()}; }

// Orthonormal basis of the direction space of L1 n L2 and a point of it, or
// nullopt when the affine subspaces do not meet.
std::optional<AffineSubspace> meet_affine(const AffineSubspace& l1, const AffineSubspace& l2, double tol) {
  const Eigen::Index n = l1.point.size();
  const Matrix comp2 = Matrix::Identity(n, n) - l2.basis * l2.basis.transpose();
  if (l1.basis.cols() == 0) {
    if ((comp2 * (l1.point - l2.point)).norm() > tol) return std::nullopt;
    return l1;
  }
  const Matrix m = comp2 * l1.basis;
  const Vector r = -comp2 * (l1.point - l2.point);
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  svd.setThreshold(1e-12);
  const Vector s = svd.solve(r);
  if ((m * s - r).norm() > tol) return std::nullopt;
  const auto rank = svd.rank();
  AffineSubspace out;
  out.point = l1.point + l1.basis * s;
  out.basis = l1.basis * svd.matrixV().rightCols(m.cols() - rank);
  return out;
}

// Nearest point of L n S for an affine L and a ball or half-space S, using
// |x - z|^2 = |x - P_L x|^2 + |P_L x - z|^2 for z in L.
std::optional<IntersectionProbe> affine_probe(const AffineSubspace& l, const SetOracle& other, const Vector& x,
                                              double tol) {
  const Vector y = project_affine(l, x).point;
  auto in_l = [&](const Vector& v) -> Vector {
    return l.basis.cols() > 0 ? Vector(l.basis * (l.basis.transpose() * v)) : Vector::Zero(v.size());
  };
  if (const auto* b = std::get_if<Ball>(&other.kind())) {
    const Vector c = project_affine(l, b->center).point;
    const double d = (b->center - c).norm();
    if (d > b->radius + tol) return empty_probe();
    const double r = std::sqrt(std::max(0.0, b->radius * b->radius - d * d));
    const Vector off = y - c;
    const double len = off.norm();
    return found(x, len <= r ? y : Vector(c + off * (r / len)));
  }
  if (const auto* h = std::get_if<HalfSpace>(&other.kind())) {
    const Vector nl = in_l(h->normal);
    const double excess = h->normal.dot(y) - h->offset;
    if (excess <= 0) return found(x, y);
    if (nl.squaredNorm() <= 1e-24) {
      if (excess > tol) return empty_probe();
      return found(x, y);
    }
    return found(x, y - (excess / nl.squaredNorm()) * nl);
  }
  if (const auto* l2 = std::get_if<AffineSubspace>(&other.kind())) {
    const auto meet = meet_affine(l, *l2, tol);
    if (!meet) return empty_probe();
    return found(x, project_affine(*meet, x).point);
  }
  return std::nullopt;
}

std::optional<IntersectionProbe> exact_probe(const SetOracle& p, const SetOracle& q, const Vector& x, double tol) {
  if (const auto* ps = std::get_if<PointSet>(&p.kind()); ps && ps->points.size() == 1) {
    return distance(q, ps->points[0]) <= tol ? found(x, ps->points[0]) : empty_probe();
  }
  if (const auto* l = std::get_if<AffineSubspace>(&p.kind())) return affine_probe(*l, q, x, tol);
  return std::nullopt;
}

IntersectionProbe probe_convex_pair(const SetOracle& p, const SetOracle& q, const Vector& x,
                                    const IntersectionOptions& opt) {
  const double scale = 1.0 + x.norm();
  if (auto probe = exact_probe(p, q, x, opt.gap_tol * scale)) return *probe;
  if (auto probe = exact_probe(q, p, x, opt.gap_tol * scale)) return *probe;

  const double gap_tol = opt.gap_tol * scale;

  // alternating projections until the pieces meet or a separating hyperplane certifies emptiness
  Vector a = project(p, x).point;
  bool meets = false;
  for (int k = 0; k < opt.max_iterations; ++k) {
    const Vector b = project(q, a).point;
    const double gap = (a - b).norm();
    if (gap <= gap_tol) {
      meets = true;
      break;
    }
    if (k % 8 == 0 && separated(p, q, a, b, 1e3 * gap_tol)) return {ProbeStatus::Empty, kInf, Vector()};
    a = project(p, b).point;
  }
  if (!meets) return {ProbeStatus::Failed, 0.0, Vector()};

  // Dykstra for the nearest point of the intersection
  Vector y = x;
  Vector inc_p = Vector::Zero(x.size());
  Vector inc_q = Vector::Zero(x.size());
  double last_gap = std::numeric_limits<double>::infinity();
  for (int k = 0; k < opt.max_iterations; ++k) {
    const Vector ap = project(p, y + inc_p).point;
    inc_p = y + inc_p - ap;
    const Vector bq = project(q, ap + inc_q).point;
    inc_q = ap + inc_q - bq;
    const double change = (bq - y).norm();
    y = bq;
    last_gap = (ap - bq).norm();
    if (last_gap <= gap_tol && change <= 1e-14 * scale) break;
  }
  if (last_gap > 1e-8 * scale) return {ProbeStatus::Failed, 0.0, Vector()};
  return {ProbeStatus::Found, (x - y).norm(), y};
}

}  // namespace

IntersectionProbe nearest_in_intersection(const SetOracle& a, const SetOracle& b, const Vector& x,
                                          const IntersectionOptions& options) {
  check_input(a, x);
  check_input(b, x);
  IntersectionProbe best{ProbeStatus::Empty, std::numeric_limits<double>::infinity(), Vector()};
  for (const auto& pa : a.convex_pieces()) {
    for (const auto& pb : b.convex_pieces()) {
      IntersectionProbe probe = probe_convex_pair(pa, pb, x, options);
      if (probe.status == ProbeStatus::Failed) return probe;
      if (probe.status == ProbeStatus::Found &&
          (best.status != ProbeStatus::Found || probe.distance < best.distance)) {
        best = std::move(probe);
      }
    }
  }
  return best;
}

}  // namespace tlab
