#ifndef TLAB_SET_ORACLE_HPP
#define TLAB_SET_ORACLE_HPP

#include "tlab/geometry.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace tlab {

class SetOracle;

/// point + span(basis); basis columns are orthonormal (possibly zero columns).
struct AffineSubspace {
  Vector point;
  Matrix basis;
};

/// { x : <normal, x> <= offset }, unit normal.
struct HalfSpace {
  Vector normal;
  double offset = 0;
};

struct Ball {
  Vector center;
  double radius = 0;
};

struct Sphere {
  Vector center;
  double radius = 0;
};

struct ConvexPolyhedron {
  std::vector<HalfSpace> constraints;
};

struct FiniteUnion {
  std::vector<SetOracle> members;
};

struct PointSet {
  std::vector<Vector> points;
};

/// A nonempty closed subset of R^n queried through its projection.
///
/// Oracles are immutable once built; all queries are const and safe to call
/// from several threads.
class SetOracle {
 public:
  using Kind = std::variant<AffineSubspace, HalfSpace, Ball, Sphere, ConvexPolyhedron, FiniteUnion,
                            PointSet>;

  /// Columns of `spanning` need not be orthonormal; they are orthonormalized
  /// and rank-deficient input is rejected.
  static SetOracle affine(Vector point, const Matrix& spanning, std::string label = {});
  static SetOracle line(Vector point, const Vector& direction, std::string label = {});
  static SetOracle whole_space(Eigen::Index n, std::string label = {});
  /// The normal is normalized and the offset rescaled accordingly.
  static SetOracle half_space(const Vector& normal, double offset, std::string label = {});
  static SetOracle ball(Vector center, double radius, std::string label = {});
  static SetOracle sphere(Vector center, double radius, std::string label = {});
  static SetOracle polyhedron(std::vector<HalfSpace> constraints, std::string label = {});
  static SetOracle finite_union(std::vector<SetOracle> members, std::string label = {});
  static SetOracle points(std::vector<Vector> points, std::string label = {});

  Eigen::Index dimension() const { return dim_; }
  const Kind& kind() const { return kind_; }
  const std::string& label() const { return label_; }
  std::string_view kind_name() const;

  bool is_convex() const;
  /// The set shifted by `shift`: { s + shift : s in set }.
  SetOracle translated(const Vector& shift) const;
  /// Closed convex pieces whose union is the set (Sphere is kept whole).
  std::vector<SetOracle> convex_pieces() const;

 private:
  SetOracle(Kind kind, Eigen::Index dim, std::string label);

  Kind kind_;
  Eigen::Index dim_ = 0;
  std::string label_;
};

struct Projection {
  Vector point;
  double dist = 0;
};

/// Nearest point of the set. Ties among union pieces or listed points go to
/// the smallest index. Throws DimensionMismatch / NonFiniteInput.
Projection project(const SetOracle& set, const Vector& x);
double distance(const SetOracle& set, const Vector& x);
bool contains(const SetOracle& set, const Vector& x, double tol);

/// Up to n distinct points of the set within rho of center, obtained by
/// projecting uniform ball samples. Throws EmptySample when none qualify.
std::vector<Vector> sample_set_near(const SetOracle& set, const Vector& center, double rho,
                                    std::size_t n, std::uint64_t seed, double feas_tol = 1e-10);

/// Dykstra projection onto an intersection of half-spaces.
Vector project_polyhedron(const std::vector<HalfSpace>& constraints, const Vector& x);

// --- intersection of two sets ---------------------------------------------

enum class ProbeStatus { Found, Empty, Failed };

struct IntersectionProbe {
  ProbeStatus status = ProbeStatus::Failed;
  double distance = 0;  // +inf when Empty
  Vector point;         // valid when Found
};

struct IntersectionOptions {
  int max_iterations = 4000;
  double gap_tol = 1e-11;
};

/// Nearest point of A n B to x, minimized over pairs of convex pieces. Pairs
/// with a single point or an affine piece against a ball, half-space or affine
/// piece are solved in closed form. Other pairs are first checked for emptiness
/// by alternating projections (a separating hyperplane built from the iterates
/// certifies an empty intersection), then Dykstra's algorithm gives the
/// projection. Failed when any pair is undecided.
IntersectionProbe nearest_in_intersection(const SetOracle& a, const SetOracle& b, const Vector& x,
                                          const IntersectionOptions& options = {});

}  // namespace tlab

#endif  // TLAB_SET_ORACLE_HPP
