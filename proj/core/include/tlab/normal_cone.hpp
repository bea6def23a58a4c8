#ifndef TLAB_NORMAL_CONE_HPP
#define TLAB_NORMAL_CONE_HPP

#include "tlab/geometry.hpp"
#include "tlab/set_oracle.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace tlab {

/// Generators of the proximal normal cone at `base`.
struct NormalFan {
  Vector base;
  std::vector<Vector> directions;
  bool exact = false;
  /// base lies on several pieces of a union; the piece cones over-approximate.
  bool ambiguous = false;
};

inline double default_normal_eps(const Vector& a) { return 1e-6 * (1.0 + a.norm()); }

/// True when project(set, a + eps*u) returns a within feas_tol.
bool passes_inverse_projection(const SetOracle& set, const Vector& a, const Vector& u, double eps,
                               double feas_tol);

/// Closed-form generators where the kind admits them, otherwise up to m random
/// unit directions that pass the inverse-projection test.
/// Throws NotInSet, EpsilonTooLarge.
NormalFan proximal_normal_directions(const SetOracle& set, const Vector& a, double eps, std::size_t m,
                                     std::uint64_t seed, double feas_tol = 1e-10);

/// Euclidean projection of u onto N_set(a). For unions the piece whose cone is
/// closest to u is used. Throws NotInSet.
Vector normal_cone_projection(const SetOracle& set, const Vector& a, const Vector& u, double feas_tol = 1e-10);
double normal_cone_distance(const SetOracle& set, const Vector& a, const Vector& u, double feas_tol = 1e-10);
/// Positive part of max{<u, v> : v in N_set(a), |v| = 1}; equals the norm of
/// the projection of u onto the cone.
double normal_cone_support(const SetOracle& set, const Vector& a, const Vector& u, double feas_tol = 1e-10);

/// Distance from u to cone(generators) for a sampled fan: min over t >= 0 and
/// listed g of |u - t g|; an upper bound on the distance to the true cone.
double fan_distance(const NormalFan& fan, const Vector& u);

/// max <u, a' - a>/|a' - a| over points a' of the set sampled within the
/// smallest radius of the schedule. Throws NotInSet, EmptySample.
double frechet_normal_defect(const SetOracle& set, const Vector& a, const Vector& u,
                             const RadiusSchedule& radii, std::size_t n, std::uint64_t seed,
                             double feas_tol = 1e-10);

/// 1 - cos(angle(v, w)); zero when either vector vanishes.
double alignment_defect(const Vector& v, const Vector& w);

/// min |G x - u| subject to x >= 0 (Lawson-Hanson active set).
Vector nonnegative_least_squares(const Matrix& G, const Vector& u);

std::string fan_to_json(const NormalFan& fan);

}  // namespace tlab

#endif  // TLAB_NORMAL_CONE_HPP
