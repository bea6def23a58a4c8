#ifndef TLAB_GEOMETRY_HPP
#define TLAB_GEOMETRY_HPP

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tlab {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

enum class ErrorKind {
  DimensionMismatch,
  NonFiniteInput,
  InvalidArgument,
  EmptySample,
  NotInSet,
  EpsilonTooLarge,
  DegenerateScenario,
  IntersectionLocatorFailed,
  NonUnitPair,
  NoDecay,
  InconsistentInputs,
  NonConvexScenario,
  ParseError,
};

std::string_view to_string(ErrorKind kind);

/// Single exception type for the library; `kind()` carries the failure class.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

struct Tolerances {
  double feas_tol = 1e-10;   // membership slack
  double align_tol = 1e-3;   // normal alignment threshold
  double rate_tol = 1e-2;    // linear-rate decision margin
  double eta0 = 0.05;        // relaxation at the initial radius

  void validate() const;
};

/// Radii rho_k = rho0 * factor^k, k = 0..steps-1.
struct RadiusSchedule {
  double rho0 = 0.1;
  double factor = 0.5;
  int steps = 6;

  void validate() const;
  double radius(int k) const;
  double smallest() const { return radius(steps - 1); }
  std::vector<double> radii() const;
  /// Relaxation eta(rho) = eta0 * rho / rho0.
  double relaxation(double eta0, double rho) const { return eta0 * rho / rho0; }
};

bool all_finite(const Vector& v);
void require_finite(const Vector& v, std::string_view what);
void require_dimension(const Vector& v, Eigen::Index n, std::string_view what);

Vector parse_vector(std::string_view csv);

// --- randomness -----------------------------------------------------------

using Rng = std::mt19937_64;

/// Derives a child seed from a root seed and a stream name (plus index), so
/// each estimator and radius draws from its own reproducible substream.
std::uint64_t derive_seed(std::uint64_t root, std::string_view stream, std::uint64_t index = 0);
Rng make_rng(std::uint64_t root, std::string_view stream, std::uint64_t index = 0);

Vector random_unit(Rng& rng, Eigen::Index n);
/// Uniform in the shell inner <= |x - center| <= outer.
Vector random_in_shell(Rng& rng, const Vector& center, double inner, double outer);
inline Vector random_in_ball(Rng& rng, const Vector& center, double radius) {
  return random_in_shell(rng, center, 0.0, radius);
}

}  // namespace tlab

#endif  // TLAB_GEOMETRY_HPP
