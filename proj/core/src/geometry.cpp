#include "tlab/geometry.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

namespace tlab {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NonFiniteInput: return "NonFiniteInput";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::EmptySample: return "EmptySample";
    case ErrorKind::NotInSet: return "NotInSet";
    case ErrorKind::EpsilonTooLarge: return "EpsilonTooLarge";
    case ErrorKind::DegenerateScenario: return "DegenerateScenario";
    case ErrorKind::IntersectionLocatorFailed: return "IntersectionLocatorFailed";
    case ErrorKind::NonUnitPair: return "NonUnitPair";
    case ErrorKind::NoDecay: return "NoDecay";
    case ErrorKind::InconsistentInputs: return "InconsistentInputs";
    case ErrorKind::NonConvexScenario: return "NonConvexScenario";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

void Tolerances::validate() const {
  if (!(feas_tol > 0) || !(align_tol > 0) || !(rate_tol > 0) || !(eta0 > 0)) {
    throw Error(ErrorKind::InvalidArgument, "tolerances must be strictly positive");
  }
  if (!(align_tol < 1)) {
    throw Error(ErrorKind::InvalidArgument, "align_tol must be below 1");
  }
}

void RadiusSchedule::validate() const {
  if (!(rho0 > 0) || !std::isfinite(rho0)) {
    throw Error(ErrorKind::InvalidArgument, "rho0 must be positive");
  }
  if (!(factor > 0 && factor < 1)) {
    throw Error(ErrorKind::InvalidArgument, "schedule factor must lie in (0,1)");
  }
  if (steps < 2) {
    throw Error(ErrorKind::InvalidArgument, "schedule needs at least two radii");
  }
}

double RadiusSchedule::radius(int k) const { return rho0 * std::pow(factor, k); }

std::vector<double> RadiusSchedule::radii() const {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(steps));
  for (int k = 0; k < steps; ++k) out.push_back(radius(k));
  return out;
}

bool all_finite(const Vector& v) { return v.allFinite(); }

void require_finite(const Vector& v, std::string_view what) {
  if (!v.allFinite()) {
    throw Error(ErrorKind::NonFiniteInput, std::string(what) + " has non-finite components");
  }
}

void require_dimension(const Vector& v, Eigen::Index n, std::string_view what) {
  if (v.size() != n) {
    std::ostringstream os;
    os << what << " has dimension " << v.size() << ", expected " << n;
    throw Error(ErrorKind::DimensionMismatch, os.str());
  }
}

Vector parse_vector(std::string_view csv) {
  std::vector<double> values;
  std::size_t pos = 0;
  while (pos <= csv.size()) {
    std::size_t end = csv.find(',', pos);
    if (end == std::string_view::npos) end = csv.size();
    std::string token(csv.substr(pos, end - pos));
    // strip blanks
    const auto first = token.find_first_not_of(" \t");
    const auto last = token.find_last_not_of(" \t");
    if (first == std::string::npos) {
      throw Error(ErrorKind::ParseError, "empty component in vector '" + std::string(csv) + "'");
    }
    token = token.substr(first, last - first + 1);
    std::size_t used = 0;
    double value = 0;
    try {
      value = std::stod(token, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != token.size()) {
      throw Error(ErrorKind::ParseError, "cannot parse component '" + token + "'");
    }
    values.push_back(value);
    pos = end + 1;
  }
  Vector v(static_cast<Eigen::Index>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) v[static_cast<Eigen::Index>(i)] = values[i];
  require_finite(v, "vector");
  return v;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t root, std::string_view stream, std::uint64_t index) {
  return splitmix64(splitmix64(root) ^ fnv1a(stream) ^ splitmix64(index + 0x5851f42d4c957f2dULL));
}

Rng make_rng(std::uint64_t root, std::string_view stream, std::uint64_t index) {
  return Rng(derive_seed(root, stream, index));
}

Vector random_unit(Rng& rng, Eigen::Index n) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector v(n);
  double norm = 0;
  do {
    for (Eigen::Index i = 0; i < n; ++i) v[i] = gauss(rng);
    norm = v.norm();
  } while (norm < 1e-12);
  return v / norm;
}

Vector random_in_shell(Rng& rng, const Vector& center, double inner, double outer) {
  const auto n = center.size();
  const Vector dir = random_unit(rng, n);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double d = static_cast<double>(n);
  const double lo = std::pow(inner, d);
  const double hi = std::pow(outer, d);
  const double r = std::pow(lo + unif(rng) * (hi - lo), 1.0 / d);
  return center + r * dir;
}

}  // namespace tlab
