#ifndef TLAB_SCENARIO_HPP
#define TLAB_SCENARIO_HPP

#include "tlab/geometry.hpp"
#include "tlab/set_oracle.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace tlab {

/// Optional alternating-projections run attached to a scenario file.
struct APStart {
  Vector x0;
  int max_cycles = 200;
  double tol = 1e-10;
};

/// Two sets, a common point xbar and an oracle for their intersection.
struct PairScenario {
  std::string label;
  SetOracle set_a;
  SetOracle set_b;
  Vector xbar;
  SetOracle intersection;
  std::uint64_t seed = 0;
  std::optional<APStart> ap_start;

  Eigen::Index dimension() const { return set_a.dimension(); }
  bool is_convex() const { return set_a.is_convex() && set_b.is_convex(); }
};

struct ScenarioIssue {
  std::string invariant;
  std::string detail;
};

/// Structural problems (dimension mismatch, non-finite xbar) throw; semantic
/// invariants are returned so callers can report them as failed checks.
std::vector<ScenarioIssue> validate_scenario(const PairScenario& scenario, const Tolerances& tol,
                                             std::size_t probes = 64);

/// Parse failures throw Error(ParseError).
PairScenario parse_scenario(const std::string& json_text);
PairScenario load_scenario(const std::filesystem::path& path);
std::string scenario_to_json(const PairScenario& scenario);
void save_scenario(const PairScenario& scenario, const std::filesystem::path& path);

/// Scenario files (*.json) of a battery directory in lexicographic order.
std::vector<std::filesystem::path> list_battery(const std::filesystem::path& dir);

namespace catalog {

/// Horizontal axis and the line through the origin at angle theta.
PairScenario two_lines(double theta, std::uint64_t seed = 1);
PairScenario identical_lines(std::uint64_t seed = 1);
/// {q <= 0} and the half-plane bounded by the line at angle theta containing (0,1);
/// their intersection is a wedge of opening theta.
PairScenario half_planes(double theta, std::uint64_t seed = 1);
PairScenario identical_half_planes(std::uint64_t seed = 1);
/// Closed disk of radius 1 centred at (0,1) touching the horizontal axis at the origin.
PairScenario tangential_ball_line(std::uint64_t seed = 1);
/// Disk centred at (0,1/2) of radius 1 crossing the axis at (sqrt(3)/2, 0), with xbar there.
PairScenario ball_line_crossing(std::uint64_t seed = 1);
/// A = {origin}, B = R^2.
PairScenario nested_point_plane(std::uint64_t seed = 1);
/// A = {q = 1} u {(0,0)}, B = horizontal axis; alternating projections stall at (5,1)/(5,0).
PairScenario stall_union_axis(std::uint64_t seed = 1);
/// Plane z = 0 and a plane through the x-axis tilted by theta, in R^3.
PairScenario planes_3d(double theta, std::uint64_t seed = 1);

/// The shipped verification battery.
std::vector<PairScenario> battery(std::uint64_t seed = 1);

}  // namespace catalog

}  // namespace tlab

#endif  // TLAB_SCENARIO_HPP
