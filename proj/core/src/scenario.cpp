#include "tlab/scenario.hpp"

#include "json_writer.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace tlab {

using nlohmann::json;

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr double kUnitSlack = 1e-10;

const json& field(const json& j, const char* key, const char* where) {
  if (!j.is_object() || !j.contains(key)) {
    throw Error(ErrorKind::ParseError, std::string(where) + " is missing field '" + key + "'");
  }
  return j.at(key);
}

double real_field(const json& j, const char* key, const char* where) {
  const json& v = field(j, key, where);
  if (!v.is_number()) throw Error(ErrorKind::ParseError, std::string(where) + "." + key + " must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw Error(ErrorKind::ParseError, std::string(where) + "." + key + " is not finite");
  return d;
}

void require_dim(const Vector& v, Eigen::Index n, const char* what) {
  if (v.size() != n) {
    std::ostringstream os;
    os << what << " has " << v.size() << " components, scenario dimension is " << n;
    throw Error(ErrorKind::ParseError, os.str());
  }
}

HalfSpace half_space_from_json(const json& j, Eigen::Index n) {
  Vector normal = detail::vector_from_json(field(j, "normal", "half_space"), "half_space.normal");
  require_dim(normal, n, "half_space.normal");
  if (std::abs(normal.norm() - 1.0) > kUnitSlack) {
    throw Error(ErrorKind::ParseError, "half_space.normal must have unit length");
  }
  return {normal, real_field(j, "offset", "half_space")};
}

SetOracle set_from_json(const json& j, Eigen::Index n) {
  if (!j.is_object()) throw Error(ErrorKind::ParseError, "set descriptor must be an object");
  const json& kind_field = field(j, "kind", "set");
  if (!kind_field.is_string()) throw Error(ErrorKind::ParseError, "set.kind must be a string");
  const std::string kind = kind_field.get<std::string>();
  std::string label = j.value("label", std::string());

  try {
    if (kind == "affine_subspace") {
      Vector point = detail::vector_from_json(field(j, "point", kind.c_str()), "affine_subspace.point");
      require_dim(point, n, "affine_subspace.point");
      const json& basis = field(j, "basis", kind.c_str());
      if (!basis.is_array()) throw Error(ErrorKind::ParseError, "affine_subspace.basis must be an array");
      Matrix span(n, static_cast<Eigen::Index>(basis.size()));
      for (std::size_t c = 0; c < basis.size(); ++c) {
        Vector col = detail::vector_from_json(basis[c], "affine_subspace.basis[]");
        require_dim(col, n, "affine_subspace.basis[]");
        span.col(static_cast<Eigen::Index>(c)) = col;
      }
      if (span.cols() > 0) {
        const Matrix gram = span.transpose() * span;
        if ((gram - Matrix::Identity(span.cols(), span.cols())).cwiseAbs().maxCoeff() > 1e-9) {
          throw Error(ErrorKind::ParseError, "affine_subspace.basis must be orthonormal");
        }
      }
      return SetOracle::affine(std::move(point), span, std::move(label));
    }
    if (kind == "half_space") {
      HalfSpace h = half_space_from_json(j, n);
      return SetOracle::half_space(h.normal, h.offset, std::move(label));
    }
    if (kind == "ball" || kind == "sphere") {
      Vector center = detail::vector_from_json(field(j, "center", kind.c_str()), "center");
      require_dim(center, n, "center");
      const double r = real_field(j, "radius", kind.c_str());
      return kind == "ball" ? SetOracle::ball(std::move(center), r, std::move(label))
                            : SetOracle::sphere(std::move(center), r, std::move(label));
    }
    if (kind == "polyhedron") {
      const json& cons = field(j, "constraints", "polyhedron");
      if (!cons.is_array() || cons.empty()) {
        throw Error(ErrorKind::ParseError, "polyhedron.constraints must be a nonempty array");
      }
      std::vector<HalfSpace> hs;
      for (const auto& c : cons) hs.push_back(half_space_from_json(c, n));
      return SetOracle::polyhedron(std::move(hs), std::move(label));
    }
    if (kind == "union") {
      const json& members = field(j, "members", "union");
      if (!members.is_array() || members.empty()) {
        throw Error(ErrorKind::ParseError, "union.members must be a nonempty array");
      }
      std::vector<SetOracle> sets;
      for (const auto& m : members) sets.push_back(set_from_json(m, n));
      return SetOracle::finite_union(std::move(sets), std::move(label));
    }
    if (kind == "points") {
      const json& pts = field(j, "points", "points");
      if (!pts.is_array() || pts.empty()) throw Error(ErrorKind::ParseError, "points.points must be nonempty");
      std::vector<Vector> vs;
      for (const auto& p : pts) {
        vs.push_back(detail::vector_from_json(p, "points.points[]"));
        require_dim(vs.back(), n, "points.points[]");
      }
      return SetOracle::points(std::move(vs), std::move(label));
    }
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::ParseError) throw;
    throw Error(ErrorKind::ParseError, e.what());
  }
  throw Error(ErrorKind::ParseError, "unknown set kind '" + kind + "'");
}

json half_space_to_json(const HalfSpace& h) {
  return json{{"normal", detail::vector_to_json(h.normal)}, {"offset", h.offset}};
}

json set_to_json(const SetOracle& set) {
  json j = std::visit(
      overloaded{
          [](const AffineSubspace& s) {
            json basis = json::array();
            for (Eigen::Index c = 0; c < s.basis.cols(); ++c) basis.push_back(detail::vector_to_json(s.basis.col(c)));
            return json{{"kind", "affine_subspace"}, {"point", detail::vector_to_json(s.point)}, {"basis", basis}};
          },
          [](const HalfSpace& h) {
            json out = half_space_to_json(h);
            out["kind"] = "half_space";
            return out;
          },
          [](const Ball& b) {
            return json{{"kind", "ball"}, {"center", detail::vector_to_json(b.center)}, {"radius", b.radius}};
          },
          [](const Sphere& s) {
            return json{{"kind", "sphere"}, {"center", detail::vector_to_json(s.center)}, {"radius", s.radius}};
          },
          [](const ConvexPolyhedron& p) {
            json cons = json::array();
            for (const auto& c : p.constraints) cons.push_back(half_space_to_json(c));
            return json{{"kind", "polyhedron"}, {"constraints", cons}};
          },
          [](const FiniteUnion& u) {
            json members = json::array();
            for (const auto& m : u.members) members.push_back(set_to_json(m));
            return json{{"kind", "union"}, {"members", members}};
          },
          [](const PointSet& ps) {
            json pts = json::array();
            for (const auto& p : ps.points) pts.push_back(detail::vector_to_json(p));
            return json{{"kind", "points"}, {"points", pts}};
          },
      },
      set.kind());
  if (!set.label().empty()) j["label"] = set.label();
  return j;
}

}  // namespace

std::vector<ScenarioIssue> validate_scenario(const PairScenario& s, const Tolerances& tol, std::size_t probes) {
  const auto n = s.dimension();
  if (s.set_b.dimension() != n || s.intersection.dimension() != n) {
    throw Error(ErrorKind::DimensionMismatch, "scenario sets differ in dimension");
  }
  require_dimension(s.xbar, n, "xbar");
  require_finite(s.xbar, "xbar");

  std::vector<ScenarioIssue> issues;
  auto report = [&](const char* invariant, const std::string& detail) { issues.push_back({invariant, detail}); };

  const double da = distance(s.set_a, s.xbar);
  if (da > tol.feas_tol) report("xbar_in_a", "d(xbar, A) = " + detail::format_real(da));
  const double db = distance(s.set_b, s.xbar);
  if (db > tol.feas_tol) report("xbar_in_b", "d(xbar, B) = " + detail::format_real(db));
  const double di = distance(s.intersection, s.xbar);
  if (di > tol.feas_tol) report("xbar_in_intersection", "d(xbar, A n B) = " + detail::format_real(di));

  const auto samples = sample_set_near(s.intersection, s.xbar, 1.0, probes, derive_seed(s.seed, "validate"),
                                       tol.feas_tol);
  std::size_t bad = 0;
  double worst = 0;
  for (const auto& p : samples) {
    const double gap = std::max(distance(s.set_a, p), distance(s.set_b, p));
    if (gap > tol.feas_tol) {
      ++bad;
      worst = std::max(worst, gap);
    }
  }
  if (bad > 0) {
    std::ostringstream os;
    os << bad << " of " << samples.size() << " intersection samples lie outside A or B (worst gap "
       << detail::format_real(worst) << ")";
    report("intersection_consistent", os.str());
  }
  return issues;
}

PairScenario parse_scenario(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ParseError, e.what());
  }
  if (!doc.is_object()) throw Error(ErrorKind::ParseError, "scenario must be a JSON object");
  const json& dim_field = field(doc, "dimension", "scenario");
  if (!dim_field.is_number_integer() || dim_field.get<long long>() < 1) {
    throw Error(ErrorKind::ParseError, "scenario.dimension must be a positive integer");
  }
  const auto n = static_cast<Eigen::Index>(dim_field.get<long long>());

  Vector xbar = detail::vector_from_json(field(doc, "xbar", "scenario"), "xbar");
  require_dim(xbar, n, "xbar");

  std::uint64_t seed = 0;
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned() && !doc["seed"].is_number_integer()) {
      throw Error(ErrorKind::ParseError, "scenario.seed must be an unsigned integer");
    }
    seed = doc["seed"].get<std::uint64_t>();
  }

  PairScenario s{doc.value("label", std::string("scenario")),
                 set_from_json(field(doc, "set_a", "scenario"), n),
                 set_from_json(field(doc, "set_b", "scenario"), n),
                 std::move(xbar),
                 set_from_json(field(doc, "intersection", "scenario"), n),
                 seed,
                 std::nullopt};

  if (doc.contains("ap_start")) {
    const json& ap = doc["ap_start"];
    APStart start;
    start.x0 = detail::vector_from_json(field(ap, "x0", "ap_start"), "ap_start.x0");
    require_dim(start.x0, n, "ap_start.x0");
    if (ap.contains("max_cycles")) start.max_cycles = ap["max_cycles"].get<int>();
    if (ap.contains("tol")) start.tol = ap["tol"].get<double>();
    s.ap_start = std::move(start);
  }
  return s;
}

PairScenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open scenario file '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

std::string scenario_to_json(const PairScenario& s) {
  json doc;
  doc["label"] = s.label;
  doc["dimension"] = static_cast<long long>(s.dimension());
  doc["set_a"] = set_to_json(s.set_a);
  doc["set_b"] = set_to_json(s.set_b);
  doc["xbar"] = detail::vector_to_json(s.xbar);
  doc["intersection"] = set_to_json(s.intersection);
  doc["seed"] = s.seed;
  if (s.ap_start) {
    doc["ap_start"] = json{{"x0", detail::vector_to_json(s.ap_start->x0)},
                           {"max_cycles", s.ap_start->max_cycles},
                           {"tol", s.ap_start->tol}};
  }
  return detail::dump_json(doc);
}

void save_scenario(const PairScenario& s, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write '" + path.string() + "'");
  out << scenario_to_json(s);
}

std::vector<std::filesystem::path> list_battery(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> files;
  if (!std::filesystem::is_directory(dir)) return files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

namespace catalog {

namespace {

Vector v2(double x, double y) { return Vector{{x, y}}; }

std::string degrees(double theta) {
  return std::to_string(std::lround(theta * 180.0 / std::numbers::pi)) + "deg";
}

}  // namespace

PairScenario two_lines(double theta, std::uint64_t seed) {
  PairScenario s{"two_lines_" + degrees(theta),
                 SetOracle::line(v2(0, 0), v2(1, 0), "axis"),
                 SetOracle::line(v2(0, 0), v2(std::cos(theta), std::sin(theta)), "tilted line"),
                 v2(0, 0),
                 SetOracle::points({v2(0, 0)}, "origin"),
                 seed,
                 APStart{v2(1, 0), 200, 1e-10}};
  return s;
}

PairScenario identical_lines(std::uint64_t seed) {
  return PairScenario{"identical_lines",
                      SetOracle::line(v2(0, 0), v2(1, 0), "axis"),
                      SetOracle::line(v2(0, 0), v2(1, 0), "axis"),
                      v2(0, 0),
                      SetOracle::line(v2(0, 0), v2(1, 0), "axis"),
                      seed,
                      std::nullopt};
}

PairScenario half_planes(double theta, std::uint64_t seed) {
  HalfSpace lower{v2(0, 1), 0.0};
  HalfSpace tilted{v2(std::sin(theta), -std::cos(theta)), 0.0};
  return PairScenario{"half_planes_" + degrees(theta),
                      SetOracle::half_space(lower.normal, lower.offset, "lower half-plane"),
                      SetOracle::half_space(tilted.normal, tilted.offset, "tilted half-plane"),
                      v2(0, 0),
                      SetOracle::polyhedron({lower, tilted}, "wedge"),
                      seed,
                      APStart{v2(1, 0.5), 200, 1e-10}};
}

PairScenario identical_half_planes(std::uint64_t seed) {
  return PairScenario{"identical_half_planes",
                      SetOracle::half_space(v2(0, 1), 0.0, "lower half-plane"),
                      SetOracle::half_space(v2(0, 1), 0.0, "lower half-plane"),
                      v2(0, 0),
                      SetOracle::half_space(v2(0, 1), 0.0, "lower half-plane"),
                      seed,
                      APStart{v2(0.5, 0.7), 200, 1e-10}};
}

PairScenario tangential_ball_line(std::uint64_t seed) {
  return PairScenario{"tangential_ball_line",
                      SetOracle::ball(v2(0, 1), 1.0, "unit disk at (0,1)"),
                      SetOracle::line(v2(0, 0), v2(1, 0), "axis"),
                      v2(0, 0),
                      SetOracle::points({v2(0, 0)}, "origin"),
                      seed,
                      std::nullopt};
}

PairScenario ball_line_crossing(std::uint64_t seed) {
  const double end = std::sqrt(0.75);
  std::vector<HalfSpace> segment{{v2(0, 1), 0.0}, {v2(0, -1), 0.0}, {v2(1, 0), end}, {v2(-1, 0), end}};
  return PairScenario{"ball_line_crossing",
                      SetOracle::ball(v2(0, 0.5), 1.0, "unit disk at (0,1/2)"),
                      SetOracle::line(v2(0, 0), v2(1, 0), "axis"),
                      v2(end, 0),
                      SetOracle::polyhedron(segment, "chord"),
                      seed,
                      APStart{v2(end + 0.05, 0.03), 200, 1e-10}};
}

PairScenario nested_point_plane(std::uint64_t seed) {
  return PairScenario{"nested_point_plane",
                      SetOracle::points({v2(0, 0)}, "origin"),
                      SetOracle::whole_space(2, "plane"),
                      v2(0, 0),
                      SetOracle::points({v2(0, 0)}, "origin"),
                      seed,
                      std::nullopt};
}

PairScenario stall_union_axis(std::uint64_t seed) {
  return PairScenario{"stall_union_axis",
                      SetOracle::finite_union({SetOracle::line(v2(0, 1), v2(1, 0), "line q=1"),
                                               SetOracle::points({v2(0, 0)}, "origin")},
                                              "line q=1 with origin"),
                      SetOracle::line(v2(0, 0), v2(1, 0), "axis"),
                      v2(0, 0),
                      SetOracle::points({v2(0, 0)}, "origin"),
                      seed,
                      APStart{v2(5, 1), 50, 1e-10}};
}

PairScenario planes_3d(double theta, std::uint64_t seed) {
  Matrix flat(3, 2);
  flat << 1, 0, 0, 1, 0, 0;
  Matrix tilted(3, 2);
  tilted << 1, 0, 0, std::cos(theta), 0, std::sin(theta);
  Vector origin = Vector::Zero(3);
  return PairScenario{"planes_3d_" + degrees(theta),
                      SetOracle::affine(origin, flat, "z = 0"),
                      SetOracle::affine(origin, tilted, "tilted plane"),
                      origin,
                      SetOracle::line(origin, Vector{{1.0, 0.0, 0.0}}, "x-axis"),
                      seed,
                      APStart{Vector{{0.3, 1.0, 0.0}}, 200, 1e-10}};
}

std::vector<PairScenario> battery(std::uint64_t seed) {
  using std::numbers::pi;
  std::vector<PairScenario> out;
  out.push_back(two_lines(pi / 6, seed));
  out.push_back(two_lines(pi / 3, seed));
  out.push_back(two_lines(pi / 2, seed));
  out.push_back(half_planes(pi / 3, seed));
  out.push_back(ball_line_crossing(seed));
  out.push_back(tangential_ball_line(seed));
  out.push_back(nested_point_plane(seed));
  out.push_back(identical_half_planes(seed));
  out.push_back(stall_union_axis(seed));
  return out;
}

}  // namespace catalog

}  // namespace tlab
