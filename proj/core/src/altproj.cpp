#include "tlab/altproj.hpp"

#include <cmath>
#include <string>

namespace tlab {

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::Converged:
      return "Converged";
    case Termination::Stalled:
      return "Stalled";
    case Termination::BudgetExhausted:
      return "BudgetExhausted";
  }
  return "?";
}

namespace {

void record(APTrace& trace, const PairScenario& pair, Vector x) {
  trace.dist_a.push_back(distance(pair.set_a, x));
  trace.dist_b.push_back(distance(pair.set_b, x));
  trace.dist_inter.push_back(distance(pair.intersection, x));
  trace.points.push_back(std::move(x));
}

}  // namespace

APTrace run_alternating_projections(const PairScenario& pair, const Vector& x0, int max_cycles, double tol) {
  if (max_cycles < 1) throw Error(ErrorKind::InvalidArgument, "max_cycles must be at least 1");
  if (!(tol > 0)) throw Error(ErrorKind::InvalidArgument, "tol must be positive");
  require_dimension(x0, pair.dimension(), "x0");
  require_finite(x0, "x0");

  APTrace trace;
  record(trace, pair, x0);
  if (trace.dist_inter.back() <= tol) {
    trace.reason = Termination::Converged;
    return trace;
  }
  for (int c = 1; c <= max_cycles; ++c) {
    record(trace, pair, project(pair.set_b, trace.points.back()).point);
    record(trace, pair, project(pair.set_a, trace.points.back()).point);
    trace.cycles = c;
    if (trace.dist_inter.back() <= tol) {
      trace.reason = Termination::Converged;
      return trace;
    }
    if (detect_stall(trace, tol)) {
      trace.reason = Termination::Stalled;
      return trace;
    }
  }
  trace.reason = Termination::BudgetExhausted;
  return trace;
}

double RateFit::half_step_rate() const { return std::sqrt(rate_c); }

RateFit fit_linear_rate(const APTrace& trace, int window) {
  if (window < 2) throw Error(ErrorKind::InvalidArgument, "window must be at least 2");
  if (trace.reason == Termination::Stalled) throw Error(ErrorKind::NoDecay, "trace is stalled");
  if (trace.cycles < window + 2) {
    throw Error(ErrorKind::InvalidArgument, "trace has " + std::to_string(trace.cycles) +
                                                " cycles, rate fit needs window + 2 = " + std::to_string(window + 2));
  }
  const int first = trace.cycles - window + 1;
  double sk = 0, sy = 0, skk = 0, sky = 0;
  std::vector<double> ys;
  for (int k = first; k <= trace.cycles; ++k) {
    const double d = trace.inter_after_cycle(k);
    if (!(d > 0)) throw Error(ErrorKind::NoDecay, "distance to the intersection reached zero inside the window");
    const double y = std::log(d);
    ys.push_back(y);
    sk += k;
    sy += y;
    skk += static_cast<double>(k) * k;
    sky += k * y;
  }
  const double m = window;
  const double slope = (m * sky - sk * sy) / (m * skk - sk * sk);
  const double intercept = (sy - slope * sk) / m;
  const double mean = sy / m;
  double ss_tot = 0, ss_res = 0;
  for (int i = 0; i < window; ++i) {
    const double k = first + i;
    ss_tot += (ys[static_cast<std::size_t>(i)] - mean) * (ys[static_cast<std::size_t>(i)] - mean);
    const double r = ys[static_cast<std::size_t>(i)] - (intercept + slope * k);
    ss_res += r * r;
  }
  RateFit fit;
  fit.rate_c = std::exp(slope);
  fit.alpha_coeff = std::exp(intercept);
  fit.quality = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
  return fit;
}

std::optional<StallPair> detect_stall(const APTrace& trace, double tol) {
  if (trace.cycles < 2 || trace.points.size() < static_cast<std::size_t>(2 * trace.cycles + 1)) return std::nullopt;
  const int c = trace.cycles;
  if (trace.inter_after_cycle(c) <= tol) return std::nullopt;
  const Vector& p2 = trace.after_cycle(c);
  const Vector& p1 = trace.after_cycle(c - 1);
  const Vector& p0 = trace.after_cycle(c - 2);
  if ((p2 - p1).norm() > tol || (p1 - p0).norm() > tol) return std::nullopt;
  const auto& q2 = trace.points[static_cast<std::size_t>(2 * c - 1)];
  const auto& q1 = trace.points[static_cast<std::size_t>(2 * c - 3)];
  if ((q2 - q1).norm() > tol) return std::nullopt;
  // a slowly converging trace moves by less than tol but still gets closer
  if (trace.inter_after_cycle(c) < trace.inter_after_cycle(c - 2) * (1.0 - 1e-9)) return std::nullopt;
  return StallPair{p2, q2, (p2 - q2).norm()};
}

}  // namespace tlab
