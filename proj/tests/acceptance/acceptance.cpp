// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 when any fails.
// Usage: tlab_acceptance <path-to-tlab-executable>
#include "tlab/altproj.hpp"
#include "tlab/estimators.hpp"
#include "tlab/report_io.hpp"
#include "tlab/scenario.hpp"
#include "tlab/verify.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace tlab;

namespace {

constexpr double kItrhatTol = 0.02;
constexpr double kRuntimeLimit = 30.0;
constexpr double kIdentityTol = 0.05;
constexpr double kExactTol = 1e-12;
constexpr double kBoundSlack = 0.02;
constexpr double kRateTarget = 0.25;
constexpr double kRateTol = 0.02;
constexpr int kRateCycleLimit = 60;
constexpr double kApTol = 1e-10;
constexpr double kConvexRateSlack = 0.05;
constexpr double kHalvingFactor = 1.5;
constexpr double kTangentialItrhat = 0.05;
constexpr double kGapTol = 1e-9;
constexpr double kStallStr = 0.9;
constexpr std::size_t kMinConvexCases = 6;
constexpr std::size_t kLemmaTrials = 10000;
constexpr double kLemmaRel = 1e-9;
constexpr double kLemmaSlack = 1e-12;

struct Scenario {
  fs::path file;
  PairScenario pair;
  ScenarioVerification result;
  double seconds = 0;
};

int failures = 0;

void verdict(int id, bool pass, const std::string& what, const std::string& detail) {
  if (!pass) ++failures;
  std::printf("%s criterion %d: %s -- %s\n", pass ? "PASS" : "FAIL", id, what.c_str(), detail.c_str());
  std::fflush(stdout);
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

const Check* find_check(const VerificationReport& r, const std::string& id) {
  for (const auto& c : r.checks)
    if (c.id == id) return &c;
  return nullptr;
}

std::string failed_ids(const VerificationReport& r) {
  std::string s;
  for (const auto* c : r.failures()) s += (s.empty() ? "" : ", ") + c->id;
  return s.empty() ? "none failed" : "failed: " + s;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::map<std::string, std::string> csv_outputs(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".csv") {
      out[fs::relative(e.path(), dir).generic_string()] = slurp(e.path());
    }
  }
  return out;
}

std::vector<Scenario> run_battery(const EstimatorConfig& config) {
  std::vector<Scenario> all;
  for (const auto& file : list_battery(fs::path(TLAB_SCENARIO_DIR) / "battery")) {
    PairScenario pair = load_scenario(file);
    const auto start = std::chrono::steady_clock::now();
    auto result = verify_scenario(pair, config);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    all.push_back(Scenario{file, std::move(pair), std::move(result), seconds});
  }
  return all;
}

const Scenario& by_label(const std::vector<Scenario>& all, const std::string& label) {
  for (const auto& s : all)
    if (s.pair.label == label) return s;
  throw std::runtime_error("battery has no scenario '" + label + "'");
}

void criterion1(const std::vector<Scenario>& all, const nlohmann::json& fixture) {
  const char* labels[] = {"two_lines_30deg", "two_lines_60deg", "two_lines_90deg"};
  bool pass = true;
  std::string detail;
  for (std::size_t i = 0; i < 3; ++i) {
    const auto& s = by_label(all, labels[i]);
    const double oracle = fixture[i]["itrhat1"].get<double>();
    const double est = s.result.estimates.itrhat1.value;
    pass = pass && std::abs(est - oracle) <= kItrhatTol && s.seconds < kRuntimeLimit;
    detail += std::string(labels[i]) + " itrhat1 " + fmt(est) + " vs " + fmt(oracle) + " (" + fmt(s.seconds) + " s); ";
  }
  verdict(1, pass, "two-lines itrhat1 within 0.02 of the grid oracle, under 30 s", detail);
}

void criterion2(const std::vector<Scenario>& all) {
  bool pass = true;
  std::string detail;
  for (const char* label : {"two_lines_30deg", "two_lines_60deg", "two_lines_90deg"}) {
    const auto r = check_unit_pair_identities(by_label(all, label).result.estimates, kIdentityTol);
    pass = pass && r.overall;
    detail += std::string(label) + " " + failed_ids(r) + "; ";
  }
  const auto& nested = by_label(all, "nested_point_plane").result.estimates;
  const auto exact = check_unit_pair_identities(nested, kExactTol);
  pass = pass && nested.itr.no_witness && exact.overall;
  detail += "empty harvest (nested_point_plane, no_witness=" + std::to_string(nested.itr.no_witness) + ") " +
            failed_ids(exact);
  verdict(2, pass, "pair identities at 0.05, exact on the empty-harvest convention", detail);
}

void criterion3(const std::vector<Scenario>& all, double thr) {
  bool pass = true;
  std::string detail;
  for (const auto& s : all) {
    const auto r = check_itrhat_identities(s.result.estimates, kIdentityTol, kBoundSlack, thr);
    if (!r.overall) detail += s.pair.label + " " + failed_ids(r) + "; ";
    pass = pass && r.overall;
  }
  verdict(3, pass, "itrhat identities, bound and zero agreement on every battery scenario",
          detail.empty() ? std::to_string(all.size()) + " scenarios, threshold " + fmt(thr) : detail);
}

void criterion4(const nlohmann::json& fixture) {
  const auto pair = catalog::two_lines(std::numbers::pi / 3);
  Vector x0(2);
  x0 << 1.0, 0.0;
  const auto trace = run_alternating_projections(pair, x0, kRateCycleLimit, kApTol);
  const double oracle = fixture["rate"].get<double>();
  const bool converged = trace.reason == Termination::Converged && trace.cycles <= kRateCycleLimit;
  double rate = std::nan("");
  try {
    rate = fit_linear_rate(trace, std::min(8, trace.cycles - 2)).rate_c;
  } catch (const Error&) {
  }
  const bool pass = converged && std::abs(rate - kRateTarget) <= kRateTol && std::abs(oracle - kRateTarget) <= 1e-12;
  verdict(4, pass, "two lines pi/3 from (1,0): rate 0.25 +- 0.02, converged within 60 cycles",
          "rate " + fmt(rate) + ", oracle " + fmt(oracle) + ", " + std::string(to_string(trace.reason)) + " after " +
              std::to_string(trace.cycles) + " cycles");
}

/// Per-half-step rate: fitted when the trace is long enough, otherwise the
/// worst observed one-cycle contraction (zero for exact convergence).
double half_step_rate(const APTrace& trace) {
  if (trace.cycles >= 4) return fit_linear_rate(trace, std::min(8, trace.cycles - 2)).half_step_rate();
  double worst = 0;
  for (int k = 1; k <= trace.cycles; ++k) {
    const double prev = trace.inter_after_cycle(k - 1);
    if (prev > 0) worst = std::max(worst, trace.inter_after_cycle(k) / prev);
  }
  return std::sqrt(worst);
}

void criterion5(const std::vector<Scenario>& all, double thr) {
  bool pass = true;
  std::string detail;
  int count = 0;
  for (const auto& s : all) {
    const double str = s.result.estimates.str.value;
    if (!s.pair.is_convex() || str <= thr || !s.result.trace) continue;
    ++count;
    double rate = std::nan("");
    try {
      rate = half_step_rate(*s.result.trace);
    } catch (const Error&) {
    }
    const double bound = std::sqrt(1 - str * str) + kConvexRateSlack;
    pass = pass && rate <= bound;
    detail += s.pair.label + " " + fmt(rate) + " <= " + fmt(bound) + "; ";
  }
  pass = pass && count > 0;
  verdict(5, pass, "convex transversal scenarios: half-step rate <= sqrt(1 - str^2) + 0.05", detail);
}

void criterion6(const std::vector<Scenario>& all, const nlohmann::json& fixture) {
  const auto& est = by_label(all, "tangential_ball_line").result.estimates;
  const auto& per = est.str.per_radius;
  bool pass = per.size() >= 6;
  std::string detail = "str ratios";
  for (std::size_t k = 1; k < 6 && k < per.size(); ++k) {
    const double ratio = per[k - 1].value / per[k].value;
    const double oracle = fixture[k - 1]["str"].get<double>() / fixture[k]["str"].get<double>();
    pass = pass && ratio >= kHalvingFactor && oracle >= kHalvingFactor;
    detail += " " + fmt(ratio) + " (oracle " + fmt(oracle) + ")";
  }
  pass = pass && est.itrhat1.value <= kTangentialItrhat;
  detail += "; itrhat1 " + fmt(est.itrhat1.value);
  verdict(6, pass, "tangential str halves by >= 1.5 per radius, itrhat1 <= 0.05", detail);
}

void criterion7(const std::vector<Scenario>& all) {
  const auto& s = by_label(all, "stall_union_axis");
  Vector x0(2);
  x0 << 5.0, 1.0;
  const auto trace = run_alternating_projections(s.pair, x0, 50, kApTol);
  const auto stall = detect_stall(trace, kApTol);
  Vector p(2), q(2);
  p << 5.0, 1.0;
  q << 5.0, 0.0;
  const double str = s.result.estimates.str.value;
  bool pass = trace.reason == Termination::Stalled && stall && str >= kStallStr;
  std::string detail = std::string(to_string(trace.reason)) + ", str " + fmt(str);
  if (stall) {
    pass = pass && (stall->p - p).norm() <= kGapTol && (stall->q - q).norm() <= kGapTol &&
           std::abs(stall->gap - 1.0) <= kGapTol;
    detail += ", gap " + format_real(stall->gap);
  }
  verdict(7, pass, "stall pair ((5,1),(5,0)) with gap 1, str >= 0.9", detail);
}

void criterion8(const std::vector<Scenario>& all, double thr) {
  std::vector<EquivalenceCase> cases;
  bool tangential_zero = false;
  for (const auto& s : all) {
    if (!s.pair.is_convex()) continue;
    const auto& e = s.result.estimates;
    cases.push_back({s.pair.label, true, e.str.value, e.itr.value, e.strc.value});
    if (s.pair.label == "tangential_ball_line") tangential_zero = std::max({e.str.value, e.itr.value, e.strc.value}) <= thr;
  }
  const auto r = check_convex_equivalence(cases, thr);
  const bool pass = r.overall && cases.size() >= kMinConvexCases && tangential_zero;
  verdict(8, pass, "positivity agreement of itr, strc, str on >= 6 convex scenarios with a tangential zero case",
          std::to_string(cases.size()) + " convex cases, tangential all zero=" + std::to_string(tangential_zero) + ", " +
              failed_ids(r));
}

void criterion9(const std::vector<Scenario>& all) {
  const auto lemma = lemma_property_suite(1, kLemmaTrials, kLemmaRel, kLemmaSlack);
  bool pass = lemma.overall;
  std::string detail = "lemma suite " + failed_ids(lemma) + "; proximal";
  for (const auto& s : all) {
    const auto* c = find_check(s.result.report, "proximal_directions_valid");
    pass = pass && c && c->pass;
    detail += " " + s.pair.label + "=" + (c ? c->detail : std::string("missing"));
  }
  verdict(9, pass, "lemma property suite and 100% proximal-direction validity", detail);
}

void criterion10(const std::string& tlab) {
  const fs::path root = fs::path(TLAB_SCRATCH_DIR) / "determinism";
  fs::remove_all(root);
  std::vector<std::map<std::string, std::string>> runs;
  int status = 0;
  for (const char* name : {"run1", "run2"}) {
    const fs::path out = root / name;
    const std::string cmd = "\"" + tlab + "\" suite --battery \"" + (fs::path(TLAB_SCENARIO_DIR) / "battery").string() +
                            "\" --seed 1 --out \"" + out.string() + "\" > \"" + (root / name).string() + ".log\" 2>&1";
    fs::create_directories(root);
    status |= std::system(cmd.c_str());
    runs.push_back(csv_outputs(out));
  }
  const bool pass = status == 0 && !runs[0].empty() && runs[0] == runs[1];
  verdict(10, pass, "two full-suite runs give byte-identical CSV outputs",
          std::to_string(runs[0].size()) + " CSV files compared, suite status " + std::to_string(status));
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: tlab_acceptance <tlab-executable>\n";
    return 2;
  }
  try {
    const auto fixture = nlohmann::json::parse(slurp(fs::path(TLAB_FIXTURE_DIR) / "oracle_values.json"));
    const EstimatorConfig config;
    const double thr = positivity_threshold(config.schedule, config.tol);
    const auto all = run_battery(config);

    criterion1(all, fixture["two_lines_itrhat"]);
    criterion2(all);
    criterion3(all, thr);
    criterion4(fixture["two_lines_ap"]);
    criterion5(all, thr);
    criterion6(all, fixture["tangential"]);
    criterion7(all);
    criterion8(all, thr);
    criterion9(all);
    criterion10(argv[1]);
  } catch (const std::exception& e) {
    std::cerr << "acceptance aborted: " << e.what() << '\n';
    return 1;
  }
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
