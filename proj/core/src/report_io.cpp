#include "tlab/report_io.hpp"

#include "json_writer.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace tlab {

using nlohmann::json;

std::string format_real(double value) { return detail::format_real(value); }

std::string estimates_csv(const std::vector<const ConstantEstimate*>& estimates) {
  std::ostringstream os;
  os << "name,rho,value,samples,seed,no_witness\n";
  for (const auto* e : estimates) {
    for (const auto& r : e->per_radius) {
      os << e->name << ',' << format_real(r.rho) << ',' << format_real(r.value) << ',' << r.samples << ','
         << e->seed << ',' << (e->no_witness ? 1 : 0) << '\n';
    }
  }
  return os.str();
}

namespace {

json estimate_to_json(const ConstantEstimate& e) {
  json per = json::array();
  for (const auto& r : e.per_radius) per.push_back({{"rho", r.rho}, {"value", r.value}, {"samples", r.samples}});
  return json{{"name", e.name},           {"value", e.value},         {"seed", e.seed},
              {"no_witness", e.no_witness}, {"degenerate", e.degenerate}, {"skipped", e.skipped},
              {"per_radius", per}};
}

}  // namespace

std::string estimates_json(const PairScenario& pair, const ScenarioEstimates& est, const EstimatorConfig& config) {
  json doc;
  doc["scenario"] = pair.label;
  doc["seed"] = pair.seed;
  doc["convex"] = pair.is_convex();
  doc["schedule"] = {{"rho0", config.schedule.rho0},
                     {"factor", config.schedule.factor},
                     {"steps", config.schedule.steps}};
  doc["samples"] = config.samples;
  doc["relaxation_eta0"] = config.tol.eta0;
  json constants = json::array();
  for (const auto* e : est.all()) constants.push_back(estimate_to_json(*e));
  doc["constants"] = constants;
  doc["harvest"] = {{"pairs", est.pairs.size()},
                    {"positively_independent", est.positively_independent},
                    {"itr_from_pairs", est.itr_from_pairs}};
  return detail::dump_json(doc);
}

std::string trace_csv(const APTrace& trace) {
  std::ostringstream os;
  const auto n = trace.points.empty() ? 0 : trace.points.front().size();
  os << "cycle,half_step";
  for (Eigen::Index i = 0; i < n; ++i) os << ",x" << (i + 1);
  os << ",dist_a,dist_b,dist_inter\n";
  for (std::size_t k = 0; k < trace.points.size(); ++k) {
    os << (k + 1) / 2 << ',' << k;
    for (Eigen::Index i = 0; i < n; ++i) os << ',' << format_real(trace.points[k][i]);
    os << ',' << format_real(trace.dist_a[k]) << ',' << format_real(trace.dist_b[k]) << ','
       << format_real(trace.dist_inter[k]) << '\n';
  }
  return os.str();
}

std::string termination_json(const APTrace& trace, const std::optional<StallPair>& stall,
                             const std::optional<RateFit>& rate) {
  json doc;
  doc["reason"] = std::string(to_string(trace.reason));
  doc["cycles"] = trace.cycles;
  doc["final_point"] = detail::vector_to_json(trace.points.back());
  doc["final_dist_inter"] = trace.dist_inter.back();
  if (stall) {
    doc["stall"] = {{"p", detail::vector_to_json(stall->p)},
                    {"q", detail::vector_to_json(stall->q)},
                    {"gap", stall->gap}};
  }
  if (rate) {
    doc["rate"] = {{"rate_per_cycle", rate->rate_c},
                   {"rate_per_half_step", rate->half_step_rate()},
                   {"alpha", rate->alpha_coeff},
                   {"quality", rate->quality}};
  }
  return detail::dump_json(doc);
}

std::string verification_json(const VerificationReport& report) {
  json doc;
  doc["label"] = report.label;
  doc["overall"] = report.overall;
  json checks = json::array();
  for (const auto& c : report.checks) {
    json j{{"id", c.id},   {"lhs", c.lhs},   {"rhs", c.rhs}, {"tol", c.tol},
           {"relation", std::string(to_string(c.relation))}, {"pass", c.pass}};
    if (!c.detail.empty()) j["detail"] = c.detail;
    checks.push_back(j);
  }
  doc["checks"] = checks;
  return detail::dump_json(doc);
}

std::string verification_table(const VerificationReport& report) {
  std::ostringstream os;
  os << "== " << report.label << " : " << (report.overall ? "PASS" : "FAIL") << '\n';
  char line[256];
  for (const auto& c : report.checks) {
    std::snprintf(line, sizeof line, "  %-4s %-44s %12.6g %-9s %12.6g  tol %.3g", c.pass ? "ok" : "FAIL", c.id.c_str(),
                  c.lhs, std::string(to_string(c.relation)).c_str(), c.rhs, c.tol);
    os << line;
    if (!c.detail.empty()) os << "  (" << c.detail << ')';
    os << '\n';
  }
  return os.str();
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write '" + tmp.string() + "'");
    out << content;
    if (!out) throw Error(ErrorKind::InvalidArgument, "write failed for '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace tlab
