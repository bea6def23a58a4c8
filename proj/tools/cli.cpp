#include "cli.hpp"

#include "tlab/altproj.hpp"
#include "tlab/report_io.hpp"
#include "tlab/scenario.hpp"
#include "tlab/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <ctime>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace tlab::cli {

namespace fs = std::filesystem;

namespace {

int report_error(const std::exception& e, int code) {
  std::cerr << "tlab: " << e.what() << '\n';
  return code;
}

template <class F>
int guarded(F&& body) {
  try {
    return body();
  } catch (const Error& e) {
    return report_error(e, e.kind() == ErrorKind::ParseError ? kInputError : kRuntimeError);
  } catch (const fs::filesystem_error& e) {
    return report_error(e, kRuntimeError);
  } catch (const std::exception& e) {
    return report_error(e, kRuntimeError);
  }
}

PairScenario load(const RunConfig& config) {
  PairScenario pair = load_scenario(config.scenario_path);
  if (config.seed) pair.seed = *config.seed;
  return pair;
}

void prepare_out(const fs::path& dir) { fs::create_directories(dir); }

void write_metadata(const RunConfig& config, std::chrono::steady_clock::time_point start) {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::ostringstream stamp;
  stamp << std::put_time(std::gmtime(&now), "%Y-%m-%dT%H:%M:%SZ");
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  nlohmann::json meta{{"command", config.command},
                      {"scenario", config.scenario_path.string()},
                      {"finished_utc", stamp.str()},
                      {"elapsed_seconds", secs}};
  write_file_atomic(config.out_dir / "run_metadata.json", meta.dump(2) + "\n");
}

void print_estimates(const std::string& label, const ScenarioEstimates& est) {
  std::cout << "scenario " << label << '\n';
  for (const auto* e : est.all()) {
    std::cout << "  " << std::left << std::setw(8) << e->name << std::right << std::setw(14) << std::setprecision(6)
              << e->value << "  samples " << e->per_radius.back().samples;
    if (e->no_witness) std::cout << "  [no witness]";
    if (e->degenerate) std::cout << "  [degenerate]";
    if (e->skipped) std::cout << "  [skipped " << e->skipped << "]";
    std::cout << '\n';
  }
}

void write_estimates(const fs::path& dir, const PairScenario& pair, const ScenarioEstimates& est,
                     const EstimatorConfig& config) {
  write_file_atomic(dir / "constants.csv", estimates_csv(est.all()));
  write_file_atomic(dir / "report.json", estimates_json(pair, est, config));
}

void write_trace(const fs::path& dir, const APTrace& trace, const std::optional<RateFit>& rate) {
  write_file_atomic(dir / "trace.csv", trace_csv(trace));
  write_file_atomic(dir / "termination.json", termination_json(trace, detect_stall(trace, 1e-10), rate));
}

std::optional<RateFit> try_fit(const APTrace& trace, int window) {
  const int w = std::min(window, trace.cycles - 2);
  if (trace.reason == Termination::Stalled || w < 2) return std::nullopt;
  try {
    return fit_linear_rate(trace, w);
  } catch (const Error&) {
    return std::nullopt;
  }
}

}  // namespace

int cmd_estimate(const RunConfig& config) {
  return guarded([&] {
    const auto start = std::chrono::steady_clock::now();
    const PairScenario pair = load(config);
    prepare_out(config.out_dir);
    const auto est = estimate_all(pair, config.estimator);
    write_estimates(config.out_dir, pair, est, config.estimator);
    print_estimates(pair.label, est);
    write_metadata(config, start);
    return int{kOk};
  });
}

int cmd_altproj(const RunConfig& config) {
  return guarded([&] {
    const auto start = std::chrono::steady_clock::now();
    const PairScenario pair = load(config);
    Vector x0;
    if (!config.x0.empty()) {
      try {
        x0 = parse_vector(config.x0);
      } catch (const Error& e) {
        throw Error(ErrorKind::ParseError, e.what());
      }
    } else if (pair.ap_start) {
      x0 = pair.ap_start->x0;
    } else {
      throw Error(ErrorKind::ParseError, "no --x0 given and the scenario has no ap_start");
    }
    if (x0.size() != pair.dimension()) throw Error(ErrorKind::ParseError, "--x0 has the wrong dimension");
    const int max_cycles = config.max_cycles.value_or(pair.ap_start ? pair.ap_start->max_cycles : 200);
    const double tol = config.tol.value_or(pair.ap_start ? pair.ap_start->tol : 1e-10);
    prepare_out(config.out_dir);

    const APTrace trace = run_alternating_projections(pair, x0, max_cycles, tol);
    std::optional<RateFit> rate;
    if (config.fit_rate) {
      const int w = std::min(config.window, trace.cycles - 2);
      if (trace.reason == Termination::Stalled) {
        write_trace(config.out_dir, trace, std::nullopt);
        throw Error(ErrorKind::NoDecay, "rate requested for a stalled trace");
      }
      rate = fit_linear_rate(trace, std::max(w, 2));
    } else {
      rate = try_fit(trace, config.window);
    }
    write_trace(config.out_dir, trace, rate);

    std::cout << "termination " << to_string(trace.reason) << " after " << trace.cycles << " cycles, d(x, A n B) = "
              << format_real(trace.dist_inter.back()) << '\n';
    if (const auto stall = detect_stall(trace, tol)) {
      std::cout << "stationary pair p = (" << stall->p.transpose() << "), q = (" << stall->q.transpose()
                << "), gap " << format_real(stall->gap) << '\n';
    }
    if (rate) {
      std::cout << "rate per cycle " << format_real(rate->rate_c) << ", per half-step "
                << format_real(rate->half_step_rate()) << ", R^2 " << format_real(rate->quality) << '\n';
    }
    write_metadata(config, start);
    return int{kOk};
  });
}

int cmd_verify(const RunConfig& config) {
  return guarded([&] {
    const auto start = std::chrono::steady_clock::now();
    const PairScenario pair = load(config);
    prepare_out(config.out_dir);
    const auto result = verify_scenario(pair, config.estimator);
    if (!result.estimates.str.per_radius.empty()) {
      write_estimates(config.out_dir, pair, result.estimates, config.estimator);
    }
    if (result.trace) write_trace(config.out_dir, *result.trace, try_fit(*result.trace, config.window));
    write_file_atomic(config.out_dir / "verification.json", verification_json(result.report));
    std::cout << verification_table(result.report);
    write_metadata(config, start);
    return int{result.report.overall ? kOk : kVerificationFailed};
  });
}

int cmd_suite(const RunConfig& config) {
  return guarded([&] {
    const auto start = std::chrono::steady_clock::now();
    const auto files = list_battery(config.scenario_path);
    if (files.empty()) {
      std::cerr << "tlab: no scenario files in '" << config.scenario_path.string() << "'\n";
      return int{kInputError};
    }
    std::vector<PairScenario> battery;
    for (const auto& f : files) {
      RunConfig one = config;
      one.scenario_path = f;
      battery.push_back(load(one));
    }
    prepare_out(config.out_dir);

    const double thr = positivity_threshold(config.estimator.schedule, config.estimator.tol);
    VerificationReport aggregate;
    aggregate.label = "battery";
    std::vector<EquivalenceCase> cases;
    std::ostringstream summary;
    summary << "scenario,convex,str,tr,itr,strc,itrhat1,itrhat2,checks,failed,pass\n";
    nlohmann::json scenarios = nlohmann::json::array();

    for (std::size_t i = 0; i < battery.size(); ++i) {
      const auto& pair = battery[i];
      const fs::path dir = config.out_dir / files[i].stem();
      fs::create_directories(dir);
      const auto result = verify_scenario(pair, config.estimator);
      const auto& est = result.estimates;
      const bool estimated = !est.str.per_radius.empty();
      if (estimated) write_estimates(dir, pair, est, config.estimator);
      if (result.trace) write_trace(dir, *result.trace, try_fit(*result.trace, config.window));
      write_file_atomic(dir / "verification.json", verification_json(result.report));
      std::cout << verification_table(result.report);

      for (const auto& c : result.report.checks) {
        Check tagged = c;
        tagged.id = pair.label + "/" + c.id;
        aggregate.add(tagged);
      }
      if (estimated && pair.is_convex()) {
        cases.push_back({pair.label, true, est.str.value, est.itr.value, est.strc.value});
      }
      const auto failed = result.report.failures().size();
      summary << pair.label << ',' << (pair.is_convex() ? 1 : 0);
      for (const auto* e : {&est.str, &est.tr, &est.itr, &est.strc, &est.itrhat1, &est.itrhat2}) {
        summary << ',' << (estimated ? format_real(e->value) : std::string("nan"));
      }
      summary << ',' << result.report.checks.size() << ',' << failed << ',' << (result.report.overall ? 1 : 0) << '\n';
      scenarios.push_back({{"label", pair.label},
                           {"file", files[i].filename().string()},
                           {"pass", result.report.overall},
                           {"failed_checks", failed}});
    }

    VerificationReport battery_checks = check_convex_equivalence(cases, thr);
    battery_checks.label = "convex equivalence";
    battery_checks.merge(lemma_property_suite(config.seed.value_or(1), 10000));
    std::cout << verification_table(battery_checks);
    aggregate.merge(battery_checks);

    write_file_atomic(config.out_dir / "summary.csv", summary.str());
    write_file_atomic(config.out_dir / "battery_checks.json", verification_json(battery_checks));
    nlohmann::json doc{{"overall", aggregate.overall},
                       {"checks", aggregate.checks.size()},
                       {"failed", aggregate.failures().size()},
                       {"positivity_threshold", thr},
                       {"scenarios", scenarios}};
    write_file_atomic(config.out_dir / "summary.json", doc.dump(2) + "\n");
    write_metadata(config, start);

    std::cout << "battery: " << aggregate.checks.size() << " checks, " << aggregate.failures().size()
              << " failed -> " << (aggregate.overall ? "PASS" : "FAIL") << '\n';
    for (const auto* c : aggregate.failures()) std::cout << "  failed: " << c->id << '\n';
    return int{aggregate.overall ? kOk : kVerificationFailed};
  });
}

int run(int argc, char** argv) {
  CLI::App app{"Transversality constants of set pairs and alternating projections"};
  app.require_subcommand(1);
  RunConfig config;
  std::uint64_t seed = 0;

  auto add_common = [&](CLI::App* sub, bool estimator_flags, const std::string& scenario_names = "--scenario") {
    sub->add_option(scenario_names, config.scenario_path, "Scenario JSON file (suite: battery directory)")->required();
    sub->add_option("--out", config.out_dir, "Output directory");
    sub->add_option("--seed", seed, "Root seed overriding the scenario seed");
    sub->add_option("--window", config.window, "Trailing cycles used for the rate fit")->check(CLI::Range(2, 100000));
    if (estimator_flags) {
      auto& s = config.estimator.schedule;
      sub->add_option("--rho0", s.rho0, "Initial radius")->check(CLI::PositiveNumber);
      sub->add_option("--gamma", s.factor, "Radius reduction factor in (0,1)");
      sub->add_option("--steps", s.steps, "Number of radii")->check(CLI::Range(2, 64));
      sub->add_option("--samples", config.estimator.samples, "Candidates per radius")->check(CLI::Range(1, 1000000));
    }
  };

  auto* estimate = app.add_subcommand("estimate", "Estimate every constant of a scenario");
  add_common(estimate, true);
  auto* altproj = app.add_subcommand("altproj", "Run alternating projections");
  add_common(altproj, false);
  altproj->add_option("--x0", config.x0, "Start point \"v1,v2,...\"");
  altproj->add_option("--max-cycles", config.max_cycles, "Cycle budget")->check(CLI::Range(1, 100000000));
  altproj->add_option("--tol", config.tol, "Convergence tolerance")->check(CLI::PositiveNumber);
  altproj->add_flag("--fit-rate", config.fit_rate, "Fail when no linear rate can be fitted");
  auto* verify = app.add_subcommand("verify", "Verify identities and chains for one scenario");
  add_common(verify, true);
  auto* suite = app.add_subcommand("suite", "Verify every scenario of a battery directory");
  add_common(suite, true, "--scenario,--battery");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }
  for (auto* sub : {estimate, altproj, verify, suite}) {
    if (sub->parsed()) {
      config.command = sub->get_name();
      if (sub->count("--seed")) config.seed = seed;
    }
  }
  try {
    config.estimator.validate();
  } catch (const Error& e) {
    return report_error(e, kInputError);
  }
  if (config.command == "estimate") return cmd_estimate(config);
  if (config.command == "altproj") return cmd_altproj(config);
  if (config.command == "verify") return cmd_verify(config);
  return cmd_suite(config);
}

}  // namespace tlab::cli
