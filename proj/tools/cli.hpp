#ifndef TLAB_TOOLS_CLI_HPP
#define TLAB_TOOLS_CLI_HPP

#include "tlab/estimators.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

namespace tlab::cli {

enum ExitCode : int { kOk = 0, kVerificationFailed = 1, kInputError = 2, kRuntimeError = 3 };

struct RunConfig {
  std::string command;
  std::filesystem::path scenario_path;
  std::filesystem::path out_dir = ".";
  std::optional<std::uint64_t> seed;
  EstimatorConfig estimator;
  std::string x0;
  std::optional<int> max_cycles;
  std::optional<double> tol;
  bool fit_rate = false;
  int window = 8;
};

int cmd_estimate(const RunConfig& config);
int cmd_altproj(const RunConfig& config);
int cmd_verify(const RunConfig& config);
int cmd_suite(const RunConfig& config);

/// Parses arguments and dispatches; returns the process exit status.
int run(int argc, char** argv);

}  // namespace tlab::cli

#endif  // TLAB_TOOLS_CLI_HPP
