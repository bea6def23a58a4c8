#ifndef TLAB_REPORT_IO_HPP
#define TLAB_REPORT_IO_HPP

#include "tlab/altproj.hpp"
#include "tlab/estimators.hpp"
#include "tlab/verify.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace tlab {

/// Reals are written with 17 significant digits, so outputs are
/// byte-identical across reruns with the same inputs.
std::string format_real(double value);

/// Columns: name, rho, value, samples, seed, no_witness.
std::string estimates_csv(const std::vector<const ConstantEstimate*>& estimates);
std::string estimates_json(const PairScenario& pair, const ScenarioEstimates& est, const EstimatorConfig& config);

/// Columns: cycle, half_step, x1..xn, dist_a, dist_b, dist_inter.
std::string trace_csv(const APTrace& trace);
std::string termination_json(const APTrace& trace, const std::optional<StallPair>& stall,
                             const std::optional<RateFit>& rate);

std::string verification_json(const VerificationReport& report);
/// Fixed-width table for terminals.
std::string verification_table(const VerificationReport& report);

/// Writes through a temporary file in the same directory and renames it.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace tlab

#endif  // TLAB_REPORT_IO_HPP
