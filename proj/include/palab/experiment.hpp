#pragma once

// Batch experiments with CSV or JSON reports. Runs are single-threaded and
// every trial draws from trial_rng(seed, index), so a fixed configuration
// reproduces its report byte for byte.

#include "palab/error.hpp"

#include <json.hpp>

#include <cstdint>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

namespace palab {

enum class Experiment { rates, distill_sweep, equivalence, coding_bound, checker_fuzz, uncertainty_fuzz };
enum class Format { csv, json };

std::string_view to_string(Experiment e);
Experiment experiment_from_string(std::string_view s);

struct ExperimentConfig {
  Experiment experiment = Experiment::rates;
  unsigned n = 3;  // block length; the sweep experiments run 2..n
  double theta = std::numbers::pi / 4;
  double delta = 0.1;
  double epsilon = 0.1;
  double margin = 0.15;  // extra announced bits beyond n (1 - chi)
  std::uint64_t seed = 1;
  unsigned trials = 20;
  std::string out_path;  // empty: caller prints the text
  Format format = Format::csv;

  /// Throws UsageError.
  void validate() const;
};

/// Keys as on the command line: experiment, n, theta, delta, epsilon, margin,
/// seed, trials, out, format. Unknown keys are usage errors.
void apply_setting(ExperimentConfig& c, std::string_view key, std::string_view value);
void apply_json(ExperimentConfig& c, const nlohmann::json& j);

struct Report {
  std::string text;
  bool passed = true;
  std::vector<std::string> failures;  // one compact JSON record each
  bool wrote_file = false;

  int exit_code() const noexcept { return passed ? 0 : 1; }
};

/// Throws UsageError on a bad configuration and ResourceError when a state
/// would exceed the dimension cap.
Report run(const ExperimentConfig& config);

/// Exit status for an error escaping run(): usage 2, resource 3, other 1.
int exit_code_for(ErrorCode code) noexcept;

/// Column documentation for --help.
std::string experiment_help();

}  // namespace palab
