#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vortexmf/measure.hpp"
#include "vortexmf/minimizer.hpp"

namespace vortexmf::cli {

/// Exit codes shared by every subcommand.
enum ExitCode : int {
  kOk = 0,
  kFailed = 1,   // a check failed or the computation did not succeed
  kInvalid = 2,  // bad input, bad configuration or refused request
};

/// Experiment settings, read from a key=value file and command-line
/// overrides. Keys are listed in the README.
struct RunConfig {
  std::optional<std::string> measure_path;
  std::vector<Atom> atoms;  // inline alternative to measure_path
  double side_length = 1.0;
  int grid_n = 128;
  std::optional<double> lambda;
  std::optional<double> lambda_fraction;
  std::vector<double> schedule;
  bool schedule_is_fraction = true;
  MinimizeOptions minimize;
  std::optional<std::string> out_dir;  // files go to "out" when unset
  std::uint64_t seed = 0;
  double alpha = 1.0;
  int n_bins = 0;
  std::optional<double> fit_lo;
  std::optional<double> fit_hi;
  std::optional<std::string> field_path;
  bool json = false;
  double mu_mismatch = 1.0;  // verify: scales mu in the bubble denominator

  /// Applies one key=value setting. Throws std::invalid_argument on unknown
  /// keys or bad values.
  void set(std::string_view key, std::string_view value);

  /// Checks cross-field invariants (grid power of two, fractions in (0, 1]).
  void validate() const;

  CirculationMeasure measure() const;
};

/// Parses key=value lines; '#' starts a comment. Errors name the line.
RunConfig parse_config(std::string_view text, RunConfig base = {});

/// Entry point of the `vortexmf` tool: `vortexmf <subcommand> [flags]`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace vortexmf::cli
