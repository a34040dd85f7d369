#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "vortexmf/blowup.hpp"
#include "vortexmf/measure.hpp"
#include "vortexmf/minimizer.hpp"
#include "vortexmf/torus.hpp"

namespace vortexmf::io {

/// Malformed input; `line` is 1-based, 0 when not tied to a line.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, int line)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// %.17g, enough to round-trip any double.
std::string format_double(double x);

/// Measure file: one "alpha weight" pair per line, '#' starts a comment.
/// Weights follow CirculationMeasure::from_atoms rules.
CirculationMeasure read_measure(std::istream& in);
CirculationMeasure load_measure(const std::string& path);

/// Field CSV: header "# torus L=<L> n=<n>", further '#' lines ignored on
/// read, then n rows of n comma-separated values (row-major).
void write_field_csv(std::ostream& out, const SpectralTorus& torus, const Field& f,
                     std::optional<std::uint64_t> seed = std::nullopt);

struct LoadedField {
  double side_length;
  Field field;
};
LoadedField read_field_csv(std::istream& in);

/// Columns: iter, J, residual_norm, step, max_v.
void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& trace, std::uint64_t seed);

/// Columns: r, dw, fit_prediction (empty when no fit).
void write_profile_csv(std::ostream& out, const BlowupProfile& profile, const std::optional<LiFit>& fit,
                       std::uint64_t seed);

}  // namespace vortexmf::io
