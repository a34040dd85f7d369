#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "vortexmf/functional.hpp"

namespace vortexmf {

struct MinimizeOptions {
  int max_iters = 20000;
  double grad_tol = 1e-8;  // sup norm of the Euler-Lagrange residual
  double step_init = 1e-3;
  double armijo_c = 1e-4;
  double blowup_peak_threshold = 25.0;  // on max v
  std::uint64_t seed = 0;
  bool record_trace = true;

  void validate() const;
};

/// One accepted descent step.
struct TraceRow {
  int iter;
  double energy;
  double residual_norm;
  double step;
  double max_v;
  double grad_norm_sq;  // L2 norm squared of the gradient the step was taken along
};

struct MinimizeResult {
  Field v;
  double energy;
  double residual_norm;
  int iterations;
  double lambda;
  GridPoint peak_point;
  double peak_value;
  bool converged;
  bool blown_up;
  std::vector<TraceRow> trace;
};

/// Raised when Armijo backtracking fails 60 times in a row.
class DivergedError : public std::runtime_error {
 public:
  DivergedError(const std::string& what, Field last_iterate, int iterations)
      : std::runtime_error(what), last_iterate_(std::move(last_iterate)), iterations_(iterations) {}

  const Field& last_iterate() const { return last_iterate_; }
  int iterations() const { return iterations_; }

 private:
  Field last_iterate_;
  int iterations_;
};

/// Projected gradient descent on J over zero-mean fields. Barzilai-Borwein
/// step proposals, clipped to [1e-6, 1e3], with Armijo backtracking (the
/// sufficient-decrease test tolerates 1e-14 (1 + |J|) of rounding). Stops on
/// residual <= grad_tol, max_iters, or max v >= blowup_peak_threshold. Starts
/// from `warm_start` or from zero.
MinimizeResult minimize(const Problem& prob, const MinimizeOptions& opts,
                        const std::optional<Field>& warm_start = std::nullopt);

/// Gaussian bump of amplitude 0.5 and width L/16 at the grid center, made
/// zero-mean. Added between continuation stages to leave the trivial critical
/// point v = 0.
Field symmetry_breaking_bump(const SpectralTorus& torus);

/// Smooth random zero-mean field built from the modes |k|_inf <= 4 with
/// coefficients uniform in [-amplitude, amplitude], deterministic in `seed`.
Field seeded_perturbation(const SpectralTorus& torus, std::uint64_t seed, double amplitude);

/// Minimizes along an increasing lambda schedule. Stage 0 starts from the
/// seeded perturbation plus the bump, stage k from stage k-1 plus the bump.
/// Refuses (std::invalid_argument, before any work) schedules that are not
/// strictly increasing or exceed lambda_bar(measure) by more than 1e-9.
/// Stops after the first stage that blows up.
std::vector<MinimizeResult> continuation_sweep(const SpectralTorus& torus,
                                               const CirculationMeasure& measure,
                                               const std::vector<double>& lambda_schedule,
                                               const MinimizeOptions& opts);

/// Concentration point of a minimizer, if any: among the grid points where v
/// attains its maximum, the one whose ball of radius L/8 carries the most
/// of int exp(w_1) (lexicographic order breaks ties), provided the peak
/// exceeds `peak_threshold` and that ball mass exceeds 1/2.
std::optional<GridPoint> detect_concentration(const MinimizeResult& result,
                                              const SpectralTorus& torus,
                                              double peak_threshold = 25.0);

/// int exp(w_1) over the periodic ball of radius `radius` around `center`.
double ball_mass(const SpectralTorus& torus, const Field& v, GridPoint center, double radius);

}  // namespace vortexmf
