#pragma once

#include "vortexmf/measure.hpp"
#include "vortexmf/torus.hpp"

namespace vortexmf {

/// Torus, circulation measure and interaction strength lambda.
struct Problem {
  SpectralTorus torus;
  CirculationMeasure measure;
  double lambda;

  /// Throws std::invalid_argument unless lambda is finite and positive.
  void validate() const;
};

/// log int_Omega exp(alpha v), evaluated without overflow. When |alpha v| <= 1
/// everywhere it is computed as log|Omega| + log1p(int expm1(alpha v) / |Omega|)
/// so that tiny fields keep full relative precision; otherwise with the
/// maximum of alpha v shifted out.
double log_partition(const SpectralTorus& torus, const Field& v, double alpha);

/// w = alpha v - log int exp(alpha v), so that int exp(w) = 1.
Field w_alpha(const Problem& prob, const Field& v, double alpha);

/// J(v) = 1/2 int |grad v|^2 - lambda sum_i w_i log int exp(alpha_i v).
double energy(const Problem& prob, const Field& v);

/// -Delta v - lambda sum_i w_i alpha_i (exp(alpha_i v) / int exp(alpha_i v) - 1/|Omega|),
/// certified zero-mean. Vanishes exactly at solutions of the mean field equation.
Field el_residual(const Problem& prob, const Field& v);

/// L2 gradient of J restricted to zero-mean fields. Same as el_residual.
Field grad_energy(const Problem& prob, const Field& v);

/// (lambda/2) sum_i w_i (mean(w_alpha_i) + int w_alpha_i exp(w_alpha_i)).
/// Equals J at critical points. Requires support in [0, 1].
double energy_dual(const Problem& prob, const Field& v);

/// Central difference in alpha of w_alpha(x_peak). `x_peak` must be an argmax of v.
double dalpha_peak(const Problem& prob, const Field& v, GridPoint x_peak, double alpha,
                   double h = 1e-4);

/// Central difference in alpha of int exp(alpha v).
double dalpha_partition(const Problem& prob, const Field& v, double alpha, double h = 1e-4);

/// Throws std::domain_error unless v is certified or numerically zero-mean.
void require_zero_mean(const SpectralTorus& torus, const Field& v);

}  // namespace vortexmf
