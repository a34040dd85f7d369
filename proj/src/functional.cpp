#include "vortexmf/functional.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "vortexmf/kernels.hpp"

namespace vortexmf {

namespace {

constexpr double kExpOverflowGuard = 700.0;

std::size_t row(const SpectralTorus& torus) { return static_cast<std::size_t>(torus.grid_n()); }

void check_alpha(double alpha) {
  if (!(alpha >= -1.0 && alpha <= 1.0)) {
    throw std::invalid_argument("alpha " + std::to_string(alpha) + " outside [-1, 1]");
  }
}

// Largest alpha v over the grid, used as the exponent shift.
double exponent_shift(const Field& v, double alpha) {
  if (alpha == 0.0) return 0.0;
  const auto vals = v.values();
  if (alpha > 0.0) return alpha * kernels::omp::max_loc(vals).value;
  // min v = -max(-v)
  double lo = vals[0];
  for (double x : vals) lo = std::min(lo, x);
  return alpha * lo;
}

}  // namespace

void Problem::validate() const {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw std::invalid_argument("problem: lambda must be finite and positive");
  }
}

void require_zero_mean(const SpectralTorus& torus, const Field& v) {
  torus.check_shape(v);
  if (v.zero_mean()) return;
  const double m = torus.mean(v);
  if (std::abs(m) > 1e-12 * std::max(1.0, v.max_abs())) {
    throw std::domain_error("field is not zero-mean (mean " + std::to_string(m) + ")");
  }
}

double log_partition(const SpectralTorus& torus, const Field& v, double alpha) {
  torus.check_shape(v);
  check_alpha(alpha);
  if (std::abs(alpha) * v.max_abs() <= 1.0) {
    const double s = torus.cell_area() * kernels::omp::expm1_sum(v.values(), alpha, row(torus));
    return std::log(torus.volume()) + std::log1p(s / torus.volume());
  }
  const double shift = exponent_shift(v, alpha);
  const double s = kernels::omp::exp_sum(v.values(), alpha, shift, row(torus));
  return shift + std::log(torus.cell_area() * s);
}

Field w_alpha(const Problem& prob, const Field& v, double alpha) {
  require_zero_mean(prob.torus, v);
  const double logz = log_partition(prob.torus, v, alpha);
  Field w = v;
  for (double& x : w.mutable_values()) x = alpha * x - logz;
  return w;
}

double energy(const Problem& prob, const Field& v) {
  prob.validate();
  require_zero_mean(prob.torus, v);
  double potential = 0.0;
  for (const Atom& a : prob.measure.atoms()) {
    potential += a.weight * log_partition(prob.torus, v, a.alpha);
  }
  return prob.torus.dirichlet_energy(v) - prob.lambda * potential;
}

Field el_residual(const Problem& prob, const Field& v) {
  prob.validate();
  require_zero_mean(prob.torus, v);
  const SpectralTorus& t = prob.torus;
  Field out = -1.0 * t.laplacian(v);
  auto o = out.mutable_values();
  double constant = 0.0;
  for (const Atom& a : prob.measure.atoms()) {
    if (a.alpha == 0.0) continue;
    // exp(alpha v) / int exp(alpha v) = exp(alpha v - log Z)
    const double logz = log_partition(t, v, a.alpha);
    kernels::omp::add_scaled_exp(v.values(), a.alpha, logz, -prob.lambda * a.weight * a.alpha, o);
    constant += prob.lambda * a.weight * a.alpha / t.volume();
  }
  for (double& x : o) x += constant;
  return t.project_zero_mean(out);
}

Field grad_energy(const Problem& prob, const Field& v) { return el_residual(prob, v); }

double energy_dual(const Problem& prob, const Field& v) {
  prob.validate();
  if (!prob.measure.supported_on_positive()) {
    throw std::domain_error("energy_dual: measure has atoms with alpha < 0");
  }
  require_zero_mean(prob.torus, v);
  const SpectralTorus& t = prob.torus;
  double total = 0.0;
  for (const Atom& a : prob.measure.atoms()) {
    const Field w = w_alpha(prob, v, a.alpha);
    const double w_mean = t.mean(w);
    const double w_exp_w = t.cell_area() * kernels::omp::w_exp_w_sum(w.values(), row(t));
    total += a.weight * (w_mean + w_exp_w);
  }
  return 0.5 * prob.lambda * total;
}

double dalpha_peak(const Problem& prob, const Field& v, GridPoint x_peak, double alpha, double h) {
  require_zero_mean(prob.torus, v);
  if (!(alpha - h > 0.0 && alpha + h <= 1.0)) {
    throw std::invalid_argument("dalpha_peak: need 0 < alpha - h and alpha + h <= 1");
  }
  const double vmax = kernels::omp::max_loc(v.values()).value;
  if (v.at(x_peak) != vmax) throw std::invalid_argument("dalpha_peak: x_peak is not an argmax of v");
  auto w_at_peak = [&](double a) { return a * v.at(x_peak) - log_partition(prob.torus, v, a); };
  return (w_at_peak(alpha + h) - w_at_peak(alpha - h)) / (2.0 * h);
}

double dalpha_partition(const Problem& prob, const Field& v, double alpha, double h) {
  require_zero_mean(prob.torus, v);
  if (!(alpha - h >= -1.0 && alpha + h <= 1.0)) {
    throw std::invalid_argument("dalpha_partition: alpha +- h outside [-1, 1]");
  }
  const SpectralTorus& t = prob.torus;
  auto partition = [&](double a) {
    const double shift = exponent_shift(v, a);
    const double s = kernels::omp::exp_sum(v.values(), a, shift, row(t));
    if (shift > kExpOverflowGuard) throw std::overflow_error("dalpha_partition: exp overflow");
    return std::exp(shift) * t.cell_area() * s;
  };
  return (partition(alpha + h) - partition(alpha - h)) / (2.0 * h);
}

}  // namespace vortexmf
