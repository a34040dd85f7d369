#pragma once

#include <string>
#include <vector>

#include "vortexmf/measure.hpp"
#include "vortexmf/minimizer.hpp"
#include "vortexmf/radial.hpp"
#include "vortexmf/torus.hpp"

namespace vortexmf {

/// Entire radial solution of -Delta w = lam e^w on R^2:
/// w(r) = log(8 mu^2 / (lam (1 + mu^2 r^2)^2)), total mass int lam e^w = 8 pi.
double liouville_bubble(double mu, double lam, double r);

/// mu for which the bubble peaks at `peak`: 8 mu^2 / lam = e^peak.
double bubble_mu_for_peak(double lam, double peak);

struct ProfileSample {
  double r;
  double dw;  // w(r) - w(0), radially averaged
};

/// Radial profile of a normalized field around its peak, in the blowup
/// length scale sigma = exp(-w_1(0) / 2).
struct BlowupProfile {
  double sigma;
  double peak_value;  // w_1 at the peak
  double alpha;
  std::vector<ProfileSample> samples;  // ascending r
  double fitted_slope;                 // NaN until fit_li_slope runs
  double gamma0_reference;             // 4 / int beta dP
};

/// Builds w_alpha from result.v and averages it over n_bins shells around
/// result.peak_point (minimum-image distance). sigma comes from w_1.
/// n_bins <= 0 selects grid_n / 2 shells of one cell each.
BlowupProfile rescale_profile(const MinimizeResult& result, const SpectralTorus& torus,
                              const CirculationMeasure& measure, double alpha, int n_bins = 0);

/// Profile sampled directly from a radial w_1 (for instance a bubble) at
/// the given radii: dw = alpha (w_1(r) - w_1(0)).
BlowupProfile profile_from_radial(const RadialFn& w1, double alpha, const std::vector<double>& radii,
                                  double gamma0_reference);

struct LiFit {
  double slope;
  double intercept;
  std::size_t samples;
};

/// Least-squares fit dw ~ intercept + slope * (-log(1 + r / sigma)) over
/// samples with r / sigma in [lo_sigma, hi_sigma]. Needs at least 8 samples.
LiFit fit_li_slope(const BlowupProfile& profile, double lo_sigma, double hi_sigma);

/// Same fit, storing the slope in profile.fitted_slope.
double fit_li_slope_into(BlowupProfile& profile, double lo_sigma, double hi_sigma);

/// Default torus fitting window [3 sigma, min(30 sigma, L/4)] in units of sigma.
std::pair<double, double> default_li_window(const BlowupProfile& profile, const SpectralTorus& torus);

/// gamma = (1/2pi) int_{R^2} f = int_0^inf f(r) r dr, with the tail beyond
/// r_max estimated from the local power-law decay. Throws
/// std::runtime_error when f r^2 does not decrease over the last decade.
double mass_gamma(const RadialFn& f, double r_max);

struct PohozaevReport {
  double lhs;
  double rhs;
  double relative_residual;  // |lhs - rhs| / (1 + |lhs| + |rhs|)
};

/// Radial data for the balance law: u solves -Delta u = A F'(u) in B_R.
/// Missing derivatives are taken by Richardson-extrapolated central differences.
struct PohozaevInput {
  RadialFn u;
  RadialFn du;  // optional u_r
  RadialFn A;
  RadialFn dA;  // optional A_r
  std::function<double(double)> F;
};

/// lhs = R int_{dB_R} (|grad u|^2 / 2 - u_r^2) ds,
/// rhs = R int_{dB_R} A F(u) ds - int_{B_R} (2 A F(u) + F(u) x . grad A) dx.
PohozaevReport pohozaev_residual(const PohozaevInput& in, double R);

/// z(|x|) = (1/2pi) int f(y) log(|x - y| / (1 + |y|)) dy for radial f, using
/// the angular mean of log|x - y| = log max(|x|, |y|). `breakpoints` marks
/// discontinuities of f. Throws std::runtime_error if the tail of f is not
/// integrable.
double newton_potential(const RadialFn& f, double x_abs, const std::vector<double>& breakpoints = {});

/// Least-squares slope of z(R) against log R on `points` log-spaced radii in [r_lo, r_hi].
double newton_potential_slope(const RadialFn& f, double r_lo, double r_hi, int points = 21,
                              const std::vector<double>& breakpoints = {});

struct ConsistencyReport {
  double alpha_min;
  double moment1;
  double lambda_bar;
  double lambda_bar_residual_vanishing;
  bool alpha_min_above_half;          // (a)
  bool lambda_bar_matches_formula;    // (b) within 1e-9 relative
  bool alpha_min_above_half_moment;   // (c)
  bool implication_a_b;
  bool implication_a_c;
};

/// Requires support in [0, 1].
ConsistencyReport consistency_report(const CirculationMeasure& measure);

}  // namespace vortexmf
