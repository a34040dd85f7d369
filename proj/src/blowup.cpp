#include "vortexmf/blowup.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "vortexmf/functional.hpp"

namespace vortexmf {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Central difference with one Richardson step, O(h^4).
double derivative(const RadialFn& f, double r) {
  const double h = 1e-3 * std::max(r, 1e-3);
  auto central = [&](double step) { return (f(r + step) - f(r - step)) / (2.0 * step); };
  return (4.0 * central(0.5 * h) - central(h)) / 3.0;
}

}  // namespace

double liouville_bubble(double mu, double lam, double r) {
  const double q = 1.0 + mu * mu * r * r;
  return std::log(8.0 * mu * mu / (lam * q * q));
}

double bubble_mu_for_peak(double lam, double peak) { return std::sqrt(lam * std::exp(peak) / 8.0); }

BlowupProfile rescale_profile(const MinimizeResult& result, const SpectralTorus& torus,
                              const CirculationMeasure& measure, double alpha, int n_bins) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("rescale_profile: alpha must be in (0, 1]");
  if (result.v.size() == 0) throw std::invalid_argument("rescale_profile: result has no field");
  require_zero_mean(torus, result.v);
  const GridPoint peak = result.peak_point;
  if (n_bins <= 0) n_bins = torus.grid_n() / 2;

  const double logz1 = log_partition(torus, result.v, 1.0);
  const double logza = log_partition(torus, result.v, alpha);
  Field w = result.v;
  for (double& x : w.mutable_values()) x = alpha * x - logza;

  BlowupProfile p;
  p.peak_value = result.v.at(peak) - logz1;
  p.sigma = std::exp(-0.5 * p.peak_value);
  p.alpha = alpha;
  p.fitted_slope = std::numeric_limits<double>::quiet_NaN();
  p.gamma0_reference = 4.0 / measure.moment(1, Side::kPositive);
  const double w_peak = w.at(peak);
  for (const RadialBin& b : torus.radial_average(w, peak, n_bins)) {
    p.samples.push_back({b.r, b.mean - w_peak});
  }
  return p;
}

BlowupProfile profile_from_radial(const RadialFn& w1, double alpha, const std::vector<double>& radii,
                                  double gamma0_reference) {
  BlowupProfile p;
  p.peak_value = w1(0.0);
  p.sigma = std::exp(-0.5 * p.peak_value);
  p.alpha = alpha;
  p.fitted_slope = std::numeric_limits<double>::quiet_NaN();
  p.gamma0_reference = gamma0_reference;
  std::vector<double> r = radii;
  std::sort(r.begin(), r.end());
  for (double x : r) p.samples.push_back({x, alpha * (w1(x) - p.peak_value)});
  return p;
}

LiFit fit_li_slope(const BlowupProfile& profile, double lo_sigma, double hi_sigma) {
  std::vector<double> xs;
  std::vector<double> ys;
  for (const ProfileSample& s : profile.samples) {
    const double t = s.r / profile.sigma;
    if (t < lo_sigma || t > hi_sigma) continue;
    xs.push_back(-std::log1p(t));
    ys.push_back(s.dw);
  }
  if (xs.size() < 8) {
    throw std::invalid_argument("fit_li_slope: window holds " + std::to_string(xs.size()) +
                                " samples, need at least 8");
  }
  const double n = static_cast<double>(xs.size());
  double xm = 0.0;
  double ym = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    xm += xs[k];
    ym += ys[k];
  }
  xm /= n;
  ym /= n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    sxy += (xs[k] - xm) * (ys[k] - ym);
    sxx += (xs[k] - xm) * (xs[k] - xm);
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_li_slope: degenerate window");
  const double slope = sxy / sxx;
  return {slope, ym - slope * xm, xs.size()};
}

double fit_li_slope_into(BlowupProfile& profile, double lo_sigma, double hi_sigma) {
  profile.fitted_slope = fit_li_slope(profile, lo_sigma, hi_sigma).slope;
  return profile.fitted_slope;
}

std::pair<double, double> default_li_window(const BlowupProfile& profile, const SpectralTorus& torus) {
  return {3.0, std::min(30.0, 0.25 * torus.side_length() / profile.sigma)};
}

double mass_gamma(const RadialFn& f, double r_max) {
  if (!(r_max > 0.0)) throw std::invalid_argument("mass_gamma: r_max must be positive");
  const double inner = radial_integral([&](double r) { return f(r) * r; }, 0.0, r_max);
  const double p = decay_exponent(f, r_max);
  if (std::isinf(p)) return inner;
  if (!(p > 2.0)) {
    throw std::runtime_error("mass_gamma: f r^2 does not decrease over the last decade; tail diverges");
  }
  return inner + f(r_max) * r_max * r_max / (p - 2.0);
}

PohozaevReport pohozaev_residual(const PohozaevInput& in, double R) {
  if (!(R > 0.0)) throw std::invalid_argument("pohozaev_residual: R must be positive");
  auto du = [&](double r) { return in.du ? in.du(r) : derivative(in.u, r); };
  auto dA = [&](double r) { return in.dA ? in.dA(r) : derivative(in.A, r); };

  const double ur = du(R);
  const double boundary = kTwoPi * R;
  // |grad u|^2 = u_r^2 for radial u
  const double lhs = R * boundary * (0.5 * ur * ur - ur * ur);

  const double f_boundary = in.A(R) * in.F(in.u(R));
  const double volume = radial_integral(
      [&](double r) {
        const double fu = in.F(in.u(r));
        const double x_grad_a = r == 0.0 ? 0.0 : r * dA(r);
        return kTwoPi * r * (2.0 * in.A(r) * fu + fu * x_grad_a);
      },
      0.0, R);
  const double rhs = R * boundary * f_boundary - volume;
  return {lhs, rhs, std::abs(lhs - rhs) / (1.0 + std::abs(lhs) + std::abs(rhs))};
}

double newton_potential(const RadialFn& f, double x_abs, const std::vector<double>& breakpoints) {
  if (!(x_abs > 0.0)) throw std::invalid_argument("newton_potential: |x| must be positive");
  const double log_x = std::log(x_abs);
  // Angular mean of log|x - y| is log max(|x|, |y|).
  const double near = radial_integral(
      [&](double s) { return f(s) * s * (log_x - std::log1p(s)); }, 0.0, x_abs, breakpoints);

  const double r_far = std::max(1e6 * x_abs, 1e8);
  const double p = decay_exponent(f, r_far);
  if (!std::isinf(p) && !(p > 2.0)) {
    throw std::runtime_error("newton_potential: f is not integrable at infinity");
  }
  const double far = radial_integral([&](double s) { return -f(s) * s * std::log1p(1.0 / s); },
                                     x_abs, r_far, breakpoints);
  // Beyond r_far the integrand is about -f(s).
  const double tail = std::isinf(p) ? 0.0 : -f(r_far) * r_far / (p - 1.0);
  return near + far + tail;
}

double newton_potential_slope(const RadialFn& f, double r_lo, double r_hi, int points,
                              const std::vector<double>& breakpoints) {
  if (points < 2 || !(r_hi > r_lo) || !(r_lo > 0.0)) {
    throw std::invalid_argument("newton_potential_slope: need 0 < r_lo < r_hi and >= 2 points");
  }
  std::vector<double> xs;
  std::vector<double> ys;
  for (int k = 0; k < points; ++k) {
    const double t = static_cast<double>(k) / (points - 1);
    const double lr = std::log(r_lo) + t * (std::log(r_hi) - std::log(r_lo));
    xs.push_back(lr);
    ys.push_back(newton_potential(f, std::exp(lr), breakpoints));
  }
  double xm = 0.0;
  double ym = 0.0;
  for (int k = 0; k < points; ++k) {
    xm += xs[k];
    ym += ys[k];
  }
  xm /= points;
  ym /= points;
  double sxy = 0.0;
  double sxx = 0.0;
  for (int k = 0; k < points; ++k) {
    sxy += (xs[k] - xm) * (ys[k] - ym);
    sxx += (xs[k] - xm) * (xs[k] - xm);
  }
  return sxy / sxx;
}

ConsistencyReport consistency_report(const CirculationMeasure& measure) {
  if (!measure.supported_on_positive()) {
    throw std::domain_error("consistency_report: measure has atoms with alpha < 0");
  }
  ConsistencyReport r{};
  r.alpha_min = measure.alpha_min();
  r.moment1 = measure.moment(1, Side::kPositive);
  r.lambda_bar = lambda_bar(measure).lambda_bar;
  r.lambda_bar_residual_vanishing = r.moment1 == 0.0 ? std::numeric_limits<double>::infinity()
                                                     : lambda_bar_residual_vanishing(measure);
  r.alpha_min_above_half = r.alpha_min > 0.5;
  r.lambda_bar_matches_formula =
      std::isfinite(r.lambda_bar) &&
      std::abs(r.lambda_bar - r.lambda_bar_residual_vanishing) <= 1e-9 * r.lambda_bar_residual_vanishing;
  r.alpha_min_above_half_moment = r.alpha_min > 0.5 * r.moment1;
  r.implication_a_b = !r.alpha_min_above_half || r.lambda_bar_matches_formula;
  r.implication_a_c = !r.alpha_min_above_half || r.alpha_min_above_half_moment;
  return r;
}

}  // namespace vortexmf
