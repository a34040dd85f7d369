#include "vortexmf/radial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace vortexmf {

double romberg(const RadialFn& g, double a, double b, double rel_tol) {
  constexpr int kMinLevel = 6;
  constexpr int kMaxLevel = 24;
  if (a == b) return 0.0;
  std::vector<double> prev;
  std::vector<double> cur;
  double h = b - a;
  double trap = 0.5 * h * (g(a) + g(b));
  prev.push_back(trap);
  for (int level = 1; level <= kMaxLevel; ++level) {
    const long long added = 1LL << (level - 1);
    h *= 0.5;
    double s = 0.0;
    for (long long k = 0; k < added; ++k) s += g(a + (2 * k + 1) * h);
    trap = 0.5 * trap + h * s;
    cur.assign(1, trap);
    double factor = 1.0;
    for (std::size_t m = 1; m <= prev.size(); ++m) {
      factor *= 4.0;
      cur.push_back(cur[m - 1] + (cur[m - 1] - prev[m - 1]) / (factor - 1.0));
    }
    const double best = cur.back();
    const double last = prev.back();
    if (level >= kMinLevel && std::abs(best - last) <= rel_tol * std::max(std::abs(best), 1e-300)) {
      return best;
    }
    if (level >= kMinLevel && best == 0.0 && last == 0.0) return 0.0;
    // Keep the tableau short: deep Richardson columns amplify noise.
    if (cur.size() > 8) cur.erase(cur.begin() + 8, cur.end());
    prev.swap(cur);
  }
  throw std::runtime_error("romberg: quadrature did not converge");
}

double radial_integral(const RadialFn& g, double a, double b, const std::vector<double>& breakpoints,
                       double rel_tol) {
  if (!(a >= 0.0) || !(b > a)) throw std::invalid_argument("radial_integral: need 0 <= a < b");
  std::vector<double> cuts{a, b};
  if (a < 1.0 && b > 1.0) cuts.push_back(1.0);
  for (double p : breakpoints) {
    if (p > a && p < b) cuts.push_back(p);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  double total = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double lo = cuts[k];
    const double hi = cuts[k + 1];
    // Endpoints are sampled one ulp inside so a jump at a breakpoint is
    // attributed to the piece it belongs to.
    const double lo_in = std::nextafter(lo, hi);
    const double hi_in = std::nextafter(hi, lo);
    auto inner = [&](double r) { return g(std::clamp(r, lo_in, hi_in)); };
    if (lo > 0.0 && hi / lo > 100.0) {
      // r = e^s, dr = r ds
      total += romberg([&](double s) {
        const double r = std::exp(s);
        return inner(r) * r;
      }, std::log(lo), std::log(hi), rel_tol);
    } else {
      total += romberg(inner, lo, hi, rel_tol);
    }
  }
  return total;
}

double decay_exponent(const RadialFn& f, double r) {
  const double outer = f(r);
  if (outer == 0.0) return std::numeric_limits<double>::infinity();
  const double inner = f(r / 10.0);
  if (!(inner > 0.0) || !(outer > 0.0)) return 0.0;
  return std::log10(inner / outer);
}

}  // namespace vortexmf
