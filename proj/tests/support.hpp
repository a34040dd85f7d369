#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "vortexmf/measure.hpp"
#include "vortexmf/torus.hpp"

namespace vortexmf::testing {

// Random atomic measure with `n` distinct alphas drawn from [lo, hi].
inline CirculationMeasure random_measure(std::mt19937_64& rng, int n, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> a(lo, hi);
  std::uniform_real_distribution<double> w(0.05, 1.0);
  std::vector<Atom> atoms;
  double total = 0.0;
  for (int k = 0; k < n; ++k) {
    atoms.push_back({a(rng), w(rng)});
    total += atoms.back().weight;
  }
  for (Atom& x : atoms) x.weight /= total;
  return CirculationMeasure::from_atoms(atoms);
}

// Smooth random zero-mean field with a handful of low modes.
inline Field random_field(const SpectralTorus& torus, std::mt19937_64& rng, double amplitude) {
  std::uniform_real_distribution<double> c(-amplitude, amplitude);
  std::vector<std::array<double, 4>> modes;
  for (int k = 0; k < 6; ++k) modes.push_back({c(rng), c(rng), c(rng), c(rng)});
  const double two_pi_over_l = 2.0 * std::numbers::pi / torus.side_length();
  return torus.project_zero_mean(torus.sample([&](double x, double y) {
    double s = 0.0;
    for (std::size_t k = 0; k < modes.size(); ++k) {
      const double k1 = static_cast<double>(k % 3) + 1.0;
      const double k2 = static_cast<double>(k / 3);
      s += modes[k][0] * std::cos(two_pi_over_l * (k1 * x + k2 * y) + modes[k][1]) +
           modes[k][2] * std::sin(two_pi_over_l * (k2 * x - k1 * y) + modes[k][3]);
    }
    return s;
  }));
}

}  // namespace vortexmf::testing
