#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "support.hpp"
#include "vortexmf/minimizer.hpp"

namespace vortexmf {
namespace {

constexpr double kPi = std::numbers::pi;

MinimizeOptions fast_options() {
  MinimizeOptions o;
  o.max_iters = 5000;
  o.grad_tol = 1e-8;
  return o;
}

TEST(Minimizer, OptionsValidation) {
  MinimizeOptions o;
  o.armijo_c = 1.5;
  EXPECT_THROW(o.validate(), std::invalid_argument);
  o = MinimizeOptions{};
  o.grad_tol = 0.0;
  EXPECT_THROW(o.validate(), std::invalid_argument);
}

TEST(Minimizer, ConvergesToZeroBelowFirstEigenvalue) {
  // lambda < 4 pi^2: v = 0 is the strict minimizer on the unit torus.
  const Problem p{SpectralTorus(1.0, 32), CirculationMeasure::from_atoms({{1.0, 1.0}}), 0.5 * 8.0 * kPi};
  std::mt19937_64 rng(1);
  const Field start = testing::random_field(p.torus, rng, 0.3);
  const MinimizeResult r = minimize(p, fast_options(), start);
  EXPECT_TRUE(r.converged);
  EXPECT_FALSE(r.blown_up);
  EXPECT_LE(r.residual_norm, 1e-8);
  EXPECT_LT(r.v.max_abs(), 1e-8);
  EXPECT_NEAR(r.energy, 0.0, 1e-12);
}

TEST(Minimizer, TraceEnergyIsNonIncreasing) {
  const Problem p{SpectralTorus(1.0, 32), CirculationMeasure::from_atoms({{0.6, 0.5}, {1.0, 0.5}}), 20.0};
  std::mt19937_64 rng(2);
  const MinimizeResult r = minimize(p, fast_options(), testing::random_field(p.torus, rng, 0.5));
  ASSERT_GE(r.trace.size(), 2u);
  EXPECT_EQ(r.trace.front().iter, 0);
  for (std::size_t k = 1; k < r.trace.size(); ++k) {
    EXPECT_LE(r.trace[k].energy, r.trace[k - 1].energy + 1e-14 * (1.0 + std::abs(r.trace[k - 1].energy)));
  }
  EXPECT_EQ(r.trace.back().energy, r.energy);
}

TEST(Minimizer, NontrivialCriticalPointForTwoSignedMeasure) {
  // With alpha = +-1 the zero field loses stability at lambda = 4 pi^2 < 16 pi.
  const auto m = CirculationMeasure::from_atoms({{-1.0, 0.5}, {1.0, 0.5}});
  const Problem p{SpectralTorus(1.0, 32), m, 0.9 * 16.0 * kPi};
  std::mt19937_64 rng(3);
  const MinimizeResult r = minimize(p, fast_options(), testing::random_field(p.torus, rng, 0.3));
  EXPECT_TRUE(r.converged);
  EXPECT_GT(r.v.max_abs(), 0.1);
  EXPECT_LT(r.energy, 0.0);
}

TEST(Minimizer, ConvergedMinimizerSatisfiesDualIdentity) {
  const auto m = CirculationMeasure::from_atoms({{0.5, 0.3}, {1.0, 0.7}});
  const Problem p{SpectralTorus(1.0, 32), m, 0.9 * lambda_bar(m).lambda_bar};
  std::mt19937_64 rng(4);
  const MinimizeResult r = minimize(p, fast_options(), testing::random_field(p.torus, rng, 0.5));
  ASSERT_TRUE(r.converged);
  EXPECT_NEAR(energy_dual(p, r.v), r.energy, 1e-5 * (1.0 + std::abs(r.energy)));
}

TEST(Minimizer, BlowsUpAboveThreshold) {
  // lambda = 16 pi > 4 pi^2 for P = delta_1: J is unbounded below.
  const Problem p{SpectralTorus(1.0, 32), CirculationMeasure::from_atoms({{1.0, 1.0}}), 16.0 * kPi};
  MinimizeOptions o = fast_options();
  o.blowup_peak_threshold = 15.0;
  const MinimizeResult r = minimize(p, o, symmetry_breaking_bump(p.torus));
  EXPECT_TRUE(r.blown_up);
  EXPECT_FALSE(r.converged);
  EXPECT_GE(r.peak_value, 15.0);
}

TEST(Minimizer, RespectsIterationCap) {
  const Problem p{SpectralTorus(1.0, 32), CirculationMeasure::from_atoms({{1.0, 1.0}}), 10.0};
  MinimizeOptions o = fast_options();
  o.max_iters = 3;
  std::mt19937_64 rng(5);
  const MinimizeResult r = minimize(p, o, testing::random_field(p.torus, rng, 1.0));
  EXPECT_EQ(r.iterations, 3);
  EXPECT_FALSE(r.converged);
  EXPECT_EQ(r.trace.size(), 4u);
}

TEST(Minimizer, RejectsNonZeroMeanStart) {
  const Problem p{SpectralTorus(1.0, 16), CirculationMeasure::from_atoms({{1.0, 1.0}}), 10.0};
  EXPECT_THROW(minimize(p, fast_options(), p.torus.constant(1.0)), std::domain_error);
}

TEST(Minimizer, DeterministicForFixedSeed) {
  const SpectralTorus t(1.0, 32);
  const Field a = seeded_perturbation(t, 42, 0.1);
  const Field b = seeded_perturbation(t, 42, 0.1);
  const Field c = seeded_perturbation(t, 43, 0.1);
  EXPECT_TRUE(std::equal(a.values().begin(), a.values().end(), b.values().begin()));
  EXPECT_GT((a - c).max_abs(), 1e-3);
  EXPECT_TRUE(a.zero_mean());

  const Problem p{t, CirculationMeasure::from_atoms({{1.0, 1.0}}), 12.0};
  const MinimizeResult r1 = minimize(p, fast_options(), a);
  const MinimizeResult r2 = minimize(p, fast_options(), b);
  EXPECT_EQ(r1.iterations, r2.iterations);
  EXPECT_TRUE(std::equal(r1.v.values().begin(), r1.v.values().end(), r2.v.values().begin()));
}

TEST(Minimizer, BumpIsZeroMeanAndCentered) {
  const SpectralTorus t(1.0, 32);
  const Field b = symmetry_breaking_bump(t);
  EXPECT_TRUE(b.zero_mean());
  EXPECT_EQ(b.argmax(), (GridPoint{16, 16}));
}

TEST(Sweep, RefusesBadSchedules) {
  const SpectralTorus t(1.0, 16);
  const auto m = CirculationMeasure::from_atoms({{1.0, 1.0}});
  const double lbar = 8.0 * kPi;
  EXPECT_THROW(continuation_sweep(t, m, {}, fast_options()), std::invalid_argument);
  EXPECT_THROW(continuation_sweep(t, m, {0.5 * lbar, 0.3 * lbar}, fast_options()), std::invalid_argument);
  EXPECT_THROW(continuation_sweep(t, m, {0.5 * lbar, 1.01 * lbar}, fast_options()), std::invalid_argument);
  EXPECT_THROW(continuation_sweep(t, m, {-1.0}, fast_options()), std::invalid_argument);
}

TEST(Sweep, StagesConvergeWithNonIncreasingEnergy) {
  const SpectralTorus t(1.0, 32);
  const auto m = CirculationMeasure::from_atoms({{1.0, 1.0}});
  const double lbar = lambda_bar(m).lambda_bar;
  const auto stages = continuation_sweep(t, m, {0.3 * lbar, 0.6 * lbar, 0.9 * lbar}, fast_options());
  ASSERT_EQ(stages.size(), 3u);
  for (std::size_t k = 0; k < stages.size(); ++k) {
    EXPECT_TRUE(stages[k].converged);
    EXPECT_LE(stages[k].residual_norm, 1e-7);
    if (k > 0) EXPECT_LE(stages[k].energy, stages[k - 1].energy + 1e-12);
  }
}

TEST(Concentration, NoneForSmallPeaks) {
  const Problem p{SpectralTorus(1.0, 32), CirculationMeasure::from_atoms({{1.0, 1.0}}), 10.0};
  const MinimizeResult r = minimize(p, fast_options(), symmetry_breaking_bump(p.torus));
  EXPECT_FALSE(detect_concentration(r, p.torus).has_value());
}

TEST(Concentration, FindsPlantedSpike) {
  const SpectralTorus t(1.0, 64);
  const GridPoint spike{10, 50};
  MinimizeResult r;
  r.v = t.project_zero_mean(t.sample([&](double x, double y) {
    const double dx = std::remainder(x - spike.i * t.spacing(), 1.0);
    const double dy = std::remainder(y - spike.j * t.spacing(), 1.0);
    return -2.0 * std::log(1e-4 + dx * dx + dy * dy);
  }));
  r.peak_point = r.v.argmax();
  r.peak_value = r.v.at(r.peak_point);
  EXPECT_EQ(r.peak_point, spike);
  const auto c = detect_concentration(r, t, 10.0);
  ASSERT_TRUE(c.has_value());
  EXPECT_EQ(*c, spike);
  EXPECT_GT(ball_mass(t, r.v, spike, 0.125), 0.5);
  EXPECT_FALSE(detect_concentration(r, t, 1e3).has_value());
}

TEST(Concentration, TiedPeaksResolvedByBallMass) {
  const SpectralTorus t(1.0, 32);
  MinimizeResult r;
  Field f(32, 0.0);
  f.set(5, 5, 40.0);
  f.set(20, 20, 40.0);
  r.v = t.project_zero_mean(f);
  r.peak_point = r.v.argmax();
  r.peak_value = r.v.at(r.peak_point);
  // Each spike holds half the mass; neither exceeds 1/2.
  EXPECT_FALSE(detect_concentration(r, t).has_value());
  f.set(5, 6, 39.0);
  r.v = t.project_zero_mean(f);
  r.peak_point = r.v.argmax();
  r.peak_value = r.v.at(r.peak_point);
  const auto c = detect_concentration(r, t);
  ASSERT_TRUE(c.has_value());
  EXPECT_EQ(*c, (GridPoint{5, 5}));
}

}  // namespace
}  // namespace vortexmf
