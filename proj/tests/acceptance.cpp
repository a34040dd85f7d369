// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails. Every criterion also enforces its runtime budget.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "support.hpp"
#include "vortexmf/blowup.hpp"
#include "vortexmf/cli.hpp"
#include "vortexmf/functional.hpp"
#include "vortexmf/io.hpp"
#include "vortexmf/measure.hpp"
#include "vortexmf/minimizer.hpp"

namespace {

using namespace vortexmf;
namespace fs = std::filesystem;
constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool passed;
  std::string detail;
};

struct Criterion {
  int id;
  std::string title;
  double budget_seconds;
  std::function<Outcome()> run;
};

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

std::vector<double> geomspace(double lo, double hi, int n) {
  std::vector<double> out;
  for (int k = 0; k < n; ++k) out.push_back(lo * std::pow(hi / lo, static_cast<double>(k) / (n - 1)));
  return out;
}

Outcome ac1() {
  const double got = lambda_bar(CirculationMeasure::from_atoms({{1.0, 1.0}})).lambda_bar;
  const double err = std::abs(got - 8.0 * kPi);
  return {err <= 1e-12, "lambda_bar=" + fmt(got) + " |err|=" + fmt(err)};
}

Outcome ac2() {
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<int> size(1, 12);
  int mismatches = 0;
  const int trials = 250;
  for (int t = 0; t < trials; ++t) {
    const auto m = testing::random_measure(rng, size(rng));
    const auto a = lambda_bar(m);
    const auto b = lambda_bar_bruteforce(m);
    if (a.lambda_bar != b.lambda_bar || a.subset != b.subset || a.side != b.side) ++mismatches;
  }
  return {mismatches == 0, std::to_string(trials) + " measures, " + std::to_string(mismatches) + " mismatches"};
}

Outcome ac3() {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> size(1, 10);
  double worst = 0.0;
  int not_full = 0;
  const int trials = 60;
  for (int t = 0; t < trials; ++t) {
    const auto m = testing::random_measure(rng, size(rng), 0.5 + 1e-6, 1.0);
    double m1 = 0.0;
    for (const Atom& a : m.atoms()) m1 += a.alpha * a.weight;
    const double formula = 8.0 * kPi / (m1 * m1);
    const auto r = lambda_bar(m);
    worst = std::max(worst, std::abs(r.lambda_bar - formula) / formula);
    if (r.subset.size() != m.size()) ++not_full;
  }
  return {worst <= 1e-9 && not_full == 0,
          std::to_string(trials) + " measures, max rel err " + fmt(worst) + ", " + std::to_string(not_full) +
              " with partial subset"};
}

Outcome ac4() {
  std::mt19937_64 rng(4);
  double worst = 0.0;
  int checks = 0;
  for (int k = 0; k < 3; ++k) {
    const Problem p{SpectralTorus(1.0, 32), testing::random_measure(rng, 4), 15.0};
    const Field v = testing::random_field(p.torus, rng, 0.5);
    const Field g = grad_energy(p, v);
    for (int d = 0; d < 20; ++d) {
      const Field dir = testing::random_field(p.torus, rng, 1.0);
      const double h = 1e-5;
      const double fd = (energy(p, p.torus.project_zero_mean(v + h * dir)) -
                         energy(p, p.torus.project_zero_mean(v - h * dir))) / (2.0 * h);
      const double an = p.torus.inner(g, dir);
      worst = std::max(worst, std::abs(an - fd) / std::abs(fd));
      ++checks;
    }
  }
  return {worst <= 1e-6, std::to_string(checks) + " directions, max rel err " + fmt(worst)};
}

Outcome ac5() {
  const SpectralTorus t(1.0, 128);
  std::mt19937_64 rng(5);
  double worst = 0.0;
  for (int k = 0; k < 3; ++k) {
    const Field u = testing::random_field(t, rng, 1.0);
    worst = std::max(worst, (t.solve_poisson_zero_mean(-1.0 * t.laplacian(u)) - u).max_abs());
  }
  return {worst <= 1e-10, "max error " + fmt(worst)};
}

Outcome ac6() {
  const double lam = 8.0 * kPi;
  auto w = [&](double r) { return liouville_bubble(1.0, lam, r); };
  auto density = [&](double r) { return lam * std::exp(w(r)); };
  const double gamma = mass_gamma(density, 1e6);
  const double mass = 2.0 * kPi * gamma;
  double pde = 0.0;
  for (double r : geomspace(0.1, 100.0, 40)) {
    auto lap = [&](double h) {
      return (w(r + h) - 2.0 * w(r) + w(r - h)) / (h * h) + (w(r + h) - w(r - h)) / (2.0 * h * r);
    };
    const double h = 1e-2 * r;
    pde = std::max(pde, std::abs((4.0 * lap(0.5 * h) - lap(h)) / 3.0 + lam * std::exp(w(r))));
  }
  const double mass_err = std::abs(mass - 8.0 * kPi) / (8.0 * kPi);
  const double gamma_err = std::abs(gamma - 4.0);
  const double pohozaev_err = std::abs(kPi * gamma * gamma - 2.0 * lam) / (2.0 * lam);
  const bool ok = mass_err <= 1e-6 && pde <= 1e-6 && gamma_err <= 1e-6 && pohozaev_err <= 1e-4;
  return {ok, "mass rel err " + fmt(mass_err) + ", PDE residual " + fmt(pde) + ", |gamma-4| " + fmt(gamma_err) +
                  ", pi gamma^2 vs 16 pi rel err " + fmt(pohozaev_err)};
}

Outcome ac7() {
  // Window [1e2, 1e4] sigma: at [3, 30] sigma the core correction still
  // biases the bubble slope to about 4.44.
  const double lam = 8.0 * kPi;
  auto w = [&](double r) { return liouville_bubble(1.0, lam, r); };
  const double sigma = std::exp(-0.5 * w(0.0));
  std::vector<double> radii{0.0};
  for (double t : geomspace(10.0, 1e4, 400)) radii.push_back(t * sigma);
  const double s1 = fit_li_slope(profile_from_radial(w, 1.0, radii, 4.0), 100.0, 1e4).slope;
  const double s2 = fit_li_slope(profile_from_radial(w, 0.5, radii, 4.0), 100.0, 1e4).slope;
  const bool ok = std::abs(s1 - 4.0) <= 0.02 * 4.0 && std::abs(s2 - 2.0) <= 0.02 * 2.0;
  return {ok, "slope(alpha=1)=" + fmt(s1) + " slope(alpha=0.5)=" + fmt(s2)};
}

Outcome ac8() {
  const double lam = 8.0 * kPi;
  PohozaevInput bubble;
  bubble.u = [&](double r) { return liouville_bubble(1.0, lam, r); };
  bubble.A = [](double) { return 1.0; };
  bubble.F = [&](double u) { return lam * std::exp(u); };
  const double rb = pohozaev_residual(bubble, 10.0).relative_residual;
  PohozaevInput flat;
  flat.u = [](double) { return -1.3; };
  flat.A = [](double) { return 1.0; };
  flat.F = [&](double u) { return lam * std::exp(u); };
  const PohozaevReport rf = pohozaev_residual(flat, 10.0);
  const bool ok = rb <= 1e-3 && rf.lhs == 0.0 && rf.relative_residual <= 1e-12;
  return {ok, "bubble residual " + fmt(rb) + ", constant-field residual " + fmt(rf.relative_residual)};
}

Outcome ac9() {
  auto bubble = [](double r) { return 8.0 / ((1.0 + r * r) * (1.0 + r * r)); };
  auto disk = [](double r) { return r <= 1.0 ? 2.0 : 0.0; };
  const double sb = newton_potential_slope(bubble, 1e2, 1e4);
  const double sd = newton_potential_slope(disk, 1e2, 1e4, 21, {1.0});
  const bool ok = std::abs(sb - 4.0) <= 0.04 && std::abs(sd - 1.0) <= 0.01;
  return {ok, "bubble slope " + fmt(sb) + ", disk slope " + fmt(sd)};
}

Outcome ac10() {
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> a(0.05, 0.95);
  double worst_peak = std::numeric_limits<double>::infinity();
  double worst_partition = std::numeric_limits<double>::infinity();
  const Problem p{SpectralTorus(1.0, 32), CirculationMeasure::from_atoms({{1.0, 1.0}}), 8.0};
  for (int k = 0; k < 100; ++k) {
    const Field v = testing::random_field(p.torus, rng, 0.5 + 0.05 * k);
    const GridPoint peak = v.argmax();
    const double alpha = a(rng);
    worst_peak = std::min(worst_peak, dalpha_peak(p, v, peak, alpha));
    worst_partition = std::min(worst_partition, dalpha_partition(p, v, alpha));
  }
  const bool ok = worst_peak >= -1e-8 && worst_partition >= -1e-8;
  return {ok, "min d/dalpha w(peak) " + fmt(worst_peak) + ", min d/dalpha int e^{alpha v} " + fmt(worst_partition)};
}

Outcome ac11() {
  std::mt19937_64 rng(11);
  double worst_zero = 0.0;
  for (int k = 0; k < 20; ++k) {
    const Problem p{SpectralTorus(0.5 + 0.1 * k, 32), testing::random_measure(rng, 1 + k % 6, 0.0, 1.0),
                    1.0 + 2.0 * k};
    const Field zero = p.torus.project_zero_mean(p.torus.constant(0.0));
    worst_zero = std::max(worst_zero, std::abs(energy_dual(p, zero) - energy(p, zero)));
  }
  double worst_min = 0.0;
  int minimizers = 0;
  MinimizeOptions opts;
  opts.grad_tol = 1e-8;
  for (int k = 0; k < 4; ++k) {
    const auto m = testing::random_measure(rng, 3, 0.0, 1.0);
    const Problem p{SpectralTorus(1.0 + 0.5 * k, 32), m, 0.9 * lambda_bar(m).lambda_bar};
    const MinimizeResult r = minimize(p, opts, testing::random_field(p.torus, rng, 0.5));
    if (!r.converged || r.residual_norm > 1e-8) {
      return {false, "minimizer " + std::to_string(k) + " did not converge (residual " + fmt(r.residual_norm) + ")"};
    }
    worst_min = std::max(worst_min, std::abs(energy_dual(p, r.v) - r.energy) / (1.0 + std::abs(r.energy)));
    ++minimizers;
  }
  const bool ok = worst_zero <= 1e-9 && worst_min <= 1e-5;
  return {ok, "v=0: max |J_dual-J| " + fmt(worst_zero) + "; " + std::to_string(minimizers) +
                  " minimizers: max |J_dual-J|/(1+|J|) " + fmt(worst_min)};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

Outcome ac12() {
  const fs::path base = fs::temp_directory_path() / "vortexmf_acceptance_sweep";
  fs::remove_all(base);
  const std::vector<std::string> args{"sweep",  "--set", "atoms=1:1",     "--set", "L=1",
                                      "--set",  "n=128", "--set",         "schedule=0.3,0.6,0.9",
                                      "--seed", "1"};
  auto run_into = [&](const fs::path& dir, double& seconds) {
    auto a = args;
    a.push_back("--out");
    a.push_back(dir.string());
    std::ostringstream out;
    std::ostringstream err;
    const auto t0 = std::chrono::steady_clock::now();
    const int code = cli::run(a, out, err);
    seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return code;
  };
  double t1 = 0.0;
  double t2 = 0.0;
  if (run_into(base / "a", t1) != 0) return {false, "first sweep run failed"};
  if (run_into(base / "b", t2) != 0) return {false, "second sweep run failed"};

  const auto summary = nlohmann::json::parse(slurp(base / "a" / "summary.json"));
  const auto& stages = summary["stages"];
  bool ok = stages.size() == 3;
  double worst_res = 0.0;
  double worst_rise = -std::numeric_limits<double>::infinity();
  const Problem probe{SpectralTorus(1.0, 128), CirculationMeasure::from_atoms({{1.0, 1.0}}), 1.0};
  for (std::size_t k = 0; k < stages.size(); ++k) {
    // Residual recomputed from the written field, not taken from the report.
    std::ifstream f(base / "a" / ("stage_" + std::to_string(k) + ".csv"));
    const Field v = probe.torus.project_zero_mean(io::read_field_csv(f).field);
    const Problem p{probe.torus, probe.measure, stages[k]["lambda"].get<double>()};
    worst_res = std::max(worst_res, el_residual(p, v).max_abs());
    ok = ok && stages[k]["converged"].get<bool>();
    if (k > 0) {
      worst_rise = std::max(worst_rise, stages[k]["J"].get<double>() - stages[k - 1]["J"].get<double>());
    }
  }
  // Stage energies sit at the rounding level of J(0) = 0; 1e-12 absorbs that.
  ok = ok && worst_res <= 1e-7 && worst_rise <= 1e-12;

  bool identical = true;
  for (const auto& entry : fs::directory_iterator(base / "a")) {
    const fs::path other = base / "b" / entry.path().filename();
    identical = identical && fs::exists(other) && slurp(entry.path()) == slurp(other);
  }
  ok = ok && identical && t1 < 120.0;
  fs::remove_all(base);
  return {ok, "max residual " + fmt(worst_res) + ", max J rise " + fmt(worst_rise) + ", sweep " + fmt(t1) +
                  " s, rerun byte-identical: " + (identical ? "yes" : "no")};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "extremal constant of a unit point mass is 8 pi", 1e-3, ac1},
      {2, "tail scan equals brute-force enumeration", 10.0, ac2},
      {3, "residual-vanishing formula when alpha_min > 1/2", 5.0, ac3},
      {4, "gradient vs central finite differences", 10.0, ac4},
      {5, "Poisson round trip on 128^2", 1.0, ac5},
      {6, "Liouville bubble mass, PDE residual and concentration mass", 5.0, ac6},
      {7, "log-decay slope of the bubble profile", 5.0, ac7},
      {8, "Pohozaev balance", 5.0, ac8},
      {9, "Newton potential growth rate", 10.0, ac9},
      {10, "monotonicity in alpha", 10.0, ac10},
      {11, "dual energy representation", 60.0, ac11},
      {12, "end-to-end continuation sweep", 120.0, ac12},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    // AC12 reports two full runs; its budget applies to a single sweep.
    const bool in_budget = c.id == 12 || secs < c.budget_seconds;
    const bool passed = o.passed && in_budget;
    failures += passed ? 0 : 1;
    std::printf("AC%-2d %s  %s: %s [%.3f s, budget %g s%s]\n", c.id, passed ? "PASS" : "FAIL", c.title.c_str(),
                o.detail.c_str(), secs, c.budget_seconds, in_budget ? "" : ", OVER BUDGET");
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
