#include "vortexmf/minimizer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "vortexmf/kernels.hpp"

namespace vortexmf {

namespace {

constexpr double kStepMin = 1e-6;
constexpr double kStepMax = 1e3;
constexpr int kMaxBacktracks = 60;
constexpr double kEnergyRoundoff = 1e-14;

MinimizeResult finish(const Problem& prob, Field v, double j, int iters, bool converged,
                      bool blown_up, std::vector<TraceRow> trace) {
  MinimizeResult r;
  const Field g = el_residual(prob, v);
  r.residual_norm = g.max_abs();
  r.peak_point = v.argmax();
  r.peak_value = v.at(r.peak_point);
  r.v = std::move(v);
  r.energy = j;
  r.iterations = iters;
  r.lambda = prob.lambda;
  r.converged = converged;
  r.blown_up = blown_up;
  r.trace = std::move(trace);
  return r;
}

}  // namespace

void MinimizeOptions::validate() const {
  if (max_iters <= 0 || !(grad_tol > 0.0) || !(step_init > 0.0) || !(blowup_peak_threshold > 0.0)) {
    throw std::invalid_argument("minimize options: iteration count, tolerances and step must be positive");
  }
  if (!(armijo_c > 0.0 && armijo_c < 1.0)) {
    throw std::invalid_argument("minimize options: armijo_c must be in (0, 1)");
  }
}

MinimizeResult minimize(const Problem& prob, const MinimizeOptions& opts,
                        const std::optional<Field>& warm_start) {
  prob.validate();
  opts.validate();
  const SpectralTorus& t = prob.torus;

  Field v;
  if (warm_start) {
    require_zero_mean(t, *warm_start);
    v = t.project_zero_mean(*warm_start);
  } else {
    v = t.project_zero_mean(t.constant(0.0));
  }

  double j = energy(prob, v);
  Field g = el_residual(prob, v);
  double res = g.max_abs();
  double step = opts.step_init;

  std::vector<TraceRow> trace;
  auto max_v = [](const Field& f) { return kernels::omp::max_loc(f.values()).value; };
  if (opts.record_trace) trace.push_back({0, j, res, 0.0, max_v(v), 0.0});

  int iter = 0;
  bool converged = false;
  bool blown_up = false;
  while (true) {
    if (res <= opts.grad_tol) {
      converged = true;
      break;
    }
    if (max_v(v) >= opts.blowup_peak_threshold) {
      blown_up = true;
      break;
    }
    if (iter >= opts.max_iters) break;

    const double gg = t.inner(g, g);
    double trial = step;
    Field v_new;
    double j_new = 0.0;
    int failures = 0;
    while (true) {
      v_new = t.project_zero_mean(v - trial * g);
      j_new = energy(prob, v_new);
      // Near a critical point the required decrease falls below the rounding
      // error of J itself; allow that much slack.
      const double slack = kEnergyRoundoff * (1.0 + std::abs(j));
      if (std::isfinite(j_new) && j_new <= j - opts.armijo_c * trial * gg + slack) break;
      trial *= 0.5;
      if (++failures >= kMaxBacktracks) {
        throw DivergedError("minimize: line search failed " + std::to_string(kMaxBacktracks) +
                                " consecutive times at iteration " + std::to_string(iter),
                            std::move(v), iter);
      }
    }

    Field g_new = el_residual(prob, v_new);
    const Field s = v_new - v;
    const Field y = g_new - g;
    const double sy = t.inner(s, y);
    const double ss = t.inner(s, s);
    step = sy > 0.0 ? std::clamp(ss / sy, kStepMin, kStepMax) : std::clamp(2.0 * trial, kStepMin, kStepMax);

    v = std::move(v_new);
    g = std::move(g_new);
    j = j_new;
    res = g.max_abs();
    ++iter;
    if (opts.record_trace) trace.push_back({iter, j, res, trial, max_v(v), gg});
  }
  return finish(prob, std::move(v), j, iter, converged, blown_up, std::move(trace));
}

Field symmetry_breaking_bump(const SpectralTorus& torus) {
  const double width = torus.side_length() / 16.0;
  const int n = torus.grid_n();
  Field f(n);
  auto vals = f.mutable_values();
  const GridPoint center{n / 2, n / 2};
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double r = torus.periodic_distance(center, {i, j});
      vals[f.index(i, j)] = 0.5 * std::exp(-r * r / (2.0 * width * width));
    }
  }
  return torus.project_zero_mean(f);
}

Field seeded_perturbation(const SpectralTorus& torus, std::uint64_t seed, double amplitude) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coef(-amplitude, amplitude);
  constexpr int kMaxMode = 4;
  struct Mode {
    int k1, k2;
    double a, b;
  };
  std::vector<Mode> modes;
  for (int k1 = 0; k1 <= kMaxMode; ++k1) {
    for (int k2 = -kMaxMode; k2 <= kMaxMode; ++k2) {
      if (k1 == 0 && k2 <= 0) continue;
      const double a = coef(rng);
      const double b = coef(rng);
      modes.push_back({k1, k2, a, b});
    }
  }
  const double base = 2.0 * std::numbers::pi / torus.side_length();
  Field f = torus.sample([&](double x1, double x2) {
    double s = 0.0;
    for (const Mode& m : modes) {
      const double phase = base * (m.k1 * x1 + m.k2 * x2);
      s += m.a * std::cos(phase) + m.b * std::sin(phase);
    }
    return s;
  });
  return torus.project_zero_mean(f);
}

std::vector<MinimizeResult> continuation_sweep(const SpectralTorus& torus,
                                               const CirculationMeasure& measure,
                                               const std::vector<double>& lambda_schedule,
                                               const MinimizeOptions& opts) {
  opts.validate();
  if (lambda_schedule.empty()) throw std::invalid_argument("continuation_sweep: empty schedule");
  const double lbar = lambda_bar(measure).lambda_bar;
  for (std::size_t k = 0; k < lambda_schedule.size(); ++k) {
    const double lam = lambda_schedule[k];
    if (!(lam > 0.0) || !std::isfinite(lam)) {
      throw std::invalid_argument("continuation_sweep: lambda must be finite and positive");
    }
    if (k > 0 && !(lam > lambda_schedule[k - 1])) {
      throw std::invalid_argument("continuation_sweep: schedule must be strictly increasing");
    }
    if (lam > lbar + 1e-9) {
      throw std::invalid_argument("continuation_sweep: lambda " + std::to_string(lam) +
                                  " exceeds lambda_bar " + std::to_string(lbar));
    }
  }

  const Field bump = symmetry_breaking_bump(torus);
  Field start = torus.project_zero_mean(seeded_perturbation(torus, opts.seed, 1e-2) + bump);
  std::vector<MinimizeResult> out;
  for (double lam : lambda_schedule) {
    const Problem prob{torus, measure, lam};
    out.push_back(minimize(prob, opts, start));
    if (out.back().blown_up) break;
    start = torus.project_zero_mean(out.back().v + bump);
  }
  return out;
}

double ball_mass(const SpectralTorus& torus, const Field& v, GridPoint center, double radius) {
  const double logz = log_partition(torus, v, 1.0);
  const int n = torus.grid_n();
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (torus.periodic_distance(center, {i, j}) <= radius) s += std::exp(v(i, j) - logz);
    }
  }
  return torus.cell_area() * s;
}

std::optional<GridPoint> detect_concentration(const MinimizeResult& result,
                                              const SpectralTorus& torus, double peak_threshold) {
  torus.check_shape(result.v);
  const auto vals = result.v.values();
  const double vmax = kernels::omp::max_loc(vals).value;
  if (!(vmax > peak_threshold)) return std::nullopt;

  const double tol = 1e-9 * (1.0 + std::abs(vmax));
  const double radius = torus.side_length() / 8.0;
  std::optional<GridPoint> best;
  double best_mass = -1.0;
  for (std::size_t k = 0; k < vals.size(); ++k) {
    if (vals[k] < vmax - tol) continue;
    const GridPoint p = result.v.point(k);
    const double m = ball_mass(torus, result.v, p, radius);
    if (m > best_mass) {
      best_mass = m;
      best = p;
    }
  }
  if (best_mass > 0.5) return best;
  return std::nullopt;
}

}  // namespace vortexmf
