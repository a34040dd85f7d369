#include "vortexmf/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "vortexmf/blowup.hpp"
#include "vortexmf/functional.hpp"
#include "vortexmf/io.hpp"

namespace vortexmf::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kPi = std::numbers::pi;

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(std::string_view key, std::string_view v) {
  std::string s(trim(v));
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) {
    throw std::invalid_argument("config key '" + std::string(key) + "': '" + s + "' is not a number");
  }
  return x;
}

long long to_integer(std::string_view key, std::string_view v) {
  const double x = to_double(key, v);
  if (x != std::floor(x)) {
    throw std::invalid_argument("config key '" + std::string(key) + "': expected an integer");
  }
  return static_cast<long long>(x);
}

std::vector<double> to_list(std::string_view key, std::string_view v) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= v.size()) {
    const auto comma = v.find(',', start);
    const auto tok = v.substr(start, comma == std::string_view::npos ? v.size() - start : comma - start);
    if (!trim(tok).empty()) out.push_back(to_double(key, tok));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

json nullable(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json point_json(GridPoint p) { return json::array({p.i, p.j}); }

fs::path output_dir(const RunConfig& cfg) {
  fs::path dir = cfg.out_dir.value_or("out");
  fs::create_directories(dir);
  return dir;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write '" + path.string() + "'");
  f << text;
}

void write_json(const fs::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

template <class Writer>
void write_file(const fs::path& path, Writer&& writer) {
  std::ostringstream s;
  writer(s);
  write_text(path, s.str());
}

MinimizeOptions options_of(const RunConfig& cfg) {
  MinimizeOptions o = cfg.minimize;
  o.seed = cfg.seed;
  return o;
}

double resolve_lambda(const RunConfig& cfg, double lbar) {
  if (cfg.lambda) return *cfg.lambda;
  if (cfg.lambda_fraction) return *cfg.lambda_fraction * lbar;
  throw std::invalid_argument("set either 'lambda' or 'lambda_fraction'");
}

json result_json(const MinimizeResult& r, const SpectralTorus& torus, const CirculationMeasure& measure,
                 double peak_threshold) {
  json j;
  j["lambda"] = r.lambda;
  j["J"] = r.energy;
  j["residual_norm"] = r.residual_norm;
  j["iterations"] = r.iterations;
  j["converged"] = r.converged;
  j["blown_up"] = r.blown_up;
  j["peak_point"] = point_json(r.peak_point);
  j["peak_value"] = r.peak_value;
  const auto conc = detect_concentration(r, torus, peak_threshold);
  j["concentration_point"] = conc ? point_json(*conc) : json(nullptr);
  if (measure.supported_on_positive()) {
    j["J_dual"] = energy_dual(Problem{torus, measure, r.lambda}, r.v);
  } else {
    j["J_dual"] = nullptr;
  }
  return j;
}

// Profile around the peak plus the fit over the configured or default window.
std::pair<BlowupProfile, std::optional<LiFit>> profile_with_fit(const RunConfig& cfg, const MinimizeResult& r,
                                                                const SpectralTorus& torus,
                                                                const CirculationMeasure& measure) {
  BlowupProfile p = rescale_profile(r, torus, measure, cfg.alpha, cfg.n_bins);
  auto [lo, hi] = default_li_window(p, torus);
  if (cfg.fit_lo) lo = *cfg.fit_lo;
  if (cfg.fit_hi) hi = *cfg.fit_hi;
  std::optional<LiFit> fit;
  try {
    fit = fit_li_slope(p, lo, hi);
    p.fitted_slope = fit->slope;
  } catch (const std::invalid_argument&) {
  }
  return {std::move(p), fit};
}

json profile_json(const BlowupProfile& p, const std::optional<LiFit>& fit) {
  json j;
  j["sigma"] = p.sigma;
  j["peak_value"] = p.peak_value;
  j["alpha"] = p.alpha;
  j["gamma0_reference"] = p.gamma0_reference;
  j["predicted_slope"] = p.alpha * p.gamma0_reference;
  j["fitted_slope"] = fit ? json(fit->slope) : json(nullptr);
  j["fit_samples"] = fit ? json(fit->samples) : json(0);
  return j;
}

// ------------------------------------------------------------ commands

int cmd_lambda_bar(const RunConfig& cfg, std::ostream& out) {
  const CirculationMeasure measure = cfg.measure();
  const ExtremalResult ext = lambda_bar(measure);
  json j;
  j["command"] = "lambda-bar";
  j["seed"] = cfg.seed;
  j["lambda_bar"] = nullable(ext.lambda_bar);
  j["lambda_bar_bounded"] = ext.bounded();
  j["subset"] = ext.subset;
  json alphas = json::array();
  for (std::size_t i : ext.subset) alphas.push_back(measure.atoms()[i].alpha);
  j["subset_alphas"] = alphas;
  j["side"] = ext.side == Side::kNegative ? "negative" : "positive";
  const double m1 = measure.moment(1, Side::kPositive);
  j["moment1"] = m1;
  try {
    j["alpha_min"] = measure.alpha_min();
  } catch (const std::domain_error&) {
    j["alpha_min"] = nullptr;
  }
  if (measure.supported_on_positive() && m1 != 0.0) {
    j["residual_vanishing_form"] = lambda_bar_residual_vanishing(measure);
    const ConsistencyReport c = consistency_report(measure);
    j["consistency_report"] = {
        {"alpha_min_above_half", c.alpha_min_above_half},
        {"lambda_bar_matches_formula", c.lambda_bar_matches_formula},
        {"alpha_min_above_half_moment", c.alpha_min_above_half_moment},
        {"implication_a_b", c.implication_a_b},
        {"implication_a_c", c.implication_a_c},
    };
  } else {
    j["residual_vanishing_form"] = nullptr;
    j["consistency_report"] = nullptr;
  }
  out << j.dump(2) << '\n';
  if (cfg.out_dir) write_json(output_dir(cfg) / "summary.json", j);
  return kOk;
}

int cmd_minimize(const RunConfig& cfg, std::ostream& out) {
  const CirculationMeasure measure = cfg.measure();
  const SpectralTorus torus(cfg.side_length, cfg.grid_n);
  const double lbar = lambda_bar(measure).lambda_bar;
  const Problem prob{torus, measure, resolve_lambda(cfg, lbar)};
  const MinimizeOptions opts = options_of(cfg);

  Field start;
  if (cfg.field_path) {
    std::ifstream f(*cfg.field_path);
    if (!f) throw io::ParseError("cannot open field file '" + *cfg.field_path + "'", 0);
    start = torus.project_zero_mean(io::read_field_csv(f).field);
  } else {
    start = torus.project_zero_mean(seeded_perturbation(torus, cfg.seed, 1e-2) + symmetry_breaking_bump(torus));
  }
  const fs::path dir = output_dir(cfg);
  const MinimizeResult r = minimize(prob, opts, start);

  json j = result_json(r, torus, measure, opts.blowup_peak_threshold);
  j["command"] = "minimize";
  j["seed"] = cfg.seed;
  j["lambda_bar"] = nullable(lbar);
  j["L"] = cfg.side_length;
  j["n"] = cfg.grid_n;
  write_file(dir / "stage_0.csv", [&](std::ostream& s) { io::write_field_csv(s, torus, r.v, cfg.seed); });
  write_file(dir / "trace_0.csv", [&](std::ostream& s) { io::write_trace_csv(s, r.trace, cfg.seed); });
  write_json(dir / "summary.json", j);
  if (cfg.json) {
    out << j.dump(2) << '\n';
  } else {
    out << "lambda=" << io::format_double(r.lambda) << " J=" << io::format_double(r.energy)
        << " residual=" << io::format_double(r.residual_norm) << " iterations=" << r.iterations
        << (r.converged ? " converged" : "") << (r.blown_up ? " blown_up" : "") << '\n';
  }
  return r.converged || r.blown_up ? kOk : kFailed;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const CirculationMeasure measure = cfg.measure();
  const SpectralTorus torus(cfg.side_length, cfg.grid_n);
  const double lbar = lambda_bar(measure).lambda_bar;
  if (cfg.schedule.empty()) throw std::invalid_argument("sweep: 'schedule' is empty");
  std::vector<double> lambdas;
  for (double s : cfg.schedule) lambdas.push_back(cfg.schedule_is_fraction ? s * lbar : s);
  const MinimizeOptions opts = options_of(cfg);

  std::vector<MinimizeResult> stages;
  try {
    stages = continuation_sweep(torus, measure, lambdas, opts);
  } catch (const DivergedError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    err << "sweep refused: " << e.what() << '\n';
    return kInvalid;
  }

  const fs::path dir = output_dir(cfg);
  json summary;
  summary["command"] = "sweep";
  summary["seed"] = cfg.seed;
  summary["lambda_bar"] = nullable(lbar);
  summary["L"] = cfg.side_length;
  summary["n"] = cfg.grid_n;
  summary["stages"] = json::array();

  std::ostringstream rows;
  rows << "# seed=" << cfg.seed << '\n';
  rows << "stage,lambda,lambda_fraction,J,residual_norm,iterations,max_v,converged,blown_up,"
          "concentration_i,concentration_j\n";
  bool ok = true;
  for (std::size_t k = 0; k < stages.size(); ++k) {
    const MinimizeResult& r = stages[k];
    ok = ok && (r.converged || r.blown_up);
    json sj = result_json(r, torus, measure, opts.blowup_peak_threshold);
    sj["stage"] = k;
    sj["lambda_fraction"] = nullable(r.lambda / lbar);
    const auto conc = detect_concentration(r, torus, opts.blowup_peak_threshold);
    rows << k << ',' << io::format_double(r.lambda) << ',' << io::format_double(r.lambda / lbar) << ','
         << io::format_double(r.energy) << ',' << io::format_double(r.residual_norm) << ',' << r.iterations
         << ',' << io::format_double(r.peak_value) << ',' << (r.converged ? 1 : 0) << ','
         << (r.blown_up ? 1 : 0) << ',';
    if (conc) {
      rows << conc->i << ',' << conc->j;
    } else {
      rows << ',';
    }
    rows << '\n';
    const std::string tag = std::to_string(k);
    write_file(dir / ("stage_" + tag + ".csv"), [&](std::ostream& s) { io::write_field_csv(s, torus, r.v, cfg.seed); });
    write_file(dir / ("trace_" + tag + ".csv"), [&](std::ostream& s) { io::write_trace_csv(s, r.trace, cfg.seed); });
    if (conc) {
      MinimizeResult at_conc = r;
      at_conc.peak_point = *conc;
      auto [p, fit] = profile_with_fit(cfg, at_conc, torus, measure);
      write_file(dir / ("profile_" + tag + ".csv"), [&](std::ostream& s) { io::write_profile_csv(s, p, fit, cfg.seed); });
      sj["profile"] = profile_json(p, fit);
    }
    summary["stages"].push_back(sj);
  }
  write_text(dir / "stages.csv", rows.str());
  write_json(dir / "summary.json", summary);
  if (cfg.json) {
    out << summary.dump(2) << '\n';
  } else {
    out << rows.str();
  }
  return ok ? kOk : kFailed;
}

int cmd_profile(const RunConfig& cfg, std::ostream& out) {
  const CirculationMeasure measure = cfg.measure();
  std::optional<SpectralTorus> torus;
  MinimizeResult r;
  if (cfg.field_path) {
    std::ifstream f(*cfg.field_path);
    if (!f) throw io::ParseError("cannot open field file '" + *cfg.field_path + "'", 0);
    io::LoadedField lf = io::read_field_csv(f);
    torus.emplace(lf.side_length, lf.field.n());
    r.v = torus->project_zero_mean(lf.field);
    r.peak_point = r.v.argmax();
    r.peak_value = r.v.at(r.peak_point);
    r.lambda = cfg.lambda.value_or(std::numeric_limits<double>::quiet_NaN());
  } else {
    torus.emplace(cfg.side_length, cfg.grid_n);
    const double lbar = lambda_bar(measure).lambda_bar;
    const Problem prob{*torus, measure, resolve_lambda(cfg, lbar)};
    const Field start = torus->project_zero_mean(seeded_perturbation(*torus, cfg.seed, 1e-2) +
                                                 symmetry_breaking_bump(*torus));
    r = minimize(prob, options_of(cfg), start);
  }
  auto [p, fit] = profile_with_fit(cfg, r, *torus, measure);
  const fs::path dir = output_dir(cfg);
  write_file(dir / "profile_0.csv", [&](std::ostream& s) { io::write_profile_csv(s, p, fit, cfg.seed); });
  json j = profile_json(p, fit);
  j["command"] = "profile";
  j["seed"] = cfg.seed;
  j["peak_point"] = point_json(r.peak_point);
  write_json(dir / "summary.json", j);
  if (cfg.json) {
    out << j.dump(2) << '\n';
  } else {
    out << "sigma=" << io::format_double(p.sigma) << " fitted_slope="
        << (fit ? io::format_double(fit->slope) : std::string("n/a"))
        << " predicted=" << io::format_double(p.alpha * p.gamma0_reference) << '\n';
  }
  return kOk;
}

struct Check {
  std::string name;
  double value;
  double expected;
  double tolerance;
  bool relative;

  bool passed() const {
    const double scale = relative ? std::abs(expected) : 1.0;
    return std::isfinite(value) && std::abs(value - expected) <= tolerance * scale;
  }
};

std::vector<Check> verification_checks(double mu_mismatch) {
  const double lam = 8.0 * kPi;
  const double mu = 1.0;
  auto bubble = [=](double r) { return liouville_bubble(mu, lam, r); };
  auto density = [=](double r) { return lam * std::exp(bubble(r)); };

  std::vector<Check> checks;
  const double mass = 2.0 * kPi * mass_gamma(density, 1e6);
  checks.push_back({"bubble_total_mass", mass, 8.0 * kPi, 1e-6, true});

  double pde = 0.0;
  for (double r = 0.1; r <= 100.0; r *= 1.1) {
    const double w0 = bubble(r);
    auto radial_laplacian = [&](double h) {
      const double wp = bubble(r + h);
      const double wm = bubble(r - h);
      return (wp - 2.0 * w0 + wm) / (h * h) + (wp - wm) / (2.0 * h * r);
    };
    const double h = 1e-2 * r;
    const double lap = (4.0 * radial_laplacian(0.5 * h) - radial_laplacian(h)) / 3.0;
    pde = std::max(pde, std::abs(lap + lam * std::exp(w0)));
  }
  checks.push_back({"bubble_pde_residual", pde, 0.0, 1e-6, false});

  const double gamma = mass_gamma(density, 1e6);
  checks.push_back({"mass_gamma", gamma, 4.0, 1e-6, false});
  checks.push_back({"pi_gamma_sq_vs_2_lambda_bar", kPi * gamma * gamma, 2.0 * lam, 1e-4, true});

  std::vector<double> radii{0.0};
  const double sigma = std::exp(-0.5 * bubble(0.0));
  for (int k = 0; k < 400; ++k) radii.push_back(sigma * std::pow(10.0, 1.0 + 4.0 * k / 399.0));
  for (double a : {1.0, 0.5}) {
    BlowupProfile p = profile_from_radial(bubble, a, radii, 4.0);
    const double slope = fit_li_slope(p, 100.0, 1e4).slope;
    checks.push_back({a == 1.0 ? "li_slope_alpha_1" : "li_slope_alpha_0.5", slope, 4.0 * a, 0.02, true});
  }

  const double mu_den = mu * mu_mismatch;
  PohozaevInput bub;
  bub.u = [=](double r) {
    const double q = 1.0 + mu_den * mu_den * r * r;
    return std::log(8.0 * mu * mu / (lam * q * q));
  };
  bub.A = [](double) { return 1.0; };
  bub.dA = [](double) { return 0.0; };
  bub.F = [=](double u) { return lam * std::exp(u); };
  checks.push_back({"pohozaev_bubble_R10", pohozaev_residual(bub, 10.0).relative_residual, 0.0, 1e-3, false});

  PohozaevInput flat;
  flat.u = [](double) { return 0.7; };
  flat.A = [](double) { return 1.0; };
  flat.F = [](double u) { return std::exp(u); };
  checks.push_back({"pohozaev_constant", pohozaev_residual(flat, 10.0).relative_residual, 0.0, 1e-12, false});

  auto bubble_density = [](double r) { return 8.0 / ((1.0 + r * r) * (1.0 + r * r)); };
  checks.push_back({"newton_slope_bubble", newton_potential_slope(bubble_density, 1e2, 1e4), 4.0, 0.01, true});
  auto disk = [](double r) { return r <= 1.0 ? 2.0 : 0.0; };
  checks.push_back({"newton_slope_disk", newton_potential_slope(disk, 1e2, 1e4, 21, {1.0}), 1.0, 0.01, true});
  return checks;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  const std::vector<Check> checks = verification_checks(cfg.mu_mismatch);
  bool all = true;
  json j;
  j["command"] = "verify";
  j["seed"] = cfg.seed;
  j["checks"] = json::array();
  for (const Check& c : checks) {
    all = all && c.passed();
    j["checks"].push_back({{"name", c.name},
                           {"value", nullable(c.value)},
                           {"expected", c.expected},
                           {"tolerance", c.tolerance},
                           {"relative", c.relative},
                           {"passed", c.passed()}});
  }
  j["all_passed"] = all;
  if (cfg.out_dir) write_json(output_dir(cfg) / "summary.json", j);
  if (cfg.json) {
    out << j.dump(2) << '\n';
  } else {
    for (const Check& c : checks) {
      out << (c.passed() ? "PASS " : "FAIL ") << c.name << " value=" << io::format_double(c.value)
          << " expected=" << io::format_double(c.expected) << " tol=" << io::format_double(c.tolerance)
          << (c.relative ? " (relative)" : "") << '\n';
    }
  }
  return all ? kOk : kFailed;
}

}  // namespace

// ------------------------------------------------------------ RunConfig

void RunConfig::set(std::string_view key, std::string_view value) {
  value = trim(value);
  key = trim(key);
  if (key == "measure") {
    measure_path = std::string(value);
  } else if (key == "atoms") {
    // "alpha:weight,alpha:weight"
    atoms.clear();
    std::size_t start = 0;
    while (start <= value.size()) {
      const auto comma = value.find(',', start);
      const auto tok = trim(value.substr(start, comma == std::string_view::npos ? value.size() - start : comma - start));
      if (!tok.empty()) {
        const auto colon = tok.find(':');
        if (colon == std::string_view::npos) {
          throw std::invalid_argument("config key 'atoms': expected alpha:weight, got '" + std::string(tok) + "'");
        }
        atoms.push_back({to_double(key, tok.substr(0, colon)), to_double(key, tok.substr(colon + 1))});
      }
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
  } else if (key == "L") {
    side_length = to_double(key, value);
  } else if (key == "n") {
    grid_n = static_cast<int>(to_integer(key, value));
  } else if (key == "lambda") {
    lambda = to_double(key, value);
  } else if (key == "lambda_fraction") {
    lambda_fraction = to_double(key, value);
  } else if (key == "schedule") {
    schedule = to_list(key, value);
  } else if (key == "schedule_mode") {
    if (value == "fraction") {
      schedule_is_fraction = true;
    } else if (value == "absolute") {
      schedule_is_fraction = false;
    } else {
      throw std::invalid_argument("config key 'schedule_mode': expected fraction or absolute");
    }
  } else if (key == "max_iters") {
    minimize.max_iters = static_cast<int>(to_integer(key, value));
  } else if (key == "grad_tol") {
    minimize.grad_tol = to_double(key, value);
  } else if (key == "step_init") {
    minimize.step_init = to_double(key, value);
  } else if (key == "armijo_c") {
    minimize.armijo_c = to_double(key, value);
  } else if (key == "blowup_threshold") {
    minimize.blowup_peak_threshold = to_double(key, value);
  } else if (key == "seed") {
    const long long s = to_integer(key, value);
    if (s < 0) throw std::invalid_argument("config key 'seed': must be >= 0");
    seed = static_cast<std::uint64_t>(s);
  } else if (key == "out") {
    out_dir = std::string(value);
  } else if (key == "alpha") {
    alpha = to_double(key, value);
  } else if (key == "n_bins") {
    n_bins = static_cast<int>(to_integer(key, value));
  } else if (key == "fit_lo") {
    fit_lo = to_double(key, value);
  } else if (key == "fit_hi") {
    fit_hi = to_double(key, value);
  } else if (key == "field") {
    field_path = std::string(value);
  } else {
    throw std::invalid_argument("unknown config key '" + std::string(key) + "'");
  }
}

void RunConfig::validate() const {
  if (grid_n < 16 || (grid_n & (grid_n - 1)) != 0) {
    throw std::invalid_argument("n must be a power of two >= 16");
  }
  if (!(side_length > 0.0)) throw std::invalid_argument("L must be positive");
  if (schedule_is_fraction) {
    for (double s : schedule) {
      if (!(s > 0.0 && s <= 1.0)) {
        throw std::invalid_argument("schedule fraction " + io::format_double(s) + " outside (0, 1]");
      }
    }
  }
  if (lambda_fraction && !(*lambda_fraction > 0.0)) throw std::invalid_argument("lambda_fraction must be positive");
  if (lambda && !(*lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
  minimize.validate();
}

CirculationMeasure RunConfig::measure() const {
  if (measure_path) return io::load_measure(*measure_path);
  if (!atoms.empty()) return CirculationMeasure::from_atoms(atoms);
  throw std::invalid_argument("no measure given: use --measure PATH or the 'atoms' key");
}

RunConfig parse_config(std::string_view text, RunConfig base) {
  int lineno = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto nl = text.find('\n', start);
    std::string_view line = text.substr(start, nl == std::string_view::npos ? text.size() - start : nl - start);
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (!line.empty()) {
      const auto eq = line.find('=');
      if (eq == std::string_view::npos) throw io::ParseError("expected key=value", lineno);
      try {
        base.set(line.substr(0, eq), line.substr(eq + 1));
      } catch (const std::invalid_argument& e) {
        throw io::ParseError(e.what(), lineno);
      }
    }
    if (nl == std::string_view::npos) break;
    start = nl + 1;
  }
  return base;
}

// ------------------------------------------------------------ run

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"vortexmf: extremal parameter, energy minimization and blowup checks for the "
               "point-vortex mean field equation"};
  app.require_subcommand(1);
  std::string config_path;
  std::string measure_path;
  std::string out_dir;
  long long seed = -1;
  bool json_flag = false;
  std::vector<std::string> overrides;
  double mu_mismatch = 1.0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "key=value configuration file");
    sub->add_option("--measure", measure_path, "measure file (alpha weight per line)");
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--seed", seed, "random seed")->check(CLI::NonNegativeNumber);
    sub->add_flag("--json", json_flag, "machine-readable output on stdout");
    sub->add_option("--set", overrides, "override a configuration key: --set key=value");
  };
  CLI::App* lb = app.add_subcommand("lambda-bar", "extremal parameter of a circulation measure");
  CLI::App* mn = app.add_subcommand("minimize", "minimize the energy at one lambda");
  CLI::App* sw = app.add_subcommand("sweep", "continuation over a lambda schedule");
  CLI::App* pr = app.add_subcommand("profile", "radial blowup profile and log-slope fit");
  CLI::App* vf = app.add_subcommand("verify", "run the bubble / Pohozaev / Newton-potential oracle suite");
  for (CLI::App* s : {lb, mn, sw, pr, vf}) add_common(s);
  vf->add_option("--inject-mu-mismatch", mu_mismatch,
                 "debug: scale mu in the bubble denominator for the Pohozaev check");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return kInvalid;
  }

  RunConfig cfg;
  try {
    if (!config_path.empty()) {
      std::ifstream f(config_path);
      if (!f) throw io::ParseError("cannot open config file '" + config_path + "'", 0);
      std::stringstream buf;
      buf << f.rdbuf();
      cfg = parse_config(buf.str());
    }
    if (!measure_path.empty()) cfg.measure_path = measure_path;
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);
    for (const std::string& o : overrides) {
      const auto eq = o.find('=');
      if (eq == std::string::npos) throw std::invalid_argument("--set expects key=value, got '" + o + "'");
      cfg.set(std::string_view(o).substr(0, eq), std::string_view(o).substr(eq + 1));
    }
    cfg.json = json_flag;
    cfg.mu_mismatch = mu_mismatch;
    cfg.validate();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInvalid;
  }

  try {
    if (lb->parsed()) return cmd_lambda_bar(cfg, out);
    if (mn->parsed()) return cmd_minimize(cfg, out);
    if (sw->parsed()) return cmd_sweep(cfg, out, err);
    if (pr->parsed()) return cmd_profile(cfg, out);
    if (vf->parsed()) return cmd_verify(cfg, out);
  } catch (const io::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kInvalid;
  } catch (const DivergedError& e) {
    err << "error: " << e.what() << '\n';
    return kFailed;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kInvalid;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailed;
  }
  return kInvalid;
}

}  // namespace vortexmf::cli
