#include "vortexmf/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "vortexmf/kernels.hpp"

namespace vortexmf {

namespace {

constexpr double kAlphaMergeTol = 1e-12;
constexpr double kWeightSumTol = 1e-9;
constexpr int kMaxBruteForceAtoms = 22;

bool on_side(double alpha, Side side) {
  switch (side) {
    case Side::kAll:
      return true;
    case Side::kPositive:
      return alpha >= 0.0;
    case Side::kNegative:
      return alpha <= 0.0;
  }
  return false;
}

// Atom indices of one side, ordered by descending |alpha|.
std::vector<std::size_t> side_order(const CirculationMeasure& measure, Side side) {
  std::vector<std::size_t> idx;
  const auto atoms = measure.atoms();
  if (side == Side::kPositive) {
    for (std::size_t i = atoms.size(); i-- > 0;) {
      if (atoms[i].alpha >= 0.0) idx.push_back(i);
    }
  } else {
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      if (atoms[i].alpha <= 0.0) idx.push_back(i);
    }
  }
  return idx;
}

struct SideCandidate {
  kernels::SubsetBest best;
  std::vector<std::size_t> order;
};

ExtremalResult assemble(const SideCandidate& pos, const SideCandidate& neg) {
  // Positive side wins ties.
  const bool use_neg = neg.best.mask != 0 && (pos.best.mask == 0 || kernels::better(neg.best, pos.best));
  const SideCandidate& chosen = use_neg ? neg : pos;
  ExtremalResult out{std::numeric_limits<double>::infinity(), {},
                     use_neg ? Side::kNegative : Side::kPositive};
  if (chosen.best.mask == 0) return out;
  out.lambda_bar = chosen.best.value;
  for (std::size_t bit = 0; bit < chosen.order.size(); ++bit) {
    if (chosen.best.mask & (std::uint64_t{1} << bit)) out.subset.push_back(chosen.order[bit]);
  }
  std::sort(out.subset.begin(), out.subset.end());
  return out;
}

void split_side(const CirculationMeasure& measure, const std::vector<std::size_t>& order,
                std::vector<double>& mass, std::vector<double>& circulation) {
  mass.clear();
  circulation.clear();
  for (std::size_t i : order) {
    const Atom& a = measure.atoms()[i];
    mass.push_back(a.weight);
    circulation.push_back(a.alpha * a.weight);
  }
}

void require_positive_support(const CirculationMeasure& measure, const char* what) {
  if (!measure.supported_on_positive()) {
    throw std::domain_error(std::string(what) + ": measure has atoms with alpha < 0");
  }
}

}  // namespace

CirculationMeasure CirculationMeasure::from_atoms(std::vector<Atom> atoms) {
  if (atoms.empty()) throw std::invalid_argument("circulation measure: no atoms");
  for (const Atom& a : atoms) {
    if (!(a.alpha >= -1.0 && a.alpha <= 1.0)) {
      throw std::invalid_argument("circulation measure: alpha " + std::to_string(a.alpha) +
                                  " outside [-1, 1]");
    }
    if (!(a.weight > 0.0) || !std::isfinite(a.weight)) {
      throw std::invalid_argument("circulation measure: weight " + std::to_string(a.weight) +
                                  " is not positive");
    }
  }
  std::stable_sort(atoms.begin(), atoms.end(),
                   [](const Atom& a, const Atom& b) { return a.alpha < b.alpha; });
  std::vector<Atom> merged;
  for (const Atom& a : atoms) {
    if (!merged.empty() && a.alpha - merged.back().alpha <= kAlphaMergeTol) {
      merged.back().weight += a.weight;
    } else {
      merged.push_back(a);
    }
  }
  double total = 0.0;
  for (const Atom& a : merged) total += a.weight;
  if (std::abs(total - 1.0) > kWeightSumTol) {
    throw std::invalid_argument("circulation measure: weights sum to " + std::to_string(total) +
                                ", expected 1");
  }
  for (Atom& a : merged) a.weight /= total;
  return CirculationMeasure(std::move(merged));
}

CirculationMeasure CirculationMeasure::discretize(const std::function<double(double)>& density,
                                                  int n_cells, double lo, double hi) {
  if (n_cells < 1) throw std::invalid_argument("discretize: n_cells must be >= 1");
  if (!(lo < hi) || lo < -1.0 || hi > 1.0) {
    throw std::invalid_argument("discretize: interval must satisfy -1 <= lo < hi <= 1");
  }
  const double width = (hi - lo) / n_cells;
  std::vector<Atom> atoms;
  double total = 0.0;
  for (int c = 0; c < n_cells; ++c) {
    const double mid = lo + (c + 0.5) * width;
    const double rho = density(mid);
    if (rho < 0.0) throw std::invalid_argument("discretize: density is negative");
    if (rho > 0.0) {
      atoms.push_back({mid, rho * width});
      total += rho * width;
    }
  }
  if (atoms.empty() || !(total > 0.0)) {
    throw std::invalid_argument("discretize: density integrates to zero");
  }
  for (Atom& a : atoms) a.weight /= total;
  return from_atoms(std::move(atoms));
}

double CirculationMeasure::moment(int k, Side side) const {
  if (k < 0) throw std::invalid_argument("moment: order must be >= 0");
  double s = 0.0;
  for (const Atom& a : atoms_) {
    if (on_side(a.alpha, side)) s += std::pow(a.alpha, k) * a.weight;
  }
  return s;
}

double CirculationMeasure::alpha_min() const {
  for (const Atom& a : atoms_) {
    if (a.alpha >= 0.0) return a.alpha;
  }
  throw std::domain_error("alpha_min: no atoms in [0, 1]");
}

bool CirculationMeasure::supported_on_positive() const { return atoms_.front().alpha >= 0.0; }

CirculationMeasure CirculationMeasure::scaled(double c) const {
  if (!(c > 0.0 && c <= 1.0)) throw std::invalid_argument("scaled: factor must be in (0, 1]");
  std::vector<Atom> out(atoms_.begin(), atoms_.end());
  for (Atom& a : out) a.alpha *= c;
  return CirculationMeasure(std::move(out));
}

bool ExtremalResult::bounded() const { return std::isfinite(lambda_bar); }

double extremal_ratio(double mass, double circulation) {
  return 8.0 * std::numbers::pi * mass / (circulation * circulation);
}

ExtremalResult lambda_bar_bruteforce(const CirculationMeasure& measure) {
  SideCandidate sides[2];
  const Side which[2] = {Side::kPositive, Side::kNegative};
  std::vector<double> mass;
  std::vector<double> circulation;
  for (int s = 0; s < 2; ++s) {
    sides[s].order = side_order(measure, which[s]);
    if (sides[s].order.size() > kMaxBruteForceAtoms) {
      throw std::invalid_argument("lambda_bar_bruteforce: more than 22 atoms on one side");
    }
    split_side(measure, sides[s].order, mass, circulation);
    const std::uint64_t last = std::uint64_t{1} << sides[s].order.size();
    sides[s].best = kernels::omp::scan_subsets(mass, circulation, 1, last);
  }
  return assemble(sides[0], sides[1]);
}

ExtremalResult lambda_bar(const CirculationMeasure& measure) {
  SideCandidate sides[2];
  const Side which[2] = {Side::kPositive, Side::kNegative};
  for (int s = 0; s < 2; ++s) {
    sides[s].order = side_order(measure, which[s]);
    kernels::SubsetBest best{std::numeric_limits<double>::infinity(), 0, 0};
    double m = 0.0;
    double c = 0.0;
    for (std::size_t j = 0; j < sides[s].order.size(); ++j) {
      const Atom& a = measure.atoms()[sides[s].order[j]];
      m += a.weight;
      c += a.alpha * a.weight;
      if (c == 0.0) continue;
      const kernels::SubsetBest cand{extremal_ratio(m, c), static_cast<int>(j + 1),
                                     (std::uint64_t{1} << (j + 1)) - 1};
      if (kernels::better(cand, best)) best = cand;
    }
    sides[s].best = best;
  }
  return assemble(sides[0], sides[1]);
}

double lambda_bar_residual_vanishing(const CirculationMeasure& measure) {
  require_positive_support(measure, "lambda_bar_residual_vanishing");
  const double m1 = measure.moment(1, Side::kPositive);
  if (m1 == 0.0) throw std::domain_error("lambda_bar_residual_vanishing: first moment is zero");
  return 8.0 * std::numbers::pi / (m1 * m1);
}

double ThresholdSolution::objective(const CirculationMeasure& measure) const {
  const double m1 = measure.moment(1, Side::kPositive);
  double s = 0.0;
  for (std::size_t i = 0; i < psi.size(); ++i) {
    const Atom& a = measure.atoms()[i];
    s += (a.alpha / m1) * psi[i] * a.weight;
  }
  return s;
}

ThresholdSolution threshold_maximizer(const CirculationMeasure& measure, double d) {
  require_positive_support(measure, "threshold_maximizer");
  if (!(d > 0.0 && d <= 1.0)) throw std::invalid_argument("threshold_maximizer: d must be in (0, 1]");
  const double m1 = measure.moment(1, Side::kPositive);
  if (m1 == 0.0) throw std::domain_error("threshold_maximizer: first moment is zero");

  // Atoms in descending phi0 order are the ascending index order reversed.
  const auto atoms = measure.atoms();
  const std::size_t n = atoms.size();
  ThresholdSolution sol{0.0, 0.0, std::vector<double>(n, 0.0)};

  constexpr double kMassTol = 1e-12;
  double filled = 0.0;
  std::size_t k = n;  // descending position of the threshold atom
  for (std::size_t pos = 0; pos < n; ++pos) {
    const std::size_t i = n - 1 - pos;
    if (filled + atoms[i].weight > d + kMassTol) {
      k = pos;
      break;
    }
    filled += atoms[i].weight;
    sol.psi[i] = 1.0;
  }
  if (k == n) {
    // Everything fits: d = 1 up to rounding.
    sol.level = atoms.front().alpha / m1;
    sol.fraction = 1.0;
    return sol;
  }
  const std::size_t i = n - 1 - k;
  sol.level = atoms[i].alpha / m1;
  sol.fraction = std::clamp((d - filled) / atoms[i].weight, 0.0, 1.0);
  sol.psi[i] = sol.fraction;
  return sol;
}

}  // namespace vortexmf
