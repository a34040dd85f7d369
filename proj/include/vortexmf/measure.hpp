#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace vortexmf {

/// One point mass of a circulation distribution.
struct Atom {
  double alpha;   // dimensionless circulation in [-1, 1]
  double weight;  // probability mass, > 0
};

/// Which part of I = [-1, 1] a sum or subset ranges over. The point
/// alpha = 0 belongs to both halves.
enum class Side { kAll, kPositive, kNegative };

/// Atomic probability measure P on [-1, 1].
///
/// Atoms are kept sorted by strictly increasing alpha, weights sum to one.
/// Instances are immutable after construction.
class CirculationMeasure {
 public:
  /// Builds a measure from (alpha, weight) pairs. Alphas closer than 1e-12
  /// are merged by adding weights. A weight total within 1e-9 of one is
  /// rescaled to exactly one; anything further off is rejected.
  static CirculationMeasure from_atoms(std::vector<Atom> atoms);

  /// Midpoint quadrature of a nonnegative density over [lo, hi] with
  /// `n_cells` equal cells. Cells where the density vanishes are dropped
  /// and the remaining weights are normalized to total one.
  static CirculationMeasure discretize(const std::function<double(double)>& density,
                                       int n_cells, double lo = -1.0, double hi = 1.0);

  std::span<const Atom> atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }

  /// sum_i alpha_i^k w_i over the requested side.
  double moment(int k, Side side = Side::kAll) const;

  /// Smallest alpha of the support inside [0, 1].
  double alpha_min() const;

  /// True when every atom has alpha >= 0.
  bool supported_on_positive() const;

  /// Same weights, every alpha multiplied by c in (0, 1].
  CirculationMeasure scaled(double c) const;

 private:
  explicit CirculationMeasure(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {}

  std::vector<Atom> atoms_;
};

/// Infimum of 8 pi P(K) / (int_K alpha dP)^2 over subsets K of one half of
/// the support. `lambda_bar` is +infinity with an empty subset when every
/// candidate has zero circulation.
struct ExtremalResult {
  double lambda_bar;
  std::vector<std::size_t> subset;  // indices into measure.atoms(), ascending
  Side side;                        // kPositive or kNegative

  bool bounded() const;
};

/// Exhaustive enumeration of all 2^n subsets per side (n <= 22 per side).
/// Ties are broken by side (positive first), then by fewer atoms, then by
/// enumeration order.
ExtremalResult lambda_bar_bruteforce(const CirculationMeasure& measure);

/// Tail-set scan: within each side only the sets made of the j atoms of
/// largest |alpha| are evaluated. Uses the same summation order as the brute
/// force so the two agree bit for bit whenever they pick the same set.
ExtremalResult lambda_bar(const CirculationMeasure& measure);

/// 8 pi / (int_{I+} alpha dP)^2, the extremal value when no residual mass
/// survives concentration. Requires support in [0, 1].
double lambda_bar_residual_vanishing(const CirculationMeasure& measure);

/// Maximizer of sum_i phi0_i psi_i w_i over {0 <= psi <= 1, sum psi_i w_i = d}
/// with phi0(beta) = beta / int alpha dP.
struct ThresholdSolution {
  double level;     // s_d: threshold value of phi0
  double fraction;  // c_d: fill ratio of the atom sitting at the threshold
  std::vector<double> psi;

  /// sum_i phi0(alpha_i) psi_i w_i
  double objective(const CirculationMeasure& measure) const;
};

/// Requires support in [0, 1] and d in (0, 1]. For d = 1 every atom is
/// filled; the reported level is then the smallest phi0 with fraction 1.
ThresholdSolution threshold_maximizer(const CirculationMeasure& measure, double d);

/// 8 pi mass / circulation^2. Both lambda_bar routes accumulate mass and
/// circulation in descending |alpha| order and then call this.
double extremal_ratio(double mass, double circulation);

}  // namespace vortexmf
