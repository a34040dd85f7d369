#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace vortexmf {

/// Grid index on the torus; x1 = i h, x2 = j h with h = L / n.
struct GridPoint {
  int i = 0;
  int j = 0;

  friend bool operator==(const GridPoint&, const GridPoint&) = default;
};

/// Real n x n grid function, row-major (index i * n + j).
///
/// Carries an optional zero-mean certificate marking it as an element of
/// the admissible space E. Any mutable access drops the certificate.
class Field {
 public:
  Field() = default;
  explicit Field(int n, double fill = 0.0);
  Field(int n, std::vector<double> values);

  int n() const { return n_; }
  std::size_t size() const { return values_.size(); }

  std::span<const double> values() const { return values_; }
  std::span<double> mutable_values() {
    zero_mean_ = false;
    return values_;
  }

  double operator()(int i, int j) const { return values_[index(i, j)]; }
  double at(GridPoint p) const { return (*this)(p.i, p.j); }
  void set(int i, int j, double v) {
    zero_mean_ = false;
    values_[index(i, j)] = v;
  }

  bool zero_mean() const { return zero_mean_; }

  /// Sets the certificate after checking |mean| <= 1e-12 max(1, max|v|).
  /// Throws std::domain_error when the check fails.
  void certify_zero_mean();

  double max_abs() const;
  GridPoint argmax() const;

  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(j);
  }
  GridPoint point(std::size_t index) const {
    return {static_cast<int>(index / static_cast<std::size_t>(n_)),
            static_cast<int>(index % static_cast<std::size_t>(n_))};
  }

 private:
  int n_ = 0;
  std::vector<double> values_;
  bool zero_mean_ = false;
};

/// Pointwise helpers used across modules.
Field operator+(const Field& a, const Field& b);
Field operator-(const Field& a, const Field& b);
Field operator*(double s, const Field& a);

struct RadialBin {
  double r;         // mean distance of the samples in the bin
  double mean;      // mean field value
  std::size_t count;
};

/// Flat periodic square [0, L)^2 discretized on an n x n grid, with the
/// Laplacian diagonalized by the discrete Fourier basis.
///
/// Cheap to copy: FFT plans are shared and never mutated after
/// construction, so one instance may be used from several threads.
class SpectralTorus {
 public:
  /// grid_n must be a power of two >= 16.
  explicit SpectralTorus(double side_length, int grid_n = 128);

  double side_length() const { return side_length_; }
  int grid_n() const { return grid_n_; }
  double spacing() const { return side_length_ / grid_n_; }
  double cell_area() const { return spacing() * spacing(); }
  double volume() const { return side_length_ * side_length_; }

  /// Eigenvalue of -Delta for wavenumbers (k1, k2), signed integers.
  double eigenvalue(int k1, int k2) const;

  /// Field with every value set to `fn(x1, x2)`.
  Field sample(const std::function<double(double, double)>& fn) const;
  Field constant(double c) const { return Field(grid_n_, c); }

  double integrate(const Field& f) const;
  double mean(const Field& f) const { return integrate(f) / volume(); }
  /// L2 inner product (L/n)^2 sum f g.
  double inner(const Field& f, const Field& g) const;

  /// Spectral Delta f. Mode (0, 0) maps to zero.
  Field laplacian(const Field& f) const;

  /// Zero-mean u with -Delta u = rhs. Throws std::domain_error when rhs
  /// has mean above 1e-10 (1 + max|rhs|).
  Field solve_poisson_zero_mean(const Field& rhs) const;

  /// 1/2 int |grad f|^2 by Parseval, Nyquist modes included.
  double dirichlet_energy(const Field& f) const;

  /// Spectral gradient (d/dx1, d/dx2). Nyquist modes are dropped.
  std::array<Field, 2> gradient(const Field& f) const;

  /// f minus its mean, with the zero-mean certificate set.
  Field project_zero_mean(const Field& f) const;

  /// Minimum-image distance between grid points.
  double periodic_distance(GridPoint a, GridPoint b) const;

  /// Means over n_bins equal-width shells of periodic distance to `center`,
  /// covering [0, L/2]. Empty bins are omitted.
  std::vector<RadialBin> radial_average(const Field& f, GridPoint center, int n_bins) const;

  void check_shape(const Field& f) const;

 private:
  struct Plans;

  // Forward r2c transform into `spec` (n x (n/2+1) complex, interleaved).
  void forward(const Field& f, std::vector<double>& spec) const;
  // Inverse c2r transform, including the 1/n^2 normalization.
  Field inverse(std::vector<double>& spec) const;
  // Applies `multiplier(k1, k2)` to every mode of `f`.
  Field apply_multiplier(const Field& f, const std::function<double(int, int)>& multiplier) const;

  int wavenumber(int index) const { return index <= grid_n_ / 2 ? index : index - grid_n_; }

  double side_length_;
  int grid_n_;
  std::shared_ptr<const Plans> plans_;
};

}  // namespace vortexmf
