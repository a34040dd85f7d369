#include "vortexmf/torus.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>

#include "vortexmf/kernels.hpp"

namespace vortexmf {

// ---------------------------------------------------------------- Field

Field::Field(int n, double fill) : n_(n), values_(static_cast<std::size_t>(n) * n, fill) {
  if (n <= 0) throw std::invalid_argument("Field: grid size must be positive");
}

Field::Field(int n, std::vector<double> values) : n_(n), values_(std::move(values)) {
  if (n <= 0 || values_.size() != static_cast<std::size_t>(n) * n) {
    throw std::invalid_argument("Field: value count does not match n x n");
  }
}

void Field::certify_zero_mean() {
  const double m = kernels::omp::sum(values_, static_cast<std::size_t>(n_)) / values_.size();
  const double scale = std::max(1.0, max_abs());
  if (std::abs(m) > 1e-12 * scale) {
    throw std::domain_error("Field: mean " + std::to_string(m) + " is not zero");
  }
  zero_mean_ = true;
}

double Field::max_abs() const { return kernels::omp::max_abs(values_); }

GridPoint Field::argmax() const { return point(kernels::omp::max_loc(values_).index); }

Field operator+(const Field& a, const Field& b) {
  if (a.n() != b.n()) throw std::invalid_argument("Field: shape mismatch");
  Field out = a;
  auto o = out.mutable_values();
  const auto bv = b.values();
  for (std::size_t k = 0; k < o.size(); ++k) o[k] += bv[k];
  return out;
}

Field operator-(const Field& a, const Field& b) {
  if (a.n() != b.n()) throw std::invalid_argument("Field: shape mismatch");
  Field out = a;
  auto o = out.mutable_values();
  const auto bv = b.values();
  for (std::size_t k = 0; k < o.size(); ++k) o[k] -= bv[k];
  return out;
}

Field operator*(double s, const Field& a) {
  Field out = a;
  for (double& v : out.mutable_values()) v *= s;
  return out;
}

// -------------------------------------------------------- SpectralTorus

namespace {

// The FFTW planner is not thread safe; execution on fresh arrays is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwDeleter {
  void operator()(void* p) const { fftw_free(p); }
};

template <class T>
using FftwBuffer = std::unique_ptr<T[], FftwDeleter>;

template <class T>
FftwBuffer<T> fftw_buffer(std::size_t count) {
  auto* p = static_cast<T*>(fftw_malloc(sizeof(T) * count));
  if (p == nullptr) throw std::bad_alloc();
  return FftwBuffer<T>(p);
}

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

struct SpectralTorus::Plans {
  fftw_plan forward = nullptr;
  fftw_plan inverse = nullptr;
  int n = 0;

  explicit Plans(int grid_n) : n(grid_n) {
    const std::size_t real = static_cast<std::size_t>(n) * n;
    const std::size_t cplx = static_cast<std::size_t>(n) * (n / 2 + 1);
    auto in = fftw_buffer<double>(real);
    auto out = fftw_buffer<fftw_complex>(cplx);
    std::lock_guard lock(planner_mutex());
    forward = fftw_plan_dft_r2c_2d(n, n, in.get(), out.get(), FFTW_ESTIMATE);
    inverse = fftw_plan_dft_c2r_2d(n, n, out.get(), in.get(), FFTW_ESTIMATE);
    if (forward == nullptr || inverse == nullptr) throw std::runtime_error("FFTW planning failed");
  }
  ~Plans() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(forward);
    fftw_destroy_plan(inverse);
  }
  Plans(const Plans&) = delete;
  Plans& operator=(const Plans&) = delete;

  std::size_t spectrum_size() const { return static_cast<std::size_t>(n) * (n / 2 + 1); }
};

SpectralTorus::SpectralTorus(double side_length, int grid_n)
    : side_length_(side_length), grid_n_(grid_n) {
  if (!(side_length > 0.0) || !std::isfinite(side_length)) {
    throw std::invalid_argument("SpectralTorus: side length must be positive");
  }
  if (!is_power_of_two(grid_n) || grid_n < 16) {
    throw std::invalid_argument("SpectralTorus: grid_n must be a power of two >= 16, got " +
                                std::to_string(grid_n));
  }
  plans_ = std::make_shared<const Plans>(grid_n);
}

double SpectralTorus::eigenvalue(int k1, int k2) const {
  const double base = 2.0 * std::numbers::pi / side_length_;
  return base * base * (static_cast<double>(k1) * k1 + static_cast<double>(k2) * k2);
}

void SpectralTorus::check_shape(const Field& f) const {
  if (f.n() != grid_n_) {
    throw std::invalid_argument("field grid " + std::to_string(f.n()) + " does not match torus grid " +
                                std::to_string(grid_n_));
  }
}

Field SpectralTorus::sample(const std::function<double(double, double)>& fn) const {
  Field f(grid_n_);
  auto v = f.mutable_values();
  const double h = spacing();
  for (int i = 0; i < grid_n_; ++i) {
    for (int j = 0; j < grid_n_; ++j) v[f.index(i, j)] = fn(i * h, j * h);
  }
  return f;
}

double SpectralTorus::integrate(const Field& f) const {
  check_shape(f);
  return cell_area() * kernels::omp::sum(f.values(), static_cast<std::size_t>(grid_n_));
}

double SpectralTorus::inner(const Field& f, const Field& g) const {
  check_shape(f);
  check_shape(g);
  return cell_area() * kernels::omp::dot(f.values(), g.values(), static_cast<std::size_t>(grid_n_));
}

void SpectralTorus::forward(const Field& f, std::vector<double>& spec) const {
  check_shape(f);
  const std::size_t cplx = plans_->spectrum_size();
  auto in = fftw_buffer<double>(f.size());
  auto out = fftw_buffer<fftw_complex>(cplx);
  std::copy(f.values().begin(), f.values().end(), in.get());
  fftw_execute_dft_r2c(plans_->forward, in.get(), out.get());
  spec.resize(2 * cplx);
  for (std::size_t k = 0; k < cplx; ++k) {
    spec[2 * k] = out[k][0];
    spec[2 * k + 1] = out[k][1];
  }
}

Field SpectralTorus::inverse(std::vector<double>& spec) const {
  const std::size_t cplx = plans_->spectrum_size();
  auto in = fftw_buffer<fftw_complex>(cplx);
  auto out = fftw_buffer<double>(static_cast<std::size_t>(grid_n_) * grid_n_);
  for (std::size_t k = 0; k < cplx; ++k) {
    in[k][0] = spec[2 * k];
    in[k][1] = spec[2 * k + 1];
  }
  fftw_execute_dft_c2r(plans_->inverse, in.get(), out.get());
  const double norm = 1.0 / (static_cast<double>(grid_n_) * grid_n_);
  Field f(grid_n_);
  auto v = f.mutable_values();
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = out[k] * norm;
  return f;
}

Field SpectralTorus::apply_multiplier(const Field& f,
                                      const std::function<double(int, int)>& multiplier) const {
  std::vector<double> spec;
  forward(f, spec);
  const int half = grid_n_ / 2 + 1;
  for (int a = 0; a < grid_n_; ++a) {
    const int k1 = wavenumber(a);
    for (int b = 0; b < half; ++b) {
      const double m = multiplier(k1, b);
      const std::size_t k = static_cast<std::size_t>(a) * half + b;
      spec[2 * k] *= m;
      spec[2 * k + 1] *= m;
    }
  }
  return inverse(spec);
}

Field SpectralTorus::laplacian(const Field& f) const {
  return apply_multiplier(f, [this](int k1, int k2) { return -eigenvalue(k1, k2); });
}

Field SpectralTorus::solve_poisson_zero_mean(const Field& rhs) const {
  check_shape(rhs);
  const double m = mean(rhs);
  if (std::abs(m) > 1e-10 * (1.0 + rhs.max_abs())) {
    throw std::domain_error("solve_poisson_zero_mean: right-hand side has mean " + std::to_string(m));
  }
  Field u = apply_multiplier(rhs, [this](int k1, int k2) {
    return (k1 == 0 && k2 == 0) ? 0.0 : 1.0 / eigenvalue(k1, k2);
  });
  return project_zero_mean(u);
}

double SpectralTorus::dirichlet_energy(const Field& f) const {
  std::vector<double> spec;
  forward(f, spec);
  const int half = grid_n_ / 2 + 1;
  // Each row of the half spectrum is summed on its own, rows in order.
  std::vector<double> rows(static_cast<std::size_t>(grid_n_), 0.0);
#pragma omp parallel for schedule(static)
  for (int a = 0; a < grid_n_; ++a) {
    const int k1 = wavenumber(a);
    double s = 0.0;
    for (int b = 0; b < half; ++b) {
      const std::size_t k = static_cast<std::size_t>(a) * half + b;
      const double power = spec[2 * k] * spec[2 * k] + spec[2 * k + 1] * spec[2 * k + 1];
      const double weight = (b == 0 || b == grid_n_ / 2) ? 1.0 : 2.0;
      s += weight * eigenvalue(k1, b) * power;
    }
    rows[static_cast<std::size_t>(a)] = s;
  }
  double total = 0.0;
  for (double s : rows) total += s;
  const double n2 = static_cast<double>(grid_n_) * grid_n_;
  return 0.5 * volume() * total / (n2 * n2);
}

std::array<Field, 2> SpectralTorus::gradient(const Field& f) const {
  std::vector<double> spec;
  forward(f, spec);
  const int half = grid_n_ / 2 + 1;
  const double base = 2.0 * std::numbers::pi / side_length_;
  std::array<Field, 2> out;
  for (int dir = 0; dir < 2; ++dir) {
    std::vector<double> d = spec;
    for (int a = 0; a < grid_n_; ++a) {
      const int k1 = wavenumber(a);
      for (int b = 0; b < half; ++b) {
        const int k = dir == 0 ? k1 : b;
        const bool nyquist = dir == 0 ? (a == grid_n_ / 2) : (b == grid_n_ / 2);
        const double kk = nyquist ? 0.0 : base * k;
        const std::size_t idx = static_cast<std::size_t>(a) * half + b;
        // (re + i im) * i kk = -kk im + i kk re
        const double re = d[2 * idx];
        const double im = d[2 * idx + 1];
        d[2 * idx] = -kk * im;
        d[2 * idx + 1] = kk * re;
      }
    }
    out[static_cast<std::size_t>(dir)] = inverse(d);
  }
  return out;
}

Field SpectralTorus::project_zero_mean(const Field& f) const {
  check_shape(f);
  const double m = kernels::omp::sum(f.values(), static_cast<std::size_t>(grid_n_)) /
                   static_cast<double>(f.size());
  Field out = f;
  for (double& v : out.mutable_values()) v -= m;
  out.certify_zero_mean();
  return out;
}

double SpectralTorus::periodic_distance(GridPoint a, GridPoint b) const {
  auto wrap = [this](int d) {
    d = std::abs(d) % grid_n_;
    return std::min(d, grid_n_ - d);
  };
  const double h = spacing();
  return h * std::hypot(static_cast<double>(wrap(a.i - b.i)), static_cast<double>(wrap(a.j - b.j)));
}

std::vector<RadialBin> SpectralTorus::radial_average(const Field& f, GridPoint center,
                                                     int n_bins) const {
  check_shape(f);
  if (n_bins < 2) throw std::invalid_argument("radial_average: need at least 2 bins");
  const double r_max = 0.5 * side_length_;
  const double width = r_max / n_bins;
  std::vector<double> rsum(static_cast<std::size_t>(n_bins), 0.0);
  std::vector<double> vsum(static_cast<std::size_t>(n_bins), 0.0);
  std::vector<std::size_t> count(static_cast<std::size_t>(n_bins), 0);
  for (int i = 0; i < grid_n_; ++i) {
    for (int j = 0; j < grid_n_; ++j) {
      const double r = periodic_distance(center, {i, j});
      if (r > r_max) continue;
      const auto bin = std::min(static_cast<std::size_t>(r / width), static_cast<std::size_t>(n_bins - 1));
      rsum[bin] += r;
      vsum[bin] += f(i, j);
      ++count[bin];
    }
  }
  std::vector<RadialBin> out;
  for (std::size_t b = 0; b < count.size(); ++b) {
    if (count[b] == 0) continue;
    const double c = static_cast<double>(count[b]);
    out.push_back({rsum[b] / c, vsum[b] / c, count[b]});
  }
  return out;
}

}  // namespace vortexmf
