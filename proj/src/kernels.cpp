#include "vortexmf/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <omp.h>

#include "vortexmf/measure.hpp"

namespace vortexmf::kernels {

bool better(const SubsetBest& candidate, const SubsetBest& incumbent) {
  if (candidate.value != incumbent.value) return candidate.value < incumbent.value;
  return candidate.cardinality < incumbent.cardinality;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

SubsetBest empty_best() { return {kInf, 0, 0}; }

// Evaluates one mask, accumulating in bit order.
SubsetBest evaluate_mask(std::span<const double> mass, std::span<const double> circulation,
                         std::uint64_t mask) {
  double m = 0.0;
  double c = 0.0;
  int card = 0;
  for (std::size_t i = 0; i < mass.size(); ++i) {
    if (mask & (std::uint64_t{1} << i)) {
      m += mass[i];
      c += circulation[i];
      ++card;
    }
  }
  if (c == 0.0) return {kInf, card, 0};
  return {extremal_ratio(m, c), card, mask};
}

// Row-partial reduction: one partial per row, rows summed in order.
template <class RowFn>
double reduce_rows(std::size_t size, std::size_t row_len, RowFn&& row_sum) {
  const std::size_t rows = row_len == 0 ? 0 : (size + row_len - 1) / row_len;
  std::vector<double> partial(rows, 0.0);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t r = 0; r < static_cast<std::ptrdiff_t>(rows); ++r) {
    const std::size_t begin = static_cast<std::size_t>(r) * row_len;
    const std::size_t end = std::min(size, begin + row_len);
    partial[static_cast<std::size_t>(r)] = row_sum(begin, end);
  }
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

}  // namespace

namespace serial {

double sum(std::span<const double> x, std::size_t) {
  double s = 0.0;
  for (double v : x) s += v;
  return s;
}

double dot(std::span<const double> a, std::span<const double> b, std::size_t) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

MaxLoc max_loc(std::span<const double> x) {
  MaxLoc best{-kInf, 0};
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] > best.value) best = {x[i], i};
  }
  return best;
}

double max_abs(std::span<const double> x) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  return m;
}

double exp_sum(std::span<const double> v, double alpha, double shift, std::size_t) {
  double s = 0.0;
  for (double x : v) s += std::exp(alpha * x - shift);
  return s;
}

double expm1_sum(std::span<const double> v, double alpha, std::size_t) {
  double s = 0.0;
  for (double x : v) s += std::expm1(alpha * x);
  return s;
}

double exp_moment(std::span<const double> v, double alpha, double shift, std::size_t) {
  double s = 0.0;
  for (double x : v) s += x * std::exp(alpha * x - shift);
  return s;
}

double w_exp_w_sum(std::span<const double> w, std::size_t) {
  double s = 0.0;
  for (double x : w) s += x * std::exp(x);
  return s;
}

void add_scaled_exp(std::span<const double> v, double alpha, double shift, double coeff,
                    std::span<double> out) {
  for (std::size_t i = 0; i < v.size(); ++i) out[i] += coeff * std::exp(alpha * v[i] - shift);
}

SubsetBest scan_subsets(std::span<const double> mass, std::span<const double> circulation,
                        std::uint64_t first, std::uint64_t last) {
  SubsetBest best = empty_best();
  for (std::uint64_t mask = first; mask < last; ++mask) {
    const SubsetBest cand = evaluate_mask(mass, circulation, mask);
    if (cand.mask != 0 && better(cand, best)) best = cand;
  }
  return best;
}

}  // namespace serial

namespace omp {

double sum(std::span<const double> x, std::size_t row_len) {
  return reduce_rows(x.size(), row_len, [&](std::size_t b, std::size_t e) {
    double s = 0.0;
    for (std::size_t i = b; i < e; ++i) s += x[i];
    return s;
  });
}

double dot(std::span<const double> a, std::span<const double> b, std::size_t row_len) {
  return reduce_rows(a.size(), row_len, [&](std::size_t lo, std::size_t hi) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += a[i] * b[i];
    return s;
  });
}

MaxLoc max_loc(std::span<const double> x) {
  // Per-thread winners merged in thread order; the lowest index wins ties.
  const int threads = omp_get_max_threads();
  std::vector<MaxLoc> local(static_cast<std::size_t>(threads), MaxLoc{-kInf, x.size()});
#pragma omp parallel
  {
    MaxLoc mine{-kInf, x.size()};
#pragma omp for schedule(static) nowait
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(x.size()); ++i) {
      const auto k = static_cast<std::size_t>(i);
      if (x[k] > mine.value) mine = {x[k], k};
    }
    local[static_cast<std::size_t>(omp_get_thread_num())] = mine;
  }
  MaxLoc best{-kInf, 0};
  for (const MaxLoc& m : local) {
    if (m.index == x.size()) continue;
    if (m.value > best.value || (m.value == best.value && m.index < best.index)) best = m;
  }
  return best;
}

double max_abs(std::span<const double> x) {
  double m = 0.0;
#pragma omp parallel for reduction(max : m) schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(x.size()); ++i) {
    m = std::max(m, std::abs(x[static_cast<std::size_t>(i)]));
  }
  return m;
}

double exp_sum(std::span<const double> v, double alpha, double shift, std::size_t row_len) {
  return reduce_rows(v.size(), row_len, [&](std::size_t b, std::size_t e) {
    double s = 0.0;
    for (std::size_t i = b; i < e; ++i) s += std::exp(alpha * v[i] - shift);
    return s;
  });
}

double expm1_sum(std::span<const double> v, double alpha, std::size_t row_len) {
  return reduce_rows(v.size(), row_len, [&](std::size_t b, std::size_t e) {
    double s = 0.0;
    for (std::size_t i = b; i < e; ++i) s += std::expm1(alpha * v[i]);
    return s;
  });
}

double exp_moment(std::span<const double> v, double alpha, double shift, std::size_t row_len) {
  return reduce_rows(v.size(), row_len, [&](std::size_t b, std::size_t e) {
    double s = 0.0;
    for (std::size_t i = b; i < e; ++i) s += v[i] * std::exp(alpha * v[i] - shift);
    return s;
  });
}

double w_exp_w_sum(std::span<const double> w, std::size_t row_len) {
  return reduce_rows(w.size(), row_len, [&](std::size_t b, std::size_t e) {
    double s = 0.0;
    for (std::size_t i = b; i < e; ++i) s += w[i] * std::exp(w[i]);
    return s;
  });
}

void add_scaled_exp(std::span<const double> v, double alpha, double shift, double coeff,
                    std::span<double> out) {
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(v.size()); ++i) {
    const auto k = static_cast<std::size_t>(i);
    out[k] += coeff * std::exp(alpha * v[k] - shift);
  }
}

SubsetBest scan_subsets(std::span<const double> mass, std::span<const double> circulation,
                        std::uint64_t first, std::uint64_t last) {
  if (last <= first) return empty_best();
  constexpr std::uint64_t kBlock = 4096;
  const std::uint64_t blocks = (last - first + kBlock - 1) / kBlock;
  std::vector<SubsetBest> winners(blocks, empty_best());
#pragma omp parallel for schedule(dynamic, 4)
  for (std::int64_t b = 0; b < static_cast<std::int64_t>(blocks); ++b) {
    const std::uint64_t lo = first + static_cast<std::uint64_t>(b) * kBlock;
    const std::uint64_t hi = std::min(last, lo + kBlock);
    winners[static_cast<std::size_t>(b)] = serial::scan_subsets(mass, circulation, lo, hi);
  }
  SubsetBest best = empty_best();
  for (const SubsetBest& w : winners) {
    if (w.mask != 0 && better(w, best)) best = w;
  }
  return best;
}

}  // namespace omp

}  // namespace vortexmf::kernels
