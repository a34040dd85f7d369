#pragma once

// Data-parallel inner loops.
//
// Every kernel exists twice: `serial` is the plain single-accumulator loop
// kept as the reference, `omp` is the OpenMP version used by the library.
// The OpenMP reductions accumulate one partial per row and then add the row
// partials in row order, so their output does not depend on the thread
// count. They agree with the serial loops up to summation-order rounding.

#include <cstddef>
#include <cstdint>
#include <span>

namespace vortexmf::kernels {

struct MaxLoc {
  double value;
  std::size_t index;  // first index attaining the maximum
};

/// Best subset found by a scan. Mask bit i selects the i-th atom of the side
/// in descending |alpha| order.
struct SubsetBest {
  double value;
  int cardinality;
  std::uint64_t mask;  // 0 when nothing with nonzero circulation was seen
};

/// Strict "better than" used by every subset scan and merge: smaller value,
/// then fewer atoms. Equal candidates keep the one seen first.
bool better(const SubsetBest& candidate, const SubsetBest& incumbent);

namespace serial {

double sum(std::span<const double> x, std::size_t row_len);
double dot(std::span<const double> a, std::span<const double> b, std::size_t row_len);
MaxLoc max_loc(std::span<const double> x);
double max_abs(std::span<const double> x);

/// sum exp(alpha v - shift)
double exp_sum(std::span<const double> v, double alpha, double shift, std::size_t row_len);
/// sum expm1(alpha v), accurate when alpha v is small everywhere
double expm1_sum(std::span<const double> v, double alpha, std::size_t row_len);
/// sum v exp(alpha v - shift)
double exp_moment(std::span<const double> v, double alpha, double shift, std::size_t row_len);
/// sum w exp(w)
double w_exp_w_sum(std::span<const double> w, std::size_t row_len);
/// out += coeff exp(alpha v - shift)
void add_scaled_exp(std::span<const double> v, double alpha, double shift, double coeff,
                    std::span<double> out);

/// Scans masks in [first, last) over the atoms given by (mass, circulation)
/// in side order.
SubsetBest scan_subsets(std::span<const double> mass, std::span<const double> circulation,
                        std::uint64_t first, std::uint64_t last);

}  // namespace serial

namespace omp {

double sum(std::span<const double> x, std::size_t row_len);
double dot(std::span<const double> a, std::span<const double> b, std::size_t row_len);
MaxLoc max_loc(std::span<const double> x);
double max_abs(std::span<const double> x);
double exp_sum(std::span<const double> v, double alpha, double shift, std::size_t row_len);
double expm1_sum(std::span<const double> v, double alpha, std::size_t row_len);
double exp_moment(std::span<const double> v, double alpha, double shift, std::size_t row_len);
double w_exp_w_sum(std::span<const double> w, std::size_t row_len);
void add_scaled_exp(std::span<const double> v, double alpha, double shift, double coeff,
                    std::span<double> out);

/// Splits [first, last) into fixed-size blocks, scans them in parallel and
/// merges block winners in block order. Same answer as serial::scan_subsets.
SubsetBest scan_subsets(std::span<const double> mass, std::span<const double> circulation,
                        std::uint64_t first, std::uint64_t last);

}  // namespace omp

}  // namespace vortexmf::kernels
