#include "aasg/kernels.hpp"

namespace aasg::kern::detail {

namespace {

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void xpby_scalar(const double* x, double b, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = x[i] + b * y[i];
}

double dot_scalar(const double* x, const double* y, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}

void accumulate_squares_scalar(const double* x, double* acc, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) acc[i] += x[i] * x[i];
}

void welford_step_scalar(const double* x, double* mean, double* m2,
                         double inv_count, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double d = x[i] - mean[i];
    mean[i] += d * inv_count;
    m2[i] += d * (x[i] - mean[i]);
  }
}

void csr_matvec_scalar(const int* row_ptr, const int* col_idx,
                       const double* vals, std::size_t nrows, const double* x,
                       double* y) {
  for (std::size_t r = 0; r < nrows; ++r) {
    double s = 0.0;
    for (int k = row_ptr[r]; k < row_ptr[r + 1]; ++k) s += vals[k] * x[col_idx[k]];
    y[r] = s;
  }
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable t{axpy_scalar,
                             xpby_scalar,
                             dot_scalar,
                             accumulate_squares_scalar,
                             welford_step_scalar,
                             csr_matvec_scalar};
  return t;
}

}  // namespace aasg::kern::detail
