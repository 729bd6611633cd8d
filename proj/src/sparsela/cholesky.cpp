#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "aasg/kernels.hpp"
#include "aasg/sparsela.hpp"

namespace aasg {

// Band storage: row i keeps L(i, i-band .. i) in L_[i*(band+1) .. ], diagonal
// last. Entries left of column 0 are padding zeros.

CholeskyFactor::CholeskyFactor(const SparseMatrix& A) {
  if (A.rows() != A.cols())
    throw std::invalid_argument("cholesky: matrix must be square");
  dim_ = A.rows();

  band_ = 0;
  for (std::size_t r = 0; r < dim_; ++r)
    for (int k = A.row_ptr()[r]; k < A.row_ptr()[r + 1]; ++k) {
      const std::ptrdiff_t d = static_cast<std::ptrdiff_t>(r) - A.col_idx()[k];
      band_ = std::max<std::size_t>(band_, static_cast<std::size_t>(std::abs(d)));
    }

  const std::size_t w = band_ + 1;
  L_.assign(dim_ * w, 0.0);

  // Dense band copy of the lower triangle of A.
  std::vector<double> Ab(dim_ * w, 0.0);
  for (std::size_t r = 0; r < dim_; ++r)
    for (int k = A.row_ptr()[r]; k < A.row_ptr()[r + 1]; ++k) {
      const std::size_t c = static_cast<std::size_t>(A.col_idx()[k]);
      if (c <= r) Ab[r * w + (band_ - (r - c))] = A.values()[k];
    }

  for (std::size_t i = 0; i < dim_; ++i) {
    const std::size_t j0 = band_ > i ? 0 : i - band_;
    for (std::size_t j = j0; j <= i; ++j) {
      // Dot over the overlapping band prefixes of rows i and j.
      const std::size_t k0 = j0;  // k >= i-band dominates k >= j-band
      const std::size_t len = j - k0;
      double s = Ab[i * w + (band_ - (i - j))];
      if (len > 0)
        s -= kern::dot(&L_[i * w + (band_ - (i - k0))],
                       &L_[j * w + (band_ - (j - k0))], len);
      if (j < i) {
        L_[i * w + (band_ - (i - j))] = s / L_[j * w + band_];
      } else {
        if (!(s > 0.0))
          throw std::runtime_error("cholesky: matrix is not positive definite");
        L_[i * w + band_] = std::sqrt(s);
      }
    }
  }
}

void CholeskyFactor::solve(std::span<const double> b, std::span<double> x) const {
  if (b.size() != dim_ || x.size() != dim_)
    throw std::invalid_argument("cholesky solve: dimension mismatch");
  const std::size_t w = band_ + 1;

  // Forward substitution L y = b (y stored in x).
  for (std::size_t i = 0; i < dim_; ++i) {
    const std::size_t k0 = band_ > i ? 0 : i - band_;
    const std::size_t len = i - k0;
    double s = b[i];
    if (len > 0) s -= kern::dot(&L_[i * w + (band_ - (i - k0))], &x[k0], len);
    x[i] = s / L_[i * w + band_];
  }

  // Backward substitution L^T x = y; column i of L is strided in band rows.
  for (std::size_t ii = dim_; ii-- > 0;) {
    const std::size_t kmax = std::min(dim_ - 1, ii + band_);
    double s = x[ii];
    for (std::size_t k = ii + 1; k <= kmax; ++k)
      s -= L_[k * w + (band_ - (k - ii))] * x[k];
    x[ii] = s / L_[ii * w + band_];
  }
}

double CholeskyFactor::entry(std::size_t i, std::size_t j) const {
  if (i >= dim_ || j >= dim_) throw std::out_of_range("cholesky entry");
  if (j > i || i - j > band_) return 0.0;
  return L_[i * (band_ + 1) + (band_ - (i - j))];
}

std::vector<double> CholeskyFactor::solve(std::span<const double> b) const {
  std::vector<double> x(dim_);
  solve(b, x);
  return x;
}

}  // namespace aasg
