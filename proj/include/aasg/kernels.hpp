#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

// Dense vector kernels used in the inner loops of the Krylov solvers and the
// statistics accumulators. Each kernel has a scalar reference implementation
// and, on x86-64, an AVX2/FMA variant. The variant is selected once at
// startup from CPUID; set_backend() overrides the choice (used by the
// equivalence tests and by the AASG_KERNEL_BACKEND environment variable).
//
// SIMD variants reassociate reductions, so dot() may differ from the scalar
// path by a few ulp. Within one process the dispatch is fixed, hence all
// results are deterministic for a given machine and backend.

namespace aasg::kern {

enum class Backend { scalar, avx2 };

Backend preferred_backend();
Backend active_backend();
void set_backend(Backend b);  // throws std::runtime_error if unsupported
bool backend_supported(Backend b);
std::string backend_name(Backend b);

// y += a*x
void axpy(double a, const double* x, double* y, std::size_t n);

// y = x + b*y
void xpby(const double* x, double b, double* y, std::size_t n);

double dot(const double* x, const double* y, std::size_t n);

// acc += x.^2
void accumulate_squares(const double* x, double* acc, std::size_t n);

// One Welford update with weight 1/count:
//   d = x - mean; mean += d*inv_count; m2 += d*(x - mean)
void welford_step(const double* x, double* mean, double* m2, double inv_count,
                  std::size_t n);

// y = A*x, CSR arrays (row_ptr has nrows+1 entries, columns sorted per row)
void csr_matvec(const int* row_ptr, const int* col_idx, const double* vals,
                std::size_t nrows, const double* x, double* y);

namespace detail {
struct KernelTable {
  void (*axpy)(double, const double*, double*, std::size_t);
  void (*xpby)(const double*, double, double*, std::size_t);
  double (*dot)(const double*, const double*, std::size_t);
  void (*accumulate_squares)(const double*, double*, std::size_t);
  void (*welford_step)(const double*, double*, double*, double, std::size_t);
  void (*csr_matvec)(const int*, const int*, const double*, std::size_t,
                     const double*, double*);
};
const KernelTable& scalar_table();
const KernelTable& avx2_table();  // null entries when not compiled in
}  // namespace detail

}  // namespace aasg::kern
