#include "aasg/kernels.hpp"

// Compiled with -mavx2 -mfma; only ever called after a CPUID check. Without
// those flags this TU degrades to the null table and dispatch stays scalar.

#if defined(__AVX2__) && defined(__FMA__)
#define AASG_HAVE_AVX2_TU 1
#include <immintrin.h>
#else
#define AASG_HAVE_AVX2_TU 0
#endif

namespace aasg::kern::detail {

#if AASG_HAVE_AVX2_TU

namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d swapped = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, swapped));
}

void axpy_avx2(double a, const double* x, double* y, std::size_t n) {
  const __m256d av = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d xv = _mm256_loadu_pd(x + i);
    __m256d yv = _mm256_loadu_pd(y + i);
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(av, xv, yv));
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void xpby_avx2(const double* x, double b, double* y, std::size_t n) {
  const __m256d bv = _mm256_set1_pd(b);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d xv = _mm256_loadu_pd(x + i);
    __m256d yv = _mm256_loadu_pd(y + i);
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(bv, yv, xv));
  }
  for (; i < n; ++i) y[i] = x[i] + b * y[i];
}

double dot_avx2(const double* x, const double* y, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc0);
  }
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

void accumulate_squares_avx2(const double* x, double* acc, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d xv = _mm256_loadu_pd(x + i);
    __m256d av = _mm256_loadu_pd(acc + i);
    _mm256_storeu_pd(acc + i, _mm256_fmadd_pd(xv, xv, av));
  }
  for (; i < n; ++i) acc[i] += x[i] * x[i];
}

void welford_step_avx2(const double* x, double* mean, double* m2,
                       double inv_count, std::size_t n) {
  const __m256d wv = _mm256_set1_pd(inv_count);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d xv = _mm256_loadu_pd(x + i);
    __m256d mv = _mm256_loadu_pd(mean + i);
    __m256d d = _mm256_sub_pd(xv, mv);
    mv = _mm256_fmadd_pd(d, wv, mv);
    __m256d m2v = _mm256_loadu_pd(m2 + i);
    m2v = _mm256_fmadd_pd(d, _mm256_sub_pd(xv, mv), m2v);
    _mm256_storeu_pd(mean + i, mv);
    _mm256_storeu_pd(m2 + i, m2v);
  }
  for (; i < n; ++i) {
    const double d = x[i] - mean[i];
    mean[i] += d * inv_count;
    m2[i] += d * (x[i] - mean[i]);
  }
}

void csr_matvec_avx2(const int* row_ptr, const int* col_idx, const double* vals,
                     std::size_t nrows, const double* x, double* y) {
  for (std::size_t r = 0; r < nrows; ++r) {
    int k = row_ptr[r];
    const int end = row_ptr[r + 1];
    __m256d acc = _mm256_setzero_pd();
    for (; k + 4 <= end; k += 4) {
      __m128i idx = _mm_loadu_si128(reinterpret_cast<const __m128i*>(col_idx + k));
      __m256d xv = _mm256_i32gather_pd(x, idx, 8);
      acc = _mm256_fmadd_pd(_mm256_loadu_pd(vals + k), xv, acc);
    }
    double s = hsum(acc);
    for (; k < end; ++k) s += vals[k] * x[col_idx[k]];
    y[r] = s;
  }
}

}  // namespace

const KernelTable& avx2_table() {
  static const KernelTable t{axpy_avx2,
                             xpby_avx2,
                             dot_avx2,
                             accumulate_squares_avx2,
                             welford_step_avx2,
                             csr_matvec_avx2};
  return t;
}

#else

const KernelTable& avx2_table() {
  static const KernelTable t{nullptr, nullptr, nullptr, nullptr, nullptr, nullptr};
  return t;
}

#endif

}  // namespace aasg::kern::detail
