#include "aasg/kernels.hpp"

#include <cstdlib>
#include <stdexcept>

namespace aasg::kern {

namespace {

bool cpu_has_avx2() {
#if (defined(__x86_64__) || defined(_M_X64)) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Backend initial_backend() {
  if (const char* env = std::getenv("AASG_KERNEL_BACKEND")) {
    std::string s(env);
    if (s == "scalar") return Backend::scalar;
    if (s == "avx2" && backend_supported(Backend::avx2)) return Backend::avx2;
  }
  return preferred_backend();
}

struct State {
  Backend backend;
  const detail::KernelTable* table;
};

State& state() {
  static State s = [] {
    Backend b = initial_backend();
    return State{b, b == Backend::avx2 ? &detail::avx2_table()
                                       : &detail::scalar_table()};
  }();
  return s;
}

}  // namespace

bool backend_supported(Backend b) {
  switch (b) {
    case Backend::scalar:
      return true;
    case Backend::avx2:
      return detail::avx2_table().dot != nullptr && cpu_has_avx2();
  }
  return false;
}

Backend preferred_backend() {
  return backend_supported(Backend::avx2) ? Backend::avx2 : Backend::scalar;
}

Backend active_backend() { return state().backend; }

void set_backend(Backend b) {
  if (!backend_supported(b))
    throw std::runtime_error("kernel backend not supported on this host: " +
                             backend_name(b));
  state().backend = b;
  state().table =
      b == Backend::avx2 ? &detail::avx2_table() : &detail::scalar_table();
}

std::string backend_name(Backend b) {
  switch (b) {
    case Backend::scalar:
      return "scalar";
    case Backend::avx2:
      return "avx2";
  }
  return "?";
}

void axpy(double a, const double* x, double* y, std::size_t n) {
  state().table->axpy(a, x, y, n);
}

void xpby(const double* x, double b, double* y, std::size_t n) {
  state().table->xpby(x, b, y, n);
}

double dot(const double* x, const double* y, std::size_t n) {
  return state().table->dot(x, y, n);
}

void accumulate_squares(const double* x, double* acc, std::size_t n) {
  state().table->accumulate_squares(x, acc, n);
}

void welford_step(const double* x, double* mean, double* m2, double inv_count,
                  std::size_t n) {
  state().table->welford_step(x, mean, m2, inv_count, n);
}

void csr_matvec(const int* row_ptr, const int* col_idx, const double* vals,
                std::size_t nrows, const double* x, double* y) {
  state().table->csr_matvec(row_ptr, col_idx, vals, nrows, x, y);
}

}  // namespace aasg::kern
