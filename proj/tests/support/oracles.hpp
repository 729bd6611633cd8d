#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <vector>

#include "aasg/multiindex.hpp"
#include "aasg/sparsela.hpp"

// Test-side oracles, deliberately independent of the library's solve paths:
// dense Gaussian elimination, dense Kronecker products, and a cyclic Jacobi
// eigensolver for the Nystrom kernel checks.

namespace aasg::test {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ULL) {}

  std::uint64_t next();
  double uniform(double lo, double hi);
  int uniform_int(int lo, int hi);  // inclusive bounds

 private:
  std::uint64_t state_;
};

using Dense = std::vector<std::vector<double>>;

Dense zeros(std::size_t rows, std::size_t cols);
Dense to_dense(const SparseMatrix& A);
std::vector<double> dense_matvec(const Dense& A, const std::vector<double>& x);
Dense kron_dense(const Dense& G, const Dense& A);

// Partial-pivoting Gaussian elimination.
std::vector<double> gauss_solve(Dense A, std::vector<double> b);

// Eigenvalues of a symmetric matrix, descending. Cyclic Jacobi sweeps until
// the off-diagonal mass is below tol.
std::vector<double> jacobi_eigenvalues(Dense A, double tol = 1e-12,
                                       int max_sweeps = 50);

// Top-k eigenvalues of a symmetric positive matrix by block subspace
// iteration with Rayleigh-Ritz extraction; handles the tied pairs of the
// tensor-product kernels.
std::vector<double> topk_eigenvalues(const Dense& A, int k, int iters = 150);

// Full tensor Gauss grid over [-1,1]^N with probabilist weights.
struct TensorGrid {
  TensorGrid(int N, int pts_per_dim);

  int N;
  int m;                             // points per dimension
  std::vector<double> nodes1d, w1d;  // the underlying 1-D rule
  std::size_t size() const;          // m^N
  void point(std::size_t q, std::span<double> xi) const;
  double weight(std::size_t q) const;
};

// Entrywise tensor-quadrature oracle for <Theta Phi_j Phi_k> with Theta = 1
// (m = 0) or Theta = xi_m. Independent of the recurrence-based assembly.
Dense g_matrix_oracle(const IndexCatalog& catalog, int m, int pts_per_dim);

// gPC coefficients of every ANOVA component of a scalar function on
// [-1,1]^N, via the integral definitions evaluated on a tensor Gauss grid.
// coefficients[T][q] pairs with indices[q], which runs over all |i| <= p.
struct AnovaProjection {
  std::vector<MultiIndex> indices;
  std::map<AnovaSet, std::vector<double>> coefficients;
};
AnovaProjection anova_gpc_projection(
    const std::function<double(std::span<const double>)>& u, int N, int p,
    int pts_per_dim);

}  // namespace aasg::test
