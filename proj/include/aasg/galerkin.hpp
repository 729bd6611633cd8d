#pragma once

#include <functional>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "aasg/fem.hpp"
#include "aasg/multiindex.hpp"
#include "aasg/randomfield.hpp"
#include "aasg/sparsela.hpp"

// Stochastic Galerkin assembly and solve for the affine diffusion problem.
// The coefficient is KL-affine, so the stochastic factors are Theta^(1) = 1
// (giving the identity under the orthonormal basis) and Theta^(m+1) = xi_m
// for m = 1..N. The xi_m factors G_m come straight from the three-term
// recurrence: entry (j,k) is nonzero iff the multi-indices agree outside
// dimension m and differ by one inside it, with value b_max(deg_j, deg_k).

namespace aasg {

struct GpcCoefficients {
  IndexCatalog catalog;
  std::size_t n_phy = 0;
  std::vector<double> data;  // block-major: catalog.size() blocks of n_phy

  std::span<double> block(std::size_t j) {
    return {data.data() + j * n_phy, n_phy};
  }
  std::span<const double> block(std::size_t j) const {
    return {data.data() + j * n_phy, n_phy};
  }
};

// Stochastic factor for dimension m (m = 0 is the mean term -> identity).
SparseMatrix assemble_g(const IndexCatalog& catalog, int m);

// h (x) f under the orthonormal basis: block 0 is f, the rest vanish.
std::vector<double> assemble_rhs(const IndexCatalog& catalog,
                                 const std::vector<double>& f_vec);

// Everything that depends on (grid, field) but not on the catalog: the
// per-mode stiffness matrices, the load vector, and the mean-matrix factor.
// Built once and reused across adaptive rounds and Monte Carlo samples.
struct GalerkinOperatorSet {
  Grid2d grid{2};
  const KlField* field = nullptr;
  std::vector<std::shared_ptr<const SparseMatrix>> A;  // A[0] = mean stiffness
  std::vector<double> f;
  std::shared_ptr<const CholeskyFactor> mean_factor;
};

GalerkinOperatorSet build_operator_set(
    const Grid2d& grid, const KlField& field,
    const std::function<double(double, double)>& source =
        [](double, double) { return 1.0; });

struct SgmOptions {
  double tol = 1e-8;
  int maxit = 0;  // 0 -> 10 * n_stoch
};

// Solves the coupled Galerkin system with mean-based preconditioned CG.
// warm, when given, seeds the initial guess by multi-index identity.
// Throws SolveFailure when CG does not reach tol.
std::pair<GpcCoefficients, SolveReport> solve_sgm(
    const IndexCatalog& catalog, const GalerkinOperatorSet& ops,
    const SgmOptions& opts = {}, const GpcCoefficients* warm = nullptr);

// Convenience overload that assembles the operator set internally.
std::pair<GpcCoefficients, SolveReport> solve_sgm(
    const IndexCatalog& catalog, const KlField& field, const Grid2d& grid,
    const SgmOptions& opts = {}, const GpcCoefficients* warm = nullptr);

// Var u_T = sum of squared coefficient fields over the component's indices.
// Rejects the empty set (the mean carries no variance).
GridFunction component_variance(const GpcCoefficients& coeffs,
                                const AnovaSet& T);

// mean = block 0; variance = nodewise sum of squares of blocks 1..end.
std::pair<GridFunction, GridFunction> total_statistics(
    const GpcCoefficients& coeffs);

// sum_j block_j * Phi_j(xi), with Phi evaluated as univariate products.
GridFunction surrogate_eval(const GpcCoefficients& coeffs,
                            std::span<const double> xi);

}  // namespace aasg
