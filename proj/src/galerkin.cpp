#include "aasg/galerkin.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "aasg/kernels.hpp"
#include "aasg/polyquad.hpp"

namespace aasg {

SparseMatrix assemble_g(const IndexCatalog& catalog, int m) {
  const std::size_t size = catalog.size();
  if (m == 0) return SparseMatrix::identity(size);
  if (m < 0 || m > catalog.dimension())
    throw std::invalid_argument("assemble_g: dimension label out of range");

  std::vector<std::size_t> ti, tj;
  std::vector<double> tv;
  const std::size_t d = static_cast<std::size_t>(m - 1);
  for (std::size_t j = 0; j < size; ++j) {
    MultiIndex probe = catalog.entry(j);
    const int deg = probe.deg[d];
    // Each row emits both neighbor columns, so the pair (j,k),(k,j) shows up
    // exactly once per row with the same value b_max(deg_j, deg_k).
    probe.deg[d] = deg + 1;
    if (auto pos = catalog.position(probe); pos >= 0) {
      ti.push_back(j);
      tj.push_back(static_cast<std::size_t>(pos));
      tv.push_back(recurrence_beta(deg + 1));
    }
    if (deg >= 1) {
      probe.deg[d] = deg - 1;
      if (auto pos = catalog.position(probe); pos >= 0) {
        ti.push_back(j);
        tj.push_back(static_cast<std::size_t>(pos));
        tv.push_back(recurrence_beta(deg));
      }
    }
  }
  return SparseMatrix::from_triplets(size, size, std::move(ti), std::move(tj),
                                     std::move(tv));
}

std::vector<double> assemble_rhs(const IndexCatalog& catalog,
                                 const std::vector<double>& f_vec) {
  std::vector<double> rhs(catalog.size() * f_vec.size(), 0.0);
  std::copy(f_vec.begin(), f_vec.end(), rhs.begin());
  return rhs;
}

GalerkinOperatorSet build_operator_set(
    const Grid2d& grid, const KlField& field,
    const std::function<double(double, double)>& source) {
  if (field.a0.size() != grid.full_count())
    throw std::invalid_argument("build_operator_set: field sampled on a different grid");
  GalerkinOperatorSet ops;
  ops.grid = grid;
  ops.field = &field;
  ops.A.reserve(field.modes.size() + 1);
  ops.A.push_back(
      std::make_shared<const SparseMatrix>(assemble_stiffness(grid, field.a0)));
  for (const auto& mode : field.modes)
    ops.A.push_back(
        std::make_shared<const SparseMatrix>(assemble_stiffness(grid, mode)));
  ops.f = assemble_load(grid, source);
  ops.mean_factor = std::make_shared<const CholeskyFactor>(*ops.A.front());
  return ops;
}

std::pair<GpcCoefficients, SolveReport> solve_sgm(const IndexCatalog& catalog,
                                                  const GalerkinOperatorSet& ops,
                                                  const SgmOptions& opts,
                                                  const GpcCoefficients* warm) {
  const std::size_t n_stoch = catalog.size();
  const std::size_t n_phy = ops.f.size();
  const int N = catalog.dimension();
  if (static_cast<std::size_t>(N) + 1 != ops.A.size())
    throw std::invalid_argument("solve_sgm: operator set dimension mismatch");

  KronSumOperator op;
  op.add_term(SparseMatrix::identity(n_stoch), ops.A[0]);
  for (int m = 1; m <= N; ++m) op.add_term(assemble_g(catalog, m), ops.A[m]);

  const std::vector<double> rhs = assemble_rhs(catalog, ops.f);
  MeanBlockPrecond precond(ops.mean_factor, n_stoch);

  GpcCoefficients coeffs;
  coeffs.catalog = catalog;
  coeffs.n_phy = n_phy;
  coeffs.data.assign(n_stoch * n_phy, 0.0);
  if (warm) {
    // Inject by multi-index identity; new entries start from zero.
    for (std::size_t j = 0; j < warm->catalog.size(); ++j) {
      const auto pos = catalog.position(warm->catalog.entry(j));
      if (pos >= 0) {
        auto dst = coeffs.block(static_cast<std::size_t>(pos));
        auto src = warm->block(j);
        std::copy(src.begin(), src.end(), dst.begin());
      }
    }
  }

  const int maxit = opts.maxit > 0 ? opts.maxit : 10 * static_cast<int>(n_stoch);
  SolveReport rep = cg(op, &precond, rhs, coeffs.data, opts.tol, maxit);
  if (!rep.converged)
    throw SolveFailure("solve_sgm: CG did not reach the requested tolerance", rep);
  return {std::move(coeffs), rep};
}

std::pair<GpcCoefficients, SolveReport> solve_sgm(const IndexCatalog& catalog,
                                                  const KlField& field,
                                                  const Grid2d& grid,
                                                  const SgmOptions& opts,
                                                  const GpcCoefficients* warm) {
  return solve_sgm(catalog, build_operator_set(grid, field), opts, warm);
}

GridFunction component_variance(const GpcCoefficients& coeffs,
                                const AnovaSet& T) {
  if (T.order() == 0)
    throw std::invalid_argument("component_variance: the mean term carries no variance");
  const auto& range = coeffs.catalog.range(T);
  GridFunction var(coeffs.n_phy, 0.0);
  for (std::size_t q = 0; q < range.count; ++q)
    kern::accumulate_squares(coeffs.block(range.begin + q).data(), var.data(),
                             coeffs.n_phy);
  return var;
}

std::pair<GridFunction, GridFunction> total_statistics(
    const GpcCoefficients& coeffs) {
  const auto mean_block = coeffs.block(0);
  GridFunction mean(mean_block.begin(), mean_block.end());
  GridFunction var(coeffs.n_phy, 0.0);
  for (std::size_t j = 1; j < coeffs.catalog.size(); ++j)
    kern::accumulate_squares(coeffs.block(j).data(), var.data(), coeffs.n_phy);
  return {std::move(mean), std::move(var)};
}

GridFunction surrogate_eval(const GpcCoefficients& coeffs,
                            std::span<const double> xi) {
  const IndexCatalog& cat = coeffs.catalog;
  if (xi.size() != static_cast<std::size_t>(cat.dimension()))
    throw std::invalid_argument("surrogate_eval: dimension mismatch");

  // Univariate values phi_0..phi_p per dimension, then per-entry products.
  std::vector<std::vector<double>> phi(xi.size());
  for (std::size_t d = 0; d < xi.size(); ++d)
    phi[d] = legendre_eval_all(cat.degree(), xi[d]);

  GridFunction out(coeffs.n_phy, 0.0);
  for (std::size_t j = 0; j < cat.size(); ++j) {
    double w = 1.0;
    const auto& deg = cat.entry(j).deg;
    for (std::size_t d = 0; d < deg.size(); ++d)
      if (deg[d] != 0) w *= phi[d][deg[d]];
    kern::axpy(w, coeffs.block(j).data(), out.data(), coeffs.n_phy);
  }
  return out;
}

}  // namespace aasg
