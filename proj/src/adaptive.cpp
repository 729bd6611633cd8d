#include "aasg/adaptive.hpp"

#include <cmath>
#include <stdexcept>

namespace aasg {

void AasgConfig::validate() const {
  if (N < 1) throw std::invalid_argument("config: N must be >= 1");
  if (p < 1) throw std::invalid_argument("config: p must be >= 1");
  if (!(tol_adapt > 0.0)) throw std::invalid_argument("config: TOL must be > 0");
  if (grid_n < 2) throw std::invalid_argument("config: grid n must be >= 2");
  if (!(kl_c > 0.0)) throw std::invalid_argument("config: correlation length must be > 0");
  if (kl_sigma < 0.0) throw std::invalid_argument("config: sigma must be >= 0");
  if (!(solver_tol > 0.0)) throw std::invalid_argument("config: solver tol must be > 0");
}

std::map<AnovaSet, double> relative_variances(
    const GpcCoefficients& coeffs, const Grid2d& grid,
    const std::vector<std::vector<AnovaSet>>& active) {
  std::map<AnovaSet, double> norms;
  double denom = 0.0;
  for (const auto& order_sets : active) {
    for (const auto& T : order_sets) {
      const double nrm = l2_norm(grid, component_variance(coeffs, T));
      norms.emplace(T, nrm);
      denom += nrm;
    }
  }
  if (denom == 0.0)
    throw std::domain_error("relative_variances: all component variances vanish");
  for (auto& [T, v] : norms) v /= denom;
  return norms;
}

AasgResult run_aasg(const AasgConfig& config) {
  config.validate();
  const Grid2d grid(config.grid_n);
  const KlField field = kl_2d(config.kl_c, config.kl_sigma, config.N, grid,
                              config.kl_mean);
  return run_aasg(config, build_operator_set(grid, field));
}

AasgResult run_aasg(const AasgConfig& config, const GalerkinOperatorSet& ops) {
  config.validate();
  const Grid2d& grid = ops.grid;
  const int N = config.N;
  const int order_cap = config.max_order > 0 ? config.max_order : N;

  AasgResult result;
  result.positivity = positivity_report(*ops.field);

  SgmOptions solver_opts{config.solver_tol, config.solver_maxit};
  GpcCoefficients warm;
  bool have_warm = false;

  // Round 1 always runs with every singleton active; later rounds run while
  // the next order stays below N, within the cap, and has admissible sets.
  std::vector<AnovaSet> current = enumerate_anova_sets(1, N);
  int k = 1;
  for (;;) {
    result.active_sets.push_back(current);
    result.final_order = k;

    const IndexCatalog catalog = build_catalog(result.active_sets, config.p, N);
    auto [coeffs, report] =
        solve_sgm(catalog, ops, solver_opts, have_warm ? &warm : nullptr);

    RoundInfo round;
    round.k = k;
    round.active = current.size();
    round.catalog = catalog.size();
    round.solve = report;

    // The relative-variance denominator spans all active orders; the
    // threshold is applied to the order-k sets only.
    std::vector<AnovaSet> retained;
    try {
      result.gamma = relative_variances(coeffs, grid, result.active_sets);
      for (const auto& T : current)
        if (result.gamma.at(T) >= config.tol_adapt) retained.push_back(T);
    } catch (const std::domain_error&) {
      result.gamma.clear();  // e.g. sigma = 0: keep the mean-only solution
    }
    round.retained = retained.size();
    result.retained_sets.push_back(retained);
    result.rounds.push_back(round);

    warm = std::move(coeffs);
    have_warm = true;

    // Order k+1 sets need total degree k+1 just to appear; beyond p they
    // cannot carry variance and the extension stops.
    const int knext = k + 1;
    std::vector<AnovaSet> next;
    if (knext <= config.p) next = admissible_next(retained, N);
    if (knext >= N || knext > order_cap || next.empty()) break;
    current = std::move(next);
    k = knext;
  }

  result.coeffs = std::move(warm);
  auto [mean, variance] = total_statistics(result.coeffs);
  result.mean = std::move(mean);
  result.variance = std::move(variance);
  return result;
}

SgmResult run_full_sgm(const AasgConfig& config) {
  config.validate();
  const Grid2d grid(config.grid_n);
  const KlField field = kl_2d(config.kl_c, config.kl_sigma, config.N, grid,
                              config.kl_mean);
  return run_full_sgm(config, build_operator_set(grid, field));
}

SgmResult run_full_sgm(const AasgConfig& config, const GalerkinOperatorSet& ops) {
  config.validate();
  const IndexCatalog catalog = full_catalog(config.p, config.N);
  SgmOptions solver_opts{config.solver_tol, config.solver_maxit};
  auto [coeffs, report] = solve_sgm(catalog, ops, solver_opts, nullptr);
  SgmResult result;
  result.coeffs = std::move(coeffs);
  result.solve = report;
  auto [mean, variance] = total_statistics(result.coeffs);
  result.mean = std::move(mean);
  result.variance = std::move(variance);
  return result;
}

std::pair<double, double> compare_errors(const Grid2d& grid,
                                         const GridFunction& approx_mean,
                                         const GridFunction& approx_var,
                                         const GridFunction& ref_mean,
                                         const GridFunction& ref_var) {
  if (approx_mean.size() != ref_mean.size() || approx_var.size() != ref_var.size())
    throw std::invalid_argument("compare_errors: fields live on different grids");
  const double mean_norm = l2_norm(grid, ref_mean);
  const double var_norm = l2_norm(grid, ref_var);
  if (mean_norm == 0.0 || var_norm == 0.0)
    throw std::domain_error("compare_errors: reference field has zero norm");

  GridFunction diff(ref_mean.size());
  for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = ref_mean[i] - approx_mean[i];
  const double e_err = l2_norm(grid, diff) / mean_norm;
  for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = ref_var[i] - approx_var[i];
  const double v_err = l2_norm(grid, diff) / var_norm;
  return {e_err, v_err};
}

}  // namespace aasg
