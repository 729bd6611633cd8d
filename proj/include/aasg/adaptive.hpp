#pragma once

#include <map>
#include <vector>

#include "aasg/galerkin.hpp"

// The adaptive driver: solve on the current active sets, measure each
// component's share of the variance, threshold, and extend to the next order
// through the admissibility rule. Active sets are never pruned; the catalog
// of a later round extends the earlier one, so every solve warm-starts from
// its predecessor.

namespace aasg {

struct AasgConfig {
  int N = 10;              // random dimensions
  int p = 5;               // gPC total degree
  double tol_adapt = 1e-3; // relative-variance threshold
  int grid_n = 32;         // cells per axis
  double kl_c = 0.25;
  double kl_sigma = 0.25;
  double kl_mean = 1.0;
  double solver_tol = 1e-8;
  int solver_maxit = 0;  // 0 -> 10 * n_stoch
  int max_order = 0;     // extra cap on the ANOVA order; 0 = none

  void validate() const;  // throws std::invalid_argument
};

struct RoundInfo {
  int k = 0;                  // ANOVA order solved this round
  std::size_t active = 0;     // |J_k|
  std::size_t retained = 0;   // |J~_k|
  std::size_t catalog = 0;    // basis count of this round's solve
  SolveReport solve;
};

struct AasgResult {
  std::vector<std::vector<AnovaSet>> active_sets;    // J_1 .. J_K
  std::vector<std::vector<AnovaSet>> retained_sets;  // J~_1 .. J~_K
  int final_order = 0;                               // K = last solved order
  std::map<AnovaSet, double> gamma;                  // last round's table
  GpcCoefficients coeffs;
  GridFunction mean;
  GridFunction variance;
  std::vector<RoundInfo> rounds;
  double positivity = 0.0;  // worst-case coefficient lower bound
};

// gamma_T = ||Var u_T|| / sum_S ||Var u_S|| over the given active sets, with
// the lumped-mass L2 norm. Throws std::domain_error when every component
// variance vanishes.
std::map<AnovaSet, double> relative_variances(
    const GpcCoefficients& coeffs, const Grid2d& grid,
    const std::vector<std::vector<AnovaSet>>& active);

AasgResult run_aasg(const AasgConfig& config);
AasgResult run_aasg(const AasgConfig& config, const GalerkinOperatorSet& ops);

struct SgmResult {
  GpcCoefficients coeffs;
  GridFunction mean;
  GridFunction variance;
  SolveReport solve;
};

// Full total-degree solve (the non-adaptive reference method).
SgmResult run_full_sgm(const AasgConfig& config);
SgmResult run_full_sgm(const AasgConfig& config, const GalerkinOperatorSet& ops);

// Relative lumped-mass L2 errors of the mean and variance fields.
// Throws std::domain_error when a reference norm vanishes.
std::pair<double, double> compare_errors(const Grid2d& grid,
                                         const GridFunction& approx_mean,
                                         const GridFunction& approx_var,
                                         const GridFunction& ref_mean,
                                         const GridFunction& ref_var);

}  // namespace aasg
