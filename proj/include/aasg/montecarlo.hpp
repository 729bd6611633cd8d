#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "aasg/galerkin.hpp"

// Monte Carlo baseline: per-sample deterministic solves with streaming
// mean/variance accumulation. Samples are drawn from counter-based
// substreams keyed by (seed, sample index, dimension), so the result is a
// pure function of (seed, M) no matter how the samples are scheduled.
// Aggregation runs over fixed-size chunks merged in chunk order, which makes
// the output fields bitwise identical for every thread count.

namespace aasg {

// Uniform draw on [-1,1] for the given counter triple.
double mc_uniform(std::uint64_t seed, std::uint64_t sample, std::uint32_t dim);

struct McAccumulator {
  std::size_t count = 0;
  std::vector<double> mean;
  std::vector<double> m2;  // sum of squared deviations

  explicit McAccumulator(std::size_t n = 0) : mean(n, 0.0), m2(n, 0.0) {}

  void add(std::span<const double> sample);
  void merge(const McAccumulator& other);          // Chan's pairwise formula
  std::vector<double> variance() const;            // unbiased, needs count >= 2
};

// Per-sample deterministic solve A(xi) u = f with A(xi) combined from the
// precomputed per-mode matrices on their shared sparsity pattern, solved by
// mean-preconditioned CG.
class McSolver {
 public:
  McSolver(const GalerkinOperatorSet& ops, double tol = 1e-8, int maxit = 0);

  GridFunction solve(std::span<const double> xi, SolveReport* report = nullptr) const;

 private:
  const GalerkinOperatorSet* ops_;
  double tol_;
  int maxit_;
  SparseMatrix pattern_;                      // union pattern, values rewritten per sample
  std::vector<std::vector<int>> scatter_;     // per-mode nnz slot -> union slot
};

// One-off convenience wrapper; builds the operator set internally.
GridFunction sample_solve(const KlField& field, const Grid2d& grid,
                          std::span<const double> xi);

struct McOptions {
  std::size_t samples = 0;
  std::uint64_t seed = 1;
  int threads = 1;
  double solver_tol = 1e-8;
  int solver_maxit = 0;
};

struct McRunReport {
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  int threads = 1;
  double seconds = 0.0;        // wall time of the whole run
  double solve_seconds = 0.0;  // summed linear-solve time
  double mean_iterations = 0.0;
};

struct McResult {
  GridFunction mean;
  GridFunction variance;
  McRunReport report;
};

McResult run_mc(const GalerkinOperatorSet& ops, const McOptions& opts);
McResult run_mc(const KlField& field, const Grid2d& grid, const McOptions& opts);

}  // namespace aasg
