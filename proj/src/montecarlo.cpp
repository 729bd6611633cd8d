#include "aasg/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>

#include "aasg/kernels.hpp"

namespace aasg {

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::size_t kChunk = 64;  // fixed scheduling unit, thread-count free

}  // namespace

double mc_uniform(std::uint64_t seed, std::uint64_t sample, std::uint32_t dim) {
  std::uint64_t h = splitmix64(seed ^ 0x7e46a3c9d11b25f0ULL);
  h = splitmix64(h ^ sample);
  h = splitmix64(h ^ dim);
  const double u01 = static_cast<double>(h >> 11) * 0x1.0p-53;  // [0,1)
  return 2.0 * u01 - 1.0;
}

void McAccumulator::add(std::span<const double> sample) {
  if (sample.size() != mean.size())
    throw std::invalid_argument("McAccumulator: sample size mismatch");
  ++count;
  kern::welford_step(sample.data(), mean.data(), m2.data(), 1.0 / count,
                     sample.size());
}

void McAccumulator::merge(const McAccumulator& other) {
  if (other.count == 0) return;
  if (count == 0) {
    *this = other;
    return;
  }
  const double na = static_cast<double>(count);
  const double nb = static_cast<double>(other.count);
  const double nab = na + nb;
  for (std::size_t i = 0; i < mean.size(); ++i) {
    const double delta = other.mean[i] - mean[i];
    mean[i] += delta * (nb / nab);
    m2[i] += other.m2[i] + delta * delta * (na * nb / nab);
  }
  count += other.count;
}

std::vector<double> McAccumulator::variance() const {
  if (count < 2)
    throw std::domain_error("McAccumulator: variance needs at least two samples");
  std::vector<double> v(m2.size());
  const double inv = 1.0 / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = m2[i] * inv;
  return v;
}

McSolver::McSolver(const GalerkinOperatorSet& ops, double tol, int maxit)
    : ops_(&ops), tol_(tol), maxit_(maxit) {
  // Union sparsity pattern of all per-mode matrices. In practice it equals
  // the mean matrix's Q1 pattern, but modes can drop entries through exact
  // cancellation, so the union is built explicitly.
  const std::size_t n = ops.A.front()->rows();
  std::vector<std::size_t> ti, tj;
  std::vector<double> tv;
  for (const auto& A : ops.A)
    for (std::size_t r = 0; r < n; ++r)
      for (int q = A->row_ptr()[r]; q < A->row_ptr()[r + 1]; ++q) {
        ti.push_back(r);
        tj.push_back(static_cast<std::size_t>(A->col_idx()[q]));
        tv.push_back(1.0);  // placeholder; keeps every union slot stored
      }
  pattern_ = SparseMatrix::from_triplets(n, n, std::move(ti), std::move(tj),
                                         std::move(tv));

  scatter_.reserve(ops.A.size());
  for (const auto& A : ops.A) {
    std::vector<int> map(A->nnz());
    std::size_t q = 0;
    for (std::size_t r = 0; r < n; ++r)
      for (int s = A->row_ptr()[r]; s < A->row_ptr()[r + 1]; ++s, ++q) {
        const int col = A->col_idx()[s];
        int u = pattern_.row_ptr()[r];
        while (pattern_.col_idx()[u] != col) ++u;
        map[q] = u;
      }
    scatter_.push_back(std::move(map));
  }
}

GridFunction McSolver::solve(std::span<const double> xi,
                             SolveReport* report) const {
  const std::size_t nmodes = ops_->A.size() - 1;
  if (xi.size() != nmodes)
    throw std::invalid_argument("McSolver: sample dimension mismatch");

  // A(xi) = A_1 + sum_m xi_m A_{m+1}, accumulated on the union pattern.
  SparseMatrix A = pattern_;
  std::fill(A.values().begin(), A.values().end(), 0.0);
  for (std::size_t m = 0; m < ops_->A.size(); ++m) {
    const double w = m == 0 ? 1.0 : xi[m - 1];
    if (w == 0.0) continue;
    const auto& src = ops_->A[m]->values();
    const auto& map = scatter_[m];
    for (std::size_t q = 0; q < src.size(); ++q) A.values()[map[q]] += w * src[q];
  }

  CsrOp op(A);
  MeanBlockPrecond precond(ops_->mean_factor, 1);
  std::vector<double> u(ops_->f.size(), 0.0);
  const int maxit = maxit_ > 0 ? maxit_ : 10 * static_cast<int>(ops_->f.size());
  SolveReport rep = cg(op, &precond, ops_->f, u, tol_, maxit);
  if (report) *report = rep;
  if (!rep.converged) {
    std::ostringstream os;
    os << "sample_solve: CG did not converge at xi = (";
    for (std::size_t d = 0; d < xi.size(); ++d) os << (d ? "," : "") << xi[d];
    os << ")";
    throw SolveFailure(os.str(), rep);
  }
  return u;
}

GridFunction sample_solve(const KlField& field, const Grid2d& grid,
                          std::span<const double> xi) {
  const GalerkinOperatorSet ops = build_operator_set(grid, field);
  return McSolver(ops).solve(xi);
}

McResult run_mc(const GalerkinOperatorSet& ops, const McOptions& opts) {
  if (opts.samples < 2)
    throw std::invalid_argument("run_mc: need at least two samples");
  const auto t0 = std::chrono::steady_clock::now();

  const std::size_t n_phy = ops.f.size();
  const std::size_t n_dims = ops.A.size() - 1;
  const std::size_t n_chunks = (opts.samples + kChunk - 1) / kChunk;

  std::vector<McAccumulator> chunk_acc(n_chunks, McAccumulator(n_phy));
  std::vector<double> chunk_solve_seconds(n_chunks, 0.0);
  std::vector<std::uint64_t> chunk_iters(n_chunks, 0);

  const int n_threads = std::max(1, std::min<int>(opts.threads,
                                                  static_cast<int>(n_chunks)));
  std::atomic<std::size_t> next_chunk{0};
  std::vector<std::string> worker_error(n_threads);

  auto worker = [&](int wid) {
    try {
      const McSolver solver(ops, opts.solver_tol, opts.solver_maxit);
      std::vector<double> xi(n_dims);
      for (;;) {
        const std::size_t c = next_chunk.fetch_add(1);
        if (c >= n_chunks) break;
        const std::size_t begin = c * kChunk;
        const std::size_t end = std::min(opts.samples, begin + kChunk);
        for (std::size_t s = begin; s < end; ++s) {
          for (std::size_t d = 0; d < n_dims; ++d)
            xi[d] = mc_uniform(opts.seed, s, static_cast<std::uint32_t>(d));
          SolveReport rep;
          try {
            const GridFunction u = solver.solve(xi, &rep);
            chunk_acc[c].add(u);
          } catch (const std::exception& e) {
            throw std::runtime_error("sample " + std::to_string(s) + ": " + e.what());
          }
          chunk_solve_seconds[c] += rep.seconds;
          chunk_iters[c] += static_cast<std::uint64_t>(rep.iterations);
        }
      }
    } catch (const std::exception& e) {
      worker_error[wid] = e.what();
    }
  };

  if (n_threads == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (int w = 0; w < n_threads; ++w) pool.emplace_back(worker, w);
    for (auto& t : pool) t.join();
  }
  for (const auto& err : worker_error)
    if (!err.empty()) throw std::runtime_error("run_mc: " + err);

  McAccumulator total(n_phy);
  for (const auto& acc : chunk_acc) total.merge(acc);

  McResult result;
  result.mean = total.mean;
  result.variance = total.variance();
  result.report.samples = opts.samples;
  result.report.seed = opts.seed;
  result.report.threads = n_threads;
  result.report.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  double solve_s = 0.0;
  std::uint64_t iters = 0;
  for (std::size_t c = 0; c < n_chunks; ++c) {
    solve_s += chunk_solve_seconds[c];
    iters += chunk_iters[c];
  }
  result.report.solve_seconds = solve_s;
  result.report.mean_iterations =
      static_cast<double>(iters) / static_cast<double>(opts.samples);
  return result;
}

McResult run_mc(const KlField& field, const Grid2d& grid, const McOptions& opts) {
  return run_mc(build_operator_set(grid, field), opts);
}

}  // namespace aasg
