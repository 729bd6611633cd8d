#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

// Sparse kernel of the solver stack: CSR storage, the Kronecker-sum operator
// applied block-wise (the coupled matrix is never formed), preconditioned CG
// and Bi-CGSTAB, and a banded Cholesky factorization used both as a direct
// solver for the mean stiffness matrix and as the mean-based preconditioner.

namespace aasg {

class SparseMatrix {
 public:
  SparseMatrix() = default;

  // Builds CSR from triplets; duplicates are summed, explicit zeros dropped,
  // columns sorted within each row.
  static SparseMatrix from_triplets(std::size_t rows, std::size_t cols,
                                    std::vector<std::size_t> ti,
                                    std::vector<std::size_t> tj,
                                    std::vector<double> tv);
  static SparseMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t nnz() const { return vals_.size(); }

  const std::vector<int>& row_ptr() const { return row_ptr_; }
  const std::vector<int>& col_idx() const { return col_idx_; }
  const std::vector<double>& values() const { return vals_; }
  std::vector<double>& values() { return vals_; }  // same-pattern rescaling

  double at(std::size_t i, std::size_t j) const;  // 0 when not stored

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<int> row_ptr_{0};
  std::vector<int> col_idx_;
  std::vector<double> vals_;
};

// y = A x. Dimension mismatch -> std::invalid_argument.
void csr_matvec(const SparseMatrix& A, std::span<const double> x,
                std::span<double> y);
std::vector<double> csr_matvec(const SparseMatrix& A,
                               std::span<const double> x);

struct SolveReport {
  int iterations = 0;
  double relative_residual = 0.0;  // ||b - Op x|| / ||b||
  bool converged = false;
  double seconds = 0.0;
};

// Thrown when a Krylov recurrence hits NaN/Inf or an exact breakdown.
class SolverBreakdown : public std::runtime_error {
 public:
  SolverBreakdown(const std::string& what, int iteration)
      : std::runtime_error(what), iteration(iteration) {}
  int iteration;
};

// Thrown by callers that require convergence; carries the report.
class SolveFailure : public std::runtime_error {
 public:
  SolveFailure(const std::string& what, SolveReport rep)
      : std::runtime_error(what), report(rep) {}
  SolveReport report;
};

// Minimal abstract operator used by the Krylov methods.
class LinOp {
 public:
  virtual ~LinOp() = default;
  virtual std::size_t dim() const = 0;
  virtual void apply(std::span<const double> x, std::span<double> y) const = 0;
};

class IdentityOp final : public LinOp {
 public:
  explicit IdentityOp(std::size_t n) : n_(n) {}
  std::size_t dim() const override { return n_; }
  void apply(std::span<const double> x, std::span<double> y) const override;

 private:
  std::size_t n_;
};

class CsrOp final : public LinOp {
 public:
  explicit CsrOp(const SparseMatrix& A) : A_(&A) {}
  std::size_t dim() const override { return A_->rows(); }
  void apply(std::span<const double> x, std::span<double> y) const override {
    csr_matvec(*A_, x, y);
  }

 private:
  const SparseMatrix* A_;
};

// sum_i (G_i (x) A_i) acting on a vector of n_stoch blocks of length n_phy.
// Block j of the result is sum_i sum_k G_i(j,k) * (A_i u_k); each product
// A_i u_k is formed once per apply by walking G_i column-wise.
class KronSumOperator final : public LinOp {
 public:
  void add_term(SparseMatrix G, std::shared_ptr<const SparseMatrix> A);

  std::size_t n_stoch() const { return n_stoch_; }
  std::size_t n_phy() const { return n_phy_; }
  std::size_t terms() const { return G_.size(); }

  std::size_t dim() const override { return n_stoch_ * n_phy_; }
  void apply(std::span<const double> x, std::span<double> y) const override;

 private:
  struct Csc {
    std::vector<int> col_ptr, row_idx;
    std::vector<double> vals;
  };
  std::vector<SparseMatrix> G_;
  std::vector<Csc> G_csc_;
  std::vector<std::shared_ptr<const SparseMatrix>> A_;
  std::size_t n_stoch_ = 0, n_phy_ = 0;
};

// Banded LL^T of a symmetric positive definite CSR matrix. Throws
// std::runtime_error on a non-positive pivot.
class CholeskyFactor {
 public:
  explicit CholeskyFactor(const SparseMatrix& A);

  std::size_t dim() const { return dim_; }
  std::size_t bandwidth() const { return band_; }

  void solve(std::span<const double> b, std::span<double> x) const;
  std::vector<double> solve(std::span<const double> b) const;

  // L(i,j) of the factor (0 outside the band); mainly for verification.
  double entry(std::size_t i, std::size_t j) const;

 private:
  std::size_t dim_ = 0, band_ = 0;
  std::vector<double> L_;  // row-major, band_+1 entries per row, diag last
};

// Block-diagonal preconditioner I (x) A0^{-1}: one mean-matrix solve per
// stochastic block.
class MeanBlockPrecond final : public LinOp {
 public:
  MeanBlockPrecond(std::shared_ptr<const CholeskyFactor> factor,
                   std::size_t n_stoch)
      : factor_(std::move(factor)), n_stoch_(n_stoch) {}
  std::size_t dim() const override { return n_stoch_ * factor_->dim(); }
  void apply(std::span<const double> x, std::span<double> y) const override;

 private:
  std::shared_ptr<const CholeskyFactor> factor_;
  std::size_t n_stoch_;
};

// Preconditioned conjugate gradients for SPD op/precond. x is the initial
// guess on entry and the solution on exit. precond == nullptr means identity.
// Stops when ||b - Op x||/||b|| <= tol.
SolveReport cg(const LinOp& op, const LinOp* precond, std::span<const double> b,
               std::vector<double>& x, double tol, int maxit);

// Preconditioned Bi-CGSTAB for general square op. A rho/omega breakdown is
// retried once with a fresh shadow residual, then raises SolverBreakdown.
SolveReport bicgstab(const LinOp& op, const LinOp* precond,
                     std::span<const double> b, std::vector<double>& x,
                     double tol, int maxit);

}  // namespace aasg
