#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "aasg/kernels.hpp"
#include "aasg/sparsela.hpp"

namespace aasg {

SparseMatrix SparseMatrix::from_triplets(std::size_t rows, std::size_t cols,
                                         std::vector<std::size_t> ti,
                                         std::vector<std::size_t> tj,
                                         std::vector<double> tv) {
  if (ti.size() != tj.size() || ti.size() != tv.size())
    throw std::invalid_argument("from_triplets: ragged triplet arrays");
  const std::size_t m = ti.size();
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (ti[a] != ti[b]) return ti[a] < ti[b];
    return tj[a] < tj[b];
  });

  SparseMatrix A;
  A.rows_ = rows;
  A.cols_ = cols;
  A.row_ptr_.assign(rows + 1, 0);
  A.col_idx_.reserve(m);
  A.vals_.reserve(m);

  std::size_t q = 0;
  for (std::size_t r = 0; r < rows; ++r) {
    while (q < m && ti[order[q]] == r) {
      const std::size_t j = tj[order[q]];
      if (j >= cols) throw std::invalid_argument("from_triplets: column out of range");
      double v = tv[order[q]];
      ++q;
      while (q < m && ti[order[q]] == r && tj[order[q]] == j) {
        v += tv[order[q]];
        ++q;
      }
      if (v != 0.0) {
        A.col_idx_.push_back(static_cast<int>(j));
        A.vals_.push_back(v);
      }
    }
    A.row_ptr_[r + 1] = static_cast<int>(A.col_idx_.size());
  }
  if (q != m) throw std::invalid_argument("from_triplets: row out of range");
  return A;
}

SparseMatrix SparseMatrix::identity(std::size_t n) {
  std::vector<std::size_t> i(n), j(n);
  std::iota(i.begin(), i.end(), 0);
  j = i;
  return from_triplets(n, n, std::move(i), std::move(j),
                       std::vector<double>(n, 1.0));
}

double SparseMatrix::at(std::size_t i, std::size_t j) const {
  if (i >= rows_ || j >= cols_) throw std::out_of_range("SparseMatrix::at");
  for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
    if (col_idx_[k] == static_cast<int>(j)) return vals_[k];
  return 0.0;
}

void csr_matvec(const SparseMatrix& A, std::span<const double> x,
                std::span<double> y) {
  if (x.size() != A.cols() || y.size() != A.rows())
    throw std::invalid_argument("csr_matvec: dimension mismatch");
  kern::csr_matvec(A.row_ptr().data(), A.col_idx().data(), A.values().data(),
                   A.rows(), x.data(), y.data());
}

std::vector<double> csr_matvec(const SparseMatrix& A,
                               std::span<const double> x) {
  std::vector<double> y(A.rows());
  csr_matvec(A, x, y);
  return y;
}

void IdentityOp::apply(std::span<const double> x, std::span<double> y) const {
  if (x.size() != n_ || y.size() != n_)
    throw std::invalid_argument("IdentityOp: dimension mismatch");
  std::copy(x.begin(), x.end(), y.begin());
}

void KronSumOperator::add_term(SparseMatrix G,
                               std::shared_ptr<const SparseMatrix> A) {
  if (G.rows() != G.cols() || A->rows() != A->cols())
    throw std::invalid_argument("KronSumOperator: factors must be square");
  if (G_.empty()) {
    n_stoch_ = G.rows();
    n_phy_ = A->rows();
  } else if (G.rows() != n_stoch_ || A->rows() != n_phy_) {
    throw std::invalid_argument("KronSumOperator: inconsistent factor sizes");
  }

  // Column-compressed copy of G drives the apply loop.
  Csc csc;
  const std::size_t n = G.rows();
  csc.col_ptr.assign(n + 1, 0);
  for (int c : G.col_idx()) ++csc.col_ptr[c + 1];
  for (std::size_t c = 0; c < n; ++c) csc.col_ptr[c + 1] += csc.col_ptr[c];
  csc.row_idx.resize(G.nnz());
  csc.vals.resize(G.nnz());
  std::vector<int> fill(csc.col_ptr.begin(), csc.col_ptr.end() - 1);
  for (std::size_t r = 0; r < n; ++r)
    for (int k = G.row_ptr()[r]; k < G.row_ptr()[r + 1]; ++k) {
      const int c = G.col_idx()[k];
      csc.row_idx[fill[c]] = static_cast<int>(r);
      csc.vals[fill[c]] = G.values()[k];
      ++fill[c];
    }

  G_.push_back(std::move(G));
  G_csc_.push_back(std::move(csc));
  A_.push_back(std::move(A));
}

void KronSumOperator::apply(std::span<const double> x,
                            std::span<double> y) const {
  if (x.size() != dim() || y.size() != dim())
    throw std::invalid_argument("KronSumOperator: dimension mismatch");
  std::fill(y.begin(), y.end(), 0.0);
  std::vector<double> w(n_phy_);
  for (std::size_t i = 0; i < G_.size(); ++i) {
    const Csc& g = G_csc_[i];
    const SparseMatrix& A = *A_[i];
    for (std::size_t k = 0; k < n_stoch_; ++k) {
      const int begin = g.col_ptr[k], end = g.col_ptr[k + 1];
      if (begin == end) continue;
      csr_matvec(A, x.subspan(k * n_phy_, n_phy_), w);
      for (int q = begin; q < end; ++q)
        kern::axpy(g.vals[q], w.data(), y.data() + g.row_idx[q] * n_phy_, n_phy_);
    }
  }
}

void MeanBlockPrecond::apply(std::span<const double> x,
                             std::span<double> y) const {
  if (x.size() != dim() || y.size() != dim())
    throw std::invalid_argument("MeanBlockPrecond: dimension mismatch");
  const std::size_t np = factor_->dim();
  for (std::size_t j = 0; j < n_stoch_; ++j)
    factor_->solve(x.subspan(j * np, np), y.subspan(j * np, np));
}

}  // namespace aasg
