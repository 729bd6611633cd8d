#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "aasg/kernels.hpp"
#include "aasg/sparsela.hpp"

namespace aasg {

namespace {

double nrm2(std::span<const double> v) {
  return std::sqrt(kern::dot(v.data(), v.data(), v.size()));
}

void apply_precond(const LinOp* M, std::span<const double> r,
                   std::span<double> z) {
  if (M)
    M->apply(r, z);
  else
    std::copy(r.begin(), r.end(), z.begin());
}

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
  }
};

}  // namespace

SolveReport cg(const LinOp& op, const LinOp* precond, std::span<const double> b,
               std::vector<double>& x, double tol, int maxit) {
  const std::size_t n = op.dim();
  if (b.size() != n) throw std::invalid_argument("cg: rhs dimension mismatch");
  x.resize(n, 0.0);

  Timer timer;
  SolveReport rep;

  const double bnorm = nrm2(b);
  if (bnorm == 0.0) {
    std::fill(x.begin(), x.end(), 0.0);
    rep.converged = true;
    rep.seconds = timer.seconds();
    return rep;
  }

  std::vector<double> r(n), z(n), p(n), q(n);
  op.apply(x, r);
  for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - r[i];

  rep.relative_residual = nrm2(r) / bnorm;
  if (rep.relative_residual <= tol) {
    rep.converged = true;
    rep.seconds = timer.seconds();
    return rep;
  }

  apply_precond(precond, r, z);
  p = z;
  double rho = kern::dot(r.data(), z.data(), n);

  for (int it = 1; it <= maxit; ++it) {
    op.apply(p, q);
    const double pq = kern::dot(p.data(), q.data(), n);
    const double alpha = rho / pq;
    if (!std::isfinite(alpha)) throw SolverBreakdown("cg: non-finite step", it);
    kern::axpy(alpha, p.data(), x.data(), n);
    kern::axpy(-alpha, q.data(), r.data(), n);

    rep.iterations = it;
    rep.relative_residual = nrm2(r) / bnorm;
    if (!std::isfinite(rep.relative_residual))
      throw SolverBreakdown("cg: non-finite residual", it);
    if (rep.relative_residual <= tol) {
      rep.converged = true;
      break;
    }

    apply_precond(precond, r, z);
    const double rho_next = kern::dot(r.data(), z.data(), n);
    kern::xpby(z.data(), rho_next / rho, p.data(), n);
    rho = rho_next;
  }
  rep.seconds = timer.seconds();
  return rep;
}

SolveReport bicgstab(const LinOp& op, const LinOp* precond,
                     std::span<const double> b, std::vector<double>& x,
                     double tol, int maxit) {
  const std::size_t n = op.dim();
  if (b.size() != n) throw std::invalid_argument("bicgstab: rhs dimension mismatch");
  x.resize(n, 0.0);

  Timer timer;
  SolveReport rep;

  const double bnorm = nrm2(b);
  if (bnorm == 0.0) {
    std::fill(x.begin(), x.end(), 0.0);
    rep.converged = true;
    rep.seconds = timer.seconds();
    return rep;
  }

  std::vector<double> r(n), rhat(n), p(n), v(n), s(n), t(n), phat(n), shat(n);
  const double breakdown_eps = 1e-300;

  op.apply(x, r);
  for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - r[i];
  rep.relative_residual = nrm2(r) / bnorm;
  if (rep.relative_residual <= tol) {
    rep.converged = true;
    rep.seconds = timer.seconds();
    return rep;
  }

  int restarts_left = 1;  // one retry with a fresh shadow residual
  rhat = r;
  double rho = 1.0, alpha = 1.0, omega = 1.0;
  std::fill(p.begin(), p.end(), 0.0);
  std::fill(v.begin(), v.end(), 0.0);

  auto restart_or_throw = [&](const char* why, int it) {
    if (restarts_left-- == 0) throw SolverBreakdown(why, it);
    rhat = r;
    rho = alpha = omega = 1.0;
    std::fill(p.begin(), p.end(), 0.0);
    std::fill(v.begin(), v.end(), 0.0);
  };

  for (int it = 1; it <= maxit; ++it) {
    rep.iterations = it;
    const double rho_next = kern::dot(rhat.data(), r.data(), n);
    if (std::fabs(rho_next) < breakdown_eps || !std::isfinite(rho_next)) {
      restart_or_throw("bicgstab: rho breakdown", it);
      continue;
    }
    const double beta = (rho_next / rho) * (alpha / omega);
    // p = r + beta (p - omega v)
    kern::axpy(-omega, v.data(), p.data(), n);
    kern::xpby(r.data(), beta, p.data(), n);

    apply_precond(precond, p, phat);
    op.apply(phat, v);
    const double rv = kern::dot(rhat.data(), v.data(), n);
    if (std::fabs(rv) < breakdown_eps || !std::isfinite(rv)) {
      restart_or_throw("bicgstab: alpha breakdown", it);
      continue;
    }
    alpha = rho_next / rv;
    s = r;
    kern::axpy(-alpha, v.data(), s.data(), n);

    const double snorm = nrm2(s) / bnorm;
    if (snorm <= tol) {
      // b - Op(x + alpha*phat) = s, so the half step already converged
      kern::axpy(alpha, phat.data(), x.data(), n);
      r = s;
      rep.relative_residual = snorm;
      rep.converged = true;
      break;
    }

    apply_precond(precond, s, shat);
    op.apply(shat, t);
    const double tt = kern::dot(t.data(), t.data(), n);
    omega = kern::dot(t.data(), s.data(), n) / tt;
    if (std::fabs(omega) < breakdown_eps || !std::isfinite(omega)) {
      restart_or_throw("bicgstab: omega breakdown", it);
      continue;
    }

    kern::axpy(alpha, phat.data(), x.data(), n);
    kern::axpy(omega, shat.data(), x.data(), n);
    r = s;
    kern::axpy(-omega, t.data(), r.data(), n);

    rep.relative_residual = nrm2(r) / bnorm;
    if (!std::isfinite(rep.relative_residual))
      throw SolverBreakdown("bicgstab: non-finite residual", it);
    if (rep.relative_residual <= tol) {
      rep.converged = true;
      break;
    }
    rho = rho_next;
  }
  rep.seconds = timer.seconds();
  return rep;
}

}  // namespace aasg
