#pragma once

#include <functional>
#include <vector>

// Legendre polynomials orthonormal under the uniform density rho(xi) = 1/2 on
// [-1,1], their recurrence coefficients, and Gauss-Legendre quadrature with
// probabilist weights (standard weights divided by 2, so they sum to one).

namespace aasg {

struct QuadRule {
  std::vector<double> nodes;    // strictly increasing, in [-1,1]
  std::vector<double> weights;  // positive, sum to 1
};

// phi_n(xi) with <phi_i, phi_j> = delta_ij under the 1/2 weight; phi_0 = 1.
// Throws std::domain_error if |xi| > 1 or n < 0.
double legendre_eval(int n, double xi);

// Evaluates phi_0..phi_nmax at xi in one recurrence sweep.
std::vector<double> legendre_eval_all(int nmax, double xi);

// Off-diagonal coefficient in xi*phi_n = b_{n+1} phi_{n+1} + b_n phi_{n-1}:
// b_n = n / sqrt(4n^2 - 1). Throws std::domain_error for n < 1.
double recurrence_beta(int n);

// m-point Gauss-Legendre rule, probabilist normalization. Nodes from Newton
// iteration with Chebyshev starting guesses, converged to ~1e-15.
QuadRule gauss_legendre(int m);

// Gauss approximation of int_{-1}^{1} (1/2) f(xi) g(xi) dxi.
double inner_product_oracle(const std::function<double(double)>& f,
                            const std::function<double(double)>& g, int m);

}  // namespace aasg
