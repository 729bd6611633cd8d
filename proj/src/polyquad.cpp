#include "aasg/polyquad.hpp"

#include <cmath>
#include <stdexcept>

namespace aasg {

namespace {

void check_point(double xi) {
  if (!(std::fabs(xi) <= 1.0))
    throw std::domain_error("legendre_eval: xi outside [-1,1]");
}

}  // namespace

double recurrence_beta(int n) {
  if (n < 1) throw std::domain_error("recurrence_beta: n must be >= 1");
  const double nn = static_cast<double>(n);
  return nn / std::sqrt(4.0 * nn * nn - 1.0);
}

std::vector<double> legendre_eval_all(int nmax, double xi) {
  if (nmax < 0) throw std::domain_error("legendre_eval_all: negative degree");
  check_point(xi);
  // Normalized three-term recurrence; stable for all degrees of interest.
  std::vector<double> phi(static_cast<std::size_t>(nmax) + 1);
  phi[0] = 1.0;
  if (nmax == 0) return phi;
  phi[1] = xi / recurrence_beta(1);
  for (int k = 1; k < nmax; ++k)
    phi[k + 1] = (xi * phi[k] - recurrence_beta(k) * phi[k - 1]) / recurrence_beta(k + 1);
  return phi;
}

double legendre_eval(int n, double xi) {
  return legendre_eval_all(n, xi)[static_cast<std::size_t>(n)];
}

QuadRule gauss_legendre(int m) {
  if (m < 1) throw std::domain_error("gauss_legendre: m must be >= 1");
  QuadRule rule;
  rule.nodes.resize(m);
  rule.weights.resize(m);

  // Classical (unnormalized) Legendre recurrence for P_m and P'_m.
  auto legendre_pair = [m](double x) {
    double p0 = 1.0, p1 = x;
    if (m == 1) return std::pair<double, double>{x, 1.0};
    for (int k = 1; k < m; ++k) {
      const double p2 = ((2.0 * k + 1.0) * x * p1 - k * p0) / (k + 1.0);
      p0 = p1;
      p1 = p2;
    }
    const double dp = m * (x * p1 - p0) / (x * x - 1.0);
    return std::pair<double, double>{p1, dp};
  };

  const int half = (m + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Chebyshev guess for the i-th root (descending order).
    double x = std::cos(M_PI * (i + 0.75) / (m + 0.5));
    for (int it = 0; it < 100; ++it) {
      auto [p, dp] = legendre_pair(x);
      const double dx = p / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-15) break;
    }
    auto [p, dp] = legendre_pair(x);
    (void)p;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[m - 1 - i] = x;
    rule.nodes[i] = -x;
    rule.weights[m - 1 - i] = 0.5 * w;
    rule.weights[i] = 0.5 * w;
  }
  if (m % 2 == 1) rule.nodes[m / 2] = 0.0;  // center node exactly zero
  return rule;
}

double inner_product_oracle(const std::function<double(double)>& f,
                            const std::function<double(double)>& g, int m) {
  const QuadRule rule = gauss_legendre(m);
  double s = 0.0;
  for (int q = 0; q < m; ++q) s += rule.weights[q] * f(rule.nodes[q]) * g(rule.nodes[q]);
  return s;
}

}  // namespace aasg
