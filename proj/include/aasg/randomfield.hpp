#pragma once

#include <span>
#include <vector>

#include "aasg/fem.hpp"

// Truncated Karhunen-Loeve expansion of the separable exponential-covariance
// field on the unit square:
//
//   a(x,xi) = a0 + sigma * sum_m sqrt(lambda_m) c_m(x) xi_m,
//
// with Cov(x,y) = sigma^2 exp(-|x1-y1|/c - |x2-y2|/c). The 1-D factors on
// [0,1] have closed-form eigenpairs: recentering to [-1/2,1/2], even modes
// solve w tan(w/2) = 1/c and odd modes w + (1/c) tan(w/2) = 0, with
// eigenvalue 2c/(1 + c^2 w^2). 2-D eigenpairs are the axis products.

namespace aasg {

struct Kl1dMode {
  enum class Kind { even, odd };
  double omega = 0.0;   // transcendental frequency
  double lambda = 0.0;  // eigenvalue of the unit-variance 1-D kernel
  Kind kind = Kind::even;
  double norm = 0.0;  // L2(0,1) normalization constant

  double eval(double x) const;  // eigenfunction at x in [0,1]
};

// The n largest eigenpairs of exp(-|x-y|/c) on [0,1], bisection on the
// guaranteed brackets ((k-1)pi, k pi).
std::vector<Kl1dMode> kl_1d(double c, int n);

struct KlMode2d {
  double lambda = 0.0;  // sigma^2 * lambda_i * lambda_j
  int i = 0, j = 0;     // 1-based 1-D mode numbers for axes x1, x2
};

struct KlField {
  std::vector<double> a0;                  // mean, all (n+1)^2 grid nodes
  std::vector<std::vector<double>> modes;  // a_m = sqrt(lambda_m) c_m, all nodes
  double c = 0.0;
  double sigma = 0.0;
  std::vector<KlMode2d> spectrum;      // metadata aligned with modes
  std::vector<Kl1dMode> axis_modes;    // the 1-D pool behind the products

  int dimension() const { return static_cast<int>(modes.size()); }
};

// N largest 2-D modes sampled at the grid nodes. The 1-D pool starts at
// max(2N, 20) modes per axis and grows until the tail bound guarantees no
// unseen product can beat the retained ones. Ties break toward lower (i,j).
KlField kl_2d(double c, double sigma, int N, const Grid2d& grid,
              double mean_value = 1.0);

// a0(x) + sum a_m(x) xi_m at a full-grid node index.
double field_eval(const KlField& field, std::span<const double> xi,
                  std::size_t node);

// min over grid nodes of a0(x) - sum |a_m(x)|; nonpositive means the
// diffusion coefficient can lose positivity somewhere in [-1,1]^N.
double positivity_report(const KlField& field);

}  // namespace aasg
