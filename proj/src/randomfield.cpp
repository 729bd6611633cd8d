#include "aasg/randomfield.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace aasg {

namespace {

// Pole-free forms of the transcendental equations, bisected on
// ((k-1)pi, k pi). Sorted by frequency the modes alternate even, odd, ...
double even_eq(double w, double inv_c) {
  return w * std::sin(0.5 * w) - inv_c * std::cos(0.5 * w);
}

double odd_eq(double w, double inv_c) {
  return w * std::cos(0.5 * w) + inv_c * std::sin(0.5 * w);
}

double bisect(double lo, double hi, double inv_c, bool even) {
  auto f = [&](double w) { return even ? even_eq(w, inv_c) : odd_eq(w, inv_c); };
  double flo = f(lo);
  if (flo == 0.0) return lo;
  if (flo * f(hi) > 0.0)
    throw std::runtime_error("kl_1d: bisection bracket failure");
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if (flo * fm < 0.0) {
      hi = mid;
    } else {
      lo = mid;
      flo = fm;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double Kl1dMode::eval(double x) const {
  const double s = x - 0.5;
  return kind == Kind::even ? norm * std::cos(omega * s) : norm * std::sin(omega * s);
}

std::vector<Kl1dMode> kl_1d(double c, int n) {
  if (!(c > 0.0)) throw std::invalid_argument("kl_1d: correlation length must be > 0");
  if (n < 1) throw std::invalid_argument("kl_1d: need at least one mode");
  const double inv_c = 1.0 / c;

  std::vector<Kl1dMode> modes;
  modes.reserve(n);
  for (int m = 1; m <= n; ++m) {
    // Mode m has its frequency in ((m-1)pi, m pi); odd m are cosine modes.
    const bool even = (m % 2 == 1);
    const double lo = (m - 1) * M_PI + 1e-12;
    const double hi = m * M_PI - 1e-12;
    Kl1dMode mode;
    mode.kind = even ? Kl1dMode::Kind::even : Kl1dMode::Kind::odd;
    mode.omega = bisect(lo, hi, inv_c, even);
    mode.lambda = 2.0 * c / (1.0 + c * c * mode.omega * mode.omega);
    const double sw = std::sin(mode.omega) / (2.0 * mode.omega);
    mode.norm = even ? 1.0 / std::sqrt(0.5 + sw) : 1.0 / std::sqrt(0.5 - sw);
    modes.push_back(mode);
  }
  return modes;
}

KlField kl_2d(double c, double sigma, int N, const Grid2d& grid,
              double mean_value) {
  if (N < 1) throw std::invalid_argument("kl_2d: need at least one mode");

  struct Product {
    double lambda;
    int i, j;
  };

  int pool = std::max(2 * N, 20);
  std::vector<Kl1dMode> axis;
  std::vector<Product> best;
  for (;;) {
    axis = kl_1d(c, pool);
    std::vector<Product> prods;
    prods.reserve(static_cast<std::size_t>(pool) * pool);
    for (int i = 1; i <= pool; ++i)
      for (int j = 1; j <= pool; ++j)
        prods.push_back({axis[i - 1].lambda * axis[j - 1].lambda, i, j});
    std::sort(prods.begin(), prods.end(), [](const Product& a, const Product& b) {
      if (a.lambda != b.lambda) return a.lambda > b.lambda;
      if (a.i != b.i) return a.i < b.i;
      return a.j < b.j;
    });
    best.assign(prods.begin(), prods.begin() + N);
    // Any product outside the pool is bounded by lambda_1 * lambda_pool.
    const double tail_bound = axis.front().lambda * axis.back().lambda;
    if (tail_bound <= best.back().lambda) break;
    pool *= 2;
  }

  KlField field;
  field.c = c;
  field.sigma = sigma;
  field.axis_modes = std::move(axis);

  const std::size_t nfull = grid.full_count();
  field.a0.assign(nfull, mean_value);
  field.modes.reserve(N);
  field.spectrum.reserve(N);

  const std::size_t stride = static_cast<std::size_t>(grid.n + 1);
  for (const auto& prod : best) {
    KlMode2d meta;
    meta.lambda = sigma * sigma * prod.lambda;
    meta.i = prod.i;
    meta.j = prod.j;
    field.spectrum.push_back(meta);

    const Kl1dMode& mi = field.axis_modes[prod.i - 1];
    const Kl1dMode& mj = field.axis_modes[prod.j - 1];
    const double amp = std::sqrt(meta.lambda);

    std::vector<double> vals(nfull);
    std::vector<double> fx(stride), fy(stride);
    for (std::size_t k = 0; k < stride; ++k) {
      const double t = k * grid.h;
      fx[k] = mi.eval(t);
      fy[k] = mj.eval(t);
    }
    for (std::size_t gy = 0; gy < stride; ++gy)
      for (std::size_t gx = 0; gx < stride; ++gx)
        vals[gy * stride + gx] = amp * fx[gx] * fy[gy];
    field.modes.push_back(std::move(vals));
  }
  return field;
}

double field_eval(const KlField& field, std::span<const double> xi,
                  std::size_t node) {
  if (xi.size() != field.modes.size())
    throw std::invalid_argument("field_eval: dimension mismatch");
  double v = field.a0[node];
  for (std::size_t m = 0; m < xi.size(); ++m) v += field.modes[m][node] * xi[m];
  return v;
}

double positivity_report(const KlField& field) {
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < field.a0.size(); ++s) {
    double bound = field.a0[s];
    for (const auto& mode : field.modes) bound -= std::fabs(mode[s]);
    worst = std::min(worst, bound);
  }
  return worst;
}

}  // namespace aasg
