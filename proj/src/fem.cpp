#include "aasg/fem.hpp"

#include <cmath>
#include <stdexcept>

#include "aasg/kernels.hpp"

namespace aasg {

namespace {

// Q1 element stiffness for the unit coefficient; scale-free in 2-D.
// Local corner order: (0,0), (1,0), (1,1), (0,1).
constexpr double kElemStiff[4][4] = {
    {4.0 / 6.0, -1.0 / 6.0, -2.0 / 6.0, -1.0 / 6.0},
    {-1.0 / 6.0, 4.0 / 6.0, -1.0 / 6.0, -2.0 / 6.0},
    {-2.0 / 6.0, -1.0 / 6.0, 4.0 / 6.0, -1.0 / 6.0},
    {-1.0 / 6.0, -2.0 / 6.0, -1.0 / 6.0, 4.0 / 6.0}};

double shape(int local, double x, double y) {
  switch (local) {
    case 0: return (1.0 - x) * (1.0 - y);
    case 1: return x * (1.0 - y);
    case 2: return x * y;
    default: return (1.0 - x) * y;
  }
}

}  // namespace

Grid2d::Grid2d(int cells) : n(cells), h(1.0 / cells) {
  if (cells < 2) throw std::invalid_argument("Grid2d: need at least 2 cells per axis");
}

std::size_t Grid2d::interior_count() const {
  const std::size_t m = static_cast<std::size_t>(n - 1);
  return m * m;
}

std::size_t Grid2d::full_count() const {
  const std::size_t m = static_cast<std::size_t>(n + 1);
  return m * m;
}

std::array<double, 2> Grid2d::interior_coord(std::size_t s) const {
  const std::size_t m = static_cast<std::size_t>(n - 1);
  return {(s % m + 1) * h, (s / m + 1) * h};
}

std::array<double, 2> Grid2d::full_coord(std::size_t s) const {
  const std::size_t m = static_cast<std::size_t>(n + 1);
  return {(s % m) * h, (s / m) * h};
}

SparseMatrix assemble_stiffness(const Grid2d& grid,
                                const std::vector<double>& coeff_full) {
  if (coeff_full.size() != grid.full_count())
    throw std::invalid_argument(
        "assemble_stiffness: coefficient must be given on all grid nodes");
  const int n = grid.n;
  const std::size_t stride = static_cast<std::size_t>(n + 1);

  std::vector<std::size_t> ti, tj;
  std::vector<double> tv;
  ti.reserve(16u * n * n);
  tj.reserve(16u * n * n);
  tv.reserve(16u * n * n);

  for (int ey = 0; ey < n; ++ey) {
    for (int ex = 0; ex < n; ++ex) {
      const std::size_t g[4] = {ey * stride + ex, ey * stride + ex + 1,
                                (ey + 1) * stride + ex + 1, (ey + 1) * stride + ex};
      const double a_elem = 0.25 * (coeff_full[g[0]] + coeff_full[g[1]] +
                                    coeff_full[g[2]] + coeff_full[g[3]]);
      // Interior slot of each corner, or -1 on the boundary.
      std::ptrdiff_t slot[4];
      for (int lc = 0; lc < 4; ++lc) {
        const std::size_t gx = g[lc] % stride, gy = g[lc] / stride;
        slot[lc] = (gx >= 1 && gx <= static_cast<std::size_t>(n - 1) && gy >= 1 &&
                    gy <= static_cast<std::size_t>(n - 1))
                       ? static_cast<std::ptrdiff_t>((gy - 1) * (n - 1) + (gx - 1))
                       : -1;
      }
      for (int a = 0; a < 4; ++a) {
        if (slot[a] < 0) continue;
        for (int b = 0; b < 4; ++b) {
          if (slot[b] < 0) continue;
          ti.push_back(static_cast<std::size_t>(slot[a]));
          tj.push_back(static_cast<std::size_t>(slot[b]));
          tv.push_back(a_elem * kElemStiff[a][b]);
        }
      }
    }
  }
  const std::size_t ninter = grid.interior_count();
  return SparseMatrix::from_triplets(ninter, ninter, std::move(ti), std::move(tj),
                                     std::move(tv));
}

std::vector<double> assemble_load(const Grid2d& grid,
                                  const std::function<double(double, double)>& f) {
  const int n = grid.n;
  const double h = grid.h;
  std::vector<double> rhs(grid.interior_count(), 0.0);

  const double gp[2] = {0.5 - 0.5 / std::sqrt(3.0), 0.5 + 0.5 / std::sqrt(3.0)};
  const double wq = h * h / 4.0;

  for (int ey = 0; ey < n; ++ey) {
    for (int ex = 0; ex < n; ++ex) {
      for (int qy = 0; qy < 2; ++qy) {
        for (int qx = 0; qx < 2; ++qx) {
          const double fx = f((ex + gp[qx]) * h, (ey + gp[qy]) * h);
          for (int lc = 0; lc < 4; ++lc) {
            const int gx = ex + (lc == 1 || lc == 2 ? 1 : 0);
            const int gy = ey + (lc >= 2 ? 1 : 0);
            if (gx < 1 || gx > n - 1 || gy < 1 || gy > n - 1) continue;
            rhs[(gy - 1) * (n - 1) + (gx - 1)] +=
                wq * fx * shape(lc, gp[qx], gp[qy]);
          }
        }
      }
    }
  }
  return rhs;
}

double l2_norm(const Grid2d& grid, const GridFunction& v) {
  return grid.h * std::sqrt(kern::dot(v.data(), v.data(), v.size()));
}

}  // namespace aasg
