#pragma once

#include <array>
#include <functional>
#include <vector>

#include "aasg/sparsela.hpp"

// Bilinear (Q1) finite elements on the uniform unit-square grid with
// homogeneous Dirichlet boundary. Interior nodes are numbered row-major:
// node (r,c) -> r*(n-1)+c for r,c in 0..n-2, at coordinates
// ((c+1)*h, (r+1)*h). Full-grid (boundary included) numbering is row-major
// over (n+1)^2 nodes the same way.

namespace aasg {

using GridFunction = std::vector<double>;  // values at interior nodes

struct Grid2d {
  int n;     // cells per axis, n >= 2
  double h;  // 1/n

  explicit Grid2d(int cells);

  std::size_t interior_count() const;              // (n-1)^2
  std::size_t full_count() const;                  // (n+1)^2
  std::array<double, 2> interior_coord(std::size_t s) const;
  std::array<double, 2> full_coord(std::size_t s) const;
};

// Stiffness matrix for -div(a grad u) with the coefficient given at all
// (n+1)^2 grid nodes; per element the coefficient is the average of its four
// corner values. Result is symmetric (n-1)^2 square, Dirichlet rows/columns
// eliminated.
SparseMatrix assemble_stiffness(const Grid2d& grid,
                                const std::vector<double>& coeff_full);

// Consistent load vector <f, v_s> with 2x2 Gauss quadrature per element.
std::vector<double> assemble_load(const Grid2d& grid,
                                  const std::function<double(double, double)>& f);

// Lumped-mass discrete L2 norm sqrt(h^2 sum v^2).
double l2_norm(const Grid2d& grid, const GridFunction& v);

}  // namespace aasg
