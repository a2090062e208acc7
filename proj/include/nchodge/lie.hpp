// Real Lie algebra data: dimension n and structure constants c[k][i][j] with
// [x_i, x_j] = sum_k c[k][i][j] x_k. Constants are real; derivations
// representing the generators are anti-Hermitian matrices.
#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace nchodge {

struct LieAlgebra {
  int n = 0;
  std::vector<double> c;  // flat, index k*n*n + i*n + j

  double at(int k, int i, int j) const { return c[(k * n + i) * n + j]; }
  bool is_abelian() const;

  // max |c[k][i][j] + c[k][j][i]|
  double antisymmetry_residual() const;
  // max over (i,j,k,l) of |sum_m c[m][jk] c[l][im] + c[m][ki] c[l][jm] + c[m][ij] c[l][km]|
  double jacobi_residual() const;

  // Validating constructor: throws std::invalid_argument when antisymmetry is
  // violated or the Jacobi residual exceeds 1e-12.
  static LieAlgebra from_constants(int n, std::vector<double> c);

  // su(2) with c[k][i][j] = -epsilon_{ijk}; matches derivations ad(i J_j).
  static LieAlgebra su2();
  static LieAlgebra abelian(int n);
};

}  // namespace nchodge
