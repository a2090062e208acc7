#include "nchodge/lie.hpp"

#include <cmath>
#include <cstdio>

namespace nchodge {

bool LieAlgebra::is_abelian() const {
  for (double v : c)
    if (v != 0.0) return false;
  return true;
}

double LieAlgebra::antisymmetry_residual() const {
  double r = 0.0;
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) r = std::max(r, std::abs(at(k, i, j) + at(k, j, i)));
  return r;
}

double LieAlgebra::jacobi_residual() const {
  double r = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          double s = 0.0;
          for (int m = 0; m < n; ++m)
            s += at(m, j, k) * at(l, i, m) + at(m, k, i) * at(l, j, m) +
                 at(m, i, j) * at(l, k, m);
          r = std::max(r, std::abs(s));
        }
  return r;
}

LieAlgebra LieAlgebra::from_constants(int n, std::vector<double> c) {
  if (n < 1) throw std::invalid_argument("LieAlgebra: n must be >= 1");
  if (c.size() != static_cast<size_t>(n) * n * n)
    throw std::invalid_argument("LieAlgebra: expected n^3 structure constants");
  LieAlgebra g;
  g.n = n;
  g.c = std::move(c);
  double anti = g.antisymmetry_residual();
  if (anti > 0.0) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "LieAlgebra: antisymmetry violated, residual %.3e", anti);
    throw std::invalid_argument(buf);
  }
  double jac = g.jacobi_residual();
  if (jac > 1e-12) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "LieAlgebra: Jacobi identity violated, residual %.3e", jac);
    throw std::invalid_argument(buf);
  }
  return g;
}

LieAlgebra LieAlgebra::su2() {
  std::vector<double> c(27, 0.0);
  auto set = [&](int k, int i, int j, double v) { c[(k * 3 + i) * 3 + j] = v; };
  // c[k][i][j] = -epsilon_{ijk}
  set(2, 0, 1, -1.0); set(2, 1, 0, 1.0);
  set(0, 1, 2, -1.0); set(0, 2, 1, 1.0);
  set(1, 2, 0, -1.0); set(1, 0, 2, 1.0);
  return from_constants(3, std::move(c));
}

LieAlgebra LieAlgebra::abelian(int n) {
  return from_constants(n, std::vector<double>(static_cast<size_t>(n) * n * n, 0.0));
}

}  // namespace nchodge
