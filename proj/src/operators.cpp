#include "nchodge/operators.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>

namespace nchodge {

GradedOperator build_d(const SystemModel& model, const GradedSpace& space) {
  if (model.n != space.n() || model.N0 != space.N0)
    throw std::invalid_argument("build_d: model/space mismatch");
  Mat id0 = Mat::Identity(model.N0, model.N0);
  Mat d = Mat::Zero(space.total_dim(), space.total_dim());
  for (int j = 1; j <= model.n; ++j)
    d += kron(build_T(space.ext, j), model.der[j - 1]);
  if (!model.lie.is_abelian())
    d += kron(build_bracket_term(space.ext, model.lie), id0);
  return {std::move(d), DegreeShift::plus_one, false, "d"};
}

GradedOperator build_d_adjoint(const GradedOperator& d) {
  return {d.mat.adjoint(), DegreeShift::minus_one, false, d.provenance + "^H"};
}

double d_adjoint_crosscheck(const SystemModel& model, const GradedSpace& space,
                            const Mat& d_adj) {
  Mat id0 = Mat::Identity(model.N0, model.N0);
  Mat alt = Mat::Zero(space.total_dim(), space.total_dim());
  for (int j = 1; j <= model.n; ++j)
    alt += kron(build_T_adjoint(space.ext, j), model.der[j - 1].adjoint());
  if (!model.lie.is_abelian())
    alt += kron(Mat(build_bracket_term(space.ext, model.lie).adjoint()), id0);
  return max_abs(Mat(alt - d_adj));
}

GradedOperator build_K(const SystemModel& model, const GradedSpace& space,
                       const Vec& h, double u) {
  const int n = space.n();
  // one right-multiplication weight per degree, repeated over multi-indices
  std::vector<Mat> w(n + 1);
  for (int k = 0; k <= n; ++k)
    w[k] = model.right_mult(exp_element(model, h, (n / 2.0 - k) * u));
  Mat K = Mat::Zero(space.total_dim(), space.total_dim());
  for (int p = 0; p < space.ext.dim(); ++p)
    K.block(p * space.N0, p * space.N0, space.N0, space.N0) = w[space.ext.degree(p)];
  char label[64];
  std::snprintf(label, sizeof label, "K[u=%g]", u);
  return {std::move(K), DegreeShift::zero, true, label};
}

GradedOperator build_D(const SystemModel& model, const GradedSpace& space,
                       const Vec& h, double u) {
  GradedOperator d = build_d(model, space);
  if (h.isZero(0.0) || u == 0.0) {
    Mat D = d.mat + Mat(d.mat.adjoint());
    char label[64];
    std::snprintf(label, sizeof label, "D[u=%g,h=0]", u);
    return {std::move(D), DegreeShift::odd, true, label};
  }
  Mat Ku = build_K(model, space, h, u).mat;
  Mat Kmu = build_K(model, space, h, -u).mat;
  Mat du = Ku * d.mat * Kmu;
  Mat D = du + Mat(du.adjoint());  // (K_u d K_-u)^H = K_-u d^H K_u
  char label[64];
  std::snprintf(label, sizeof label, "D[u=%g]", u);
  return {std::move(D), DegreeShift::odd, true, label};
}

std::vector<Mat> build_laplacians(const GradedSpace& space, const Mat& D,
                                  double* off_degree_residual) {
  Mat D2 = D * D;
  const int n = space.n();
  std::vector<Mat> blocks(n + 1);
  for (int k = 0; k <= n; ++k)
    blocks[k] = D2.block(space.degree_offset(k), space.degree_offset(k),
                         space.degree_dim(k), space.degree_dim(k));
  if (off_degree_residual) {
    Mat leak = D2;
    for (int k = 0; k <= n; ++k)
      leak.block(space.degree_offset(k), space.degree_offset(k), space.degree_dim(k),
                 space.degree_dim(k)).setZero();
    *off_degree_residual = max_abs(leak) / std::max(1.0, max_abs(D2));
  }
  return blocks;
}

ConformalMaps build_conformal_maps(const SystemModel& model, const GradedSpace& space,
                                   const Vec& h, const Mat& d) {
  if (!model.exact)
    throw std::invalid_argument("build_conformal_maps: exact models only");
  const int n = space.n();
  ConformalMaps cm;
  // element routes: G from e^{(n/2-k)h}, U from e^{-(n/2-k)h/2}
  std::vector<Mat> gw(n + 1), uw(n + 1);
  for (int k = 0; k <= n; ++k) {
    gw[k] = model.right_mult(exp_element(model, h, n / 2.0 - k));
    uw[k] = model.right_mult(exp_element(model, h, -(n / 2.0 - k) / 2.0));
  }
  const int td = space.total_dim();
  cm.G = Mat::Zero(td, td);
  cm.U = Mat::Zero(td, td);
  for (int p = 0; p < space.ext.dim(); ++p) {
    int k = space.ext.degree(p);
    cm.G.block(p * space.N0, p * space.N0, space.N0, space.N0) = gw[k];
    cm.U.block(p * space.N0, p * space.N0, space.N0, space.N0) = uw[k];
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(cm.G, Eigen::EigenvaluesOnly);
  cm.gram_min_eigenvalue = es.eigenvalues().minCoeff();

  cm.d_phi_star = cm.G.ldlt().solve(Mat(d.adjoint() * cm.G));
  cm.unitarity_residual =
      operator_norm(Mat(cm.U.adjoint() * cm.G * cm.U - Mat::Identity(td, td)));

  Mat Dhalf = build_D(model, space, h, 0.5).mat;
  Mat pushed = cm.U.adjoint() * cm.G * (d + cm.d_phi_star) * cm.U;
  cm.conjugation_residual = operator_norm(Mat(pushed - Dhalf));
  return cm;
}

std::vector<Mat> BlockedComplex::laplacians() const {
  std::vector<Mat> out(n + 1);
  for (int k = 0; k <= n; ++k) {
    Mat acc = Mat::Zero(block_dims[k], block_dims[k]);
    if (k < n) acc += A[k].adjoint() * A[k];
    if (k > 0) acc += A[k - 1] * A[k - 1].adjoint();
    out[k] = std::move(acc);
  }
  return out;
}

BlockedComplex build_blocked_complex(const SystemModel& model, const GradedSpace& space,
                                     const Vec& h, double u) {
  const int n = space.n();
  const int N0 = space.N0;
  BlockedComplex bc;
  bc.n = n;
  bc.block_dims.resize(n + 1);
  for (int k = 0; k <= n; ++k) bc.block_dims[k] = space.degree_dim(k);

  const bool weighted = !(h.isZero(0.0) || u == 0.0);
  std::vector<Mat> wp(n + 1), wm(n + 1);
  if (weighted) {
    for (int k = 0; k <= n; ++k) {
      wp[k] = model.right_mult(exp_element(model, h, (n / 2.0 - k) * u));
      wm[k] = model.right_mult(exp_element(model, h, -(n / 2.0 - k) * u));
    }
  }

  Mat bracket = model.lie.is_abelian() ? Mat() : build_bracket_term(space.ext, model.lie);
  bc.A.resize(n);
  for (int k = 0; k < n; ++k) {
    const int roff = space.ext.degree_offset(k + 1), rcnt = space.ext.degree_count(k + 1);
    const int coff = space.ext.degree_offset(k), ccnt = space.ext.degree_count(k);
    Mat blk = Mat::Zero(rcnt * N0, ccnt * N0);
    for (int j = 1; j <= n; ++j) {
      Mat Tj = build_T(space.ext, j);
      for (int r = 0; r < rcnt; ++r)
        for (int c = 0; c < ccnt; ++c) {
          cd t = Tj(roff + r, coff + c);
          if (t != cd(0.0, 0.0))
            blk.block(r * N0, c * N0, N0, N0) += t * model.der[j - 1];
        }
    }
    if (bracket.size() != 0) {
      for (int r = 0; r < rcnt; ++r)
        for (int c = 0; c < ccnt; ++c) {
          cd t = bracket(roff + r, coff + c);
          if (t != cd(0.0, 0.0))
            blk.block(r * N0, c * N0, N0, N0) +=
                t * Mat::Identity(N0, N0);
        }
    }
    if (weighted) {
      Mat left = kron(Mat::Identity(rcnt, rcnt), wp[k + 1]);
      Mat right = kron(Mat::Identity(ccnt, ccnt), wm[k]);
      bc.A[k] = left * blk * right;
    } else {
      bc.A[k] = std::move(blk);
    }
  }
  return bc;
}

}  // namespace nchodge
