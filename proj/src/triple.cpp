#include "nchodge/triple.hpp"

#include <algorithm>
#include <stdexcept>

#include "nchodge/exterior.hpp"
#include "nchodge/operators.hpp"

namespace nchodge {

Vec beta_apply(const SystemModel& model, const Vec& h, double u, const Vec& a) {
  if (u == 0.0 || h.isZero(0.0)) return a;
  Vec wp = exp_element(model, h, u);
  Vec wm = exp_element(model, h, -u);
  return model.mul(wp, model.mul(a, wm));
}

TwistMapCheck twist_map_check(const SystemModel& model, const Vec& h, double u,
                              const Vec& a, const Vec& b) {
  TwistMapCheck out;
  Vec ba = beta_apply(model, h, u, a);
  Vec bb = beta_apply(model, h, u, b);
  out.multiplicativity =
      max_abs(Vec(beta_apply(model, h, u, model.mul(a, b)) - model.mul(ba, bb)));
  out.star_compatibility = max_abs(Vec(beta_apply(model, h, u, model.star(a)) -
                                       model.star(beta_apply(model, h, -u, a))));
  out.inverse_residual = max_abs(Vec(beta_apply(model, h, -u, ba) - a));
  return out;
}

CommutatorCheck left_commutator_check(const SystemModel& model,
                                      const GradedSpace& space, const Vec& h,
                                      double u, const Vec& a) {
  Mat D = build_D(model, space, h, u).mat;
  Mat pi_a = kron(Mat::Identity(space.ext.dim(), space.ext.dim()), model.left_mult(a));
  Mat C = D * pi_a - pi_a * D;

  Mat Rw = model.right_mult(exp_element(model, h, -u));
  Mat closed = Mat::Zero(space.total_dim(), space.total_dim());
  for (int j = 1; j <= model.n; ++j) {
    Mat Tj = build_T(space.ext, j);
    Vec da = model.der[j - 1] * a;
    closed += kron(Mat(Tj - Tj.adjoint()), Mat(model.left_mult(da) * Rw));
  }

  CommutatorCheck out;
  out.closed_form_residual = max_abs(Mat(C - closed));
  out.commutator_norm = operator_norm(C);
  return out;
}

TwistedCommutatorCheck twisted_commutator_check(const SystemModel& model,
                                                const GradedSpace& space,
                                                const Vec& h, double u, const Vec& a,
                                                double scalar_shift) {
  Mat D = build_D(model, space, h, u).mat;
  Mat iext = Mat::Identity(space.ext.dim(), space.ext.dim());
  auto rho = [&](const Vec& x) { return kron(iext, model.right_mult(x)); };

  Mat rho_a = rho(a);
  Mat rho_ba = rho(beta_apply(model, h, u, a));
  Mat W = D * rho_a - rho_ba * D;

  TwistedCommutatorCheck out;
  out.untwisted_norm = operator_norm(Mat(D * rho_a - rho_a * D));
  out.twisted_norm = operator_norm(W);

  Vec shifted = a + scalar_shift * model.unit;
  Mat W2 = D * rho(shifted) - rho(beta_apply(model, h, u, shifted)) * D;
  out.scalar_shift_residual = max_abs(Mat(W2 - W));
  return out;
}

StaircaseNorms staircase_commutator_norms(const SystemModel& model,
                                          const GradedSpace& space, const Vec& h,
                                          double u, const Vec& a) {
  BlockedComplex bc = build_blocked_complex(model, space, h, u);
  const int n = bc.n;
  std::vector<int> evens, odds;
  for (int k = 0; k <= n; ++k) (k % 2 == 0 ? evens : odds).push_back(k);
  auto dims_sum = [&](const std::vector<int>& ks) {
    int s = 0;
    for (int k : ks) s += bc.block_dims[k];
    return s;
  };

  // rho restricted to a degree list: one R block per exterior position.
  auto rho_part = [&](const std::vector<int>& ks, const Mat& r0) {
    Mat r = Mat::Zero(dims_sum(ks), dims_sum(ks));
    int at = 0;
    for (int k : ks) {
      const int copies = bc.block_dims[k] / static_cast<int>(r0.rows());
      for (int c = 0; c < copies; ++c) {
        r.block(at, at, r0.rows(), r0.cols()) = r0;
        at += static_cast<int>(r0.rows());
      }
    }
    return r;
  };

  // Block of D_u with rows in `rows`, columns in `cols` (degree lists).
  auto d_part = [&](const std::vector<int>& rows, const std::vector<int>& cols) {
    Mat dp = Mat::Zero(dims_sum(rows), dims_sum(cols));
    int roff = 0;
    for (int r : rows) {
      int coff = 0;
      for (int c : cols) {
        if (c + 1 == r)
          dp.block(roff, coff, bc.block_dims[r], bc.block_dims[c]) = bc.A[c];
        else if (c == r + 1)
          dp.block(roff, coff, bc.block_dims[r], bc.block_dims[c]) = bc.A[r].adjoint();
        coff += bc.block_dims[c];
      }
      roff += bc.block_dims[r];
    }
    return dp;
  };

  Mat d_oe = d_part(odds, evens);
  Mat d_eo = d_part(evens, odds);
  Mat ra = model.right_mult(a);
  Mat rho_ee = rho_part(evens, ra);
  Mat rho_oo = rho_part(odds, ra);

  StaircaseNorms out;
  out.untwisted = std::max(operator_norm(Mat(d_oe * rho_ee - rho_oo * d_oe)),
                           operator_norm(Mat(d_eo * rho_oo - rho_ee * d_eo)));

  Mat rb = model.right_mult(beta_apply(model, h, u, a));
  Mat rhob_ee = rho_part(evens, rb);
  Mat rhob_oo = rho_part(odds, rb);
  out.twisted = std::max(operator_norm(Mat(d_oe * rho_ee - rhob_oo * d_oe)),
                         operator_norm(Mat(d_eo * rho_oo - rhob_ee * d_eo)));
  return out;
}

GradingCheck grading_check(const GradedSpace& space, const Mat& D, const Mat& pi_a) {
  Mat g = space_grading(space);
  GradingCheck out;
  out.anticommute_residual = max_abs(Mat(g * D + D * g));
  out.commute_residual = max_abs(Mat(g * pi_a - pi_a * g));
  out.involution_residual = max_abs(Mat(g * g - Mat::Identity(g.rows(), g.cols())));
  return out;
}

double twist_perturbation_scale(const SystemModel& model, const GradedSpace& space,
                                const Vec& h, double u, double v) {
  Mat d0 = build_D(model, space, h, u).mat;
  Mat d1 = build_D(model, space, h, u + v).mat;
  Mat shifted = d0 + cd(0.0, 1.0) * Mat::Identity(d0.rows(), d0.cols());
  Mat z = (d1 - d0) * shifted.inverse();
  return operator_norm(z);
}

}  // namespace nchodge
