#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "nchodge/model.hpp"
#include "nchodge/operators.hpp"
#include "nchodge/triple.hpp"

using namespace nchodge;

namespace {

Eigen::MatrixXd theta2(double t) {
  Eigen::MatrixXd th(2, 2);
  th << 0.0, t, -t, 0.0;
  return th;
}

Vec mode_delta(const SystemModel& m, int k1, int k2) {
  Vec v = Vec::Zero(m.N0);
  v(m.mode_index({k1, k2})) = 1.0;
  return v;
}

}  // namespace

TEST_CASE("twist map degenerates to the identity") {
  SystemModel m = build_fuzzy_sphere(3);
  Vec h = build_conformal_element(m, "j3", 0.4);
  Vec a = random_hermitian_element(m, 9);
  CHECK(max_abs(Vec(beta_apply(m, h, 0.0, a) - a)) == 0.0);
  CHECK(max_abs(Vec(beta_apply(m, Vec::Zero(m.N0), 1.0, a) - a)) == 0.0);
}

TEST_CASE("twist map is a star-compatible automorphism on exact models") {
  SystemModel m = build_fuzzy_sphere(4);
  Vec h = build_conformal_element(m, "j3", 0.3);
  Vec a = random_hermitian_element(m, 17);
  Vec b = random_hermitian_element(m, 18);
  for (double u : {0.5, 1.0}) {
    TwistMapCheck tm = twist_map_check(m, h, u, a, b);
    INFO("u=", u);
    CHECK(tm.multiplicativity <= 1e-12);
    CHECK(tm.star_compatibility <= 1e-12);
    CHECK(tm.inverse_residual <= 1e-12);
  }
}

TEST_CASE("left commutator: closed form, unit, and h=0 norms") {
  SystemModel m = build_fuzzy_sphere(3);
  GradedSpace space(m.n, m.N0);
  Vec h = build_conformal_element(m, "j3", 0.3);
  Vec a = random_hermitian_element(m, 23);

  for (double u : {0.0, 0.5, 1.0}) {
    CommutatorCheck cc = left_commutator_check(m, space, h, u, a);
    INFO("u=", u);
    CHECK(cc.closed_form_residual <= 1e-9 * cc.commutator_norm + 1e-12);
    // the unit commutes with everything
    CommutatorCheck cu = left_commutator_check(m, space, h, u, m.unit);
    CHECK(cu.commutator_norm <= 1e-13);
  }

  // torus, h = 0: [D, L_{U^{(1,0)}}] = sum (T_j - T_j^H) (x) L_{der_1 U},
  // whose norm is ||2 pi i U|| * ||T_1 - T_1^H|| = 2 pi
  SystemModel t = build_nc_torus(theta2(0.6180339887498949), 2);
  GradedSpace tspace(t.n, t.N0);
  CommutatorCheck ct =
      left_commutator_check(t, tspace, Vec::Zero(t.N0), 0.0, mode_delta(t, 1, 0));
  CHECK(std::abs(ct.commutator_norm - 2.0 * M_PI) <= 1e-9);
  CHECK(ct.closed_form_residual <= 1e-12 * ct.commutator_norm);
}

TEST_CASE("twisted commutator: untwisted limit and scalar-shift invariance") {
  SystemModel m = build_fuzzy_sphere(3);
  GradedSpace space(m.n, m.N0);
  Vec a = random_hermitian_element(m, 31);

  // h = 0: the twist is trivial, so both norms coincide
  TwistedCommutatorCheck t0 =
      twisted_commutator_check(m, space, Vec::Zero(m.N0), 1.0, a, 1.0);
  CHECK(std::abs(t0.untwisted_norm - t0.twisted_norm) <= 1e-12);

  Vec h = build_conformal_element(m, "j3", 0.4);
  for (double u : {0.5, 1.0}) {
    TwistedCommutatorCheck tw = twisted_commutator_check(m, space, h, u, a, 1.0);
    INFO("u=", u);
    CHECK(tw.scalar_shift_residual <= 1e-12);
    CHECK(tw.twisted_norm > 0.0);
  }
}

TEST_CASE("staircase norms agree with the full-matrix route") {
  // exact model
  SystemModel m = build_fuzzy_sphere(3);
  GradedSpace space(m.n, m.N0);
  Vec h = build_conformal_element(m, "j3", 0.3);
  Vec a = random_hermitian_element(m, 41);
  TwistedCommutatorCheck full = twisted_commutator_check(m, space, h, 1.0, a, 1.0);
  StaircaseNorms st = staircase_commutator_norms(m, space, h, 1.0, a);
  CHECK(std::abs(full.untwisted_norm - st.untwisted) <=
        1e-9 * std::max(1.0, full.untwisted_norm));
  CHECK(std::abs(full.twisted_norm - st.twisted) <=
        1e-9 * std::max(1.0, full.twisted_norm));

  // truncated model: both routes apply the same window rules
  SystemModel t = build_nc_torus(theta2(0.6180339887498949), 2);
  GradedSpace tspace(t.n, t.N0);
  Vec th = build_conformal_element(t, "cos1", 0.3);
  Vec ta = mode_delta(t, 0, 1);
  TwistedCommutatorCheck tfull = twisted_commutator_check(t, tspace, th, 1.0, ta, 1.0);
  StaircaseNorms tst = staircase_commutator_norms(t, tspace, th, 1.0, ta);
  CHECK(std::abs(tfull.untwisted_norm - tst.untwisted) <=
        1e-9 * std::max(1.0, tfull.untwisted_norm));
  CHECK(std::abs(tfull.twisted_norm - tst.twisted) <=
        1e-9 * std::max(1.0, tfull.twisted_norm));
}

TEST_CASE("grading checks") {
  SystemModel m = build_fuzzy_sphere(2);
  GradedSpace space(m.n, m.N0);
  Vec h = build_conformal_element(m, "j3", 0.5);
  Mat D = build_D(m, space, h, 1.0).mat;
  Mat pi_a = kron(Mat::Identity(space.ext.dim(), space.ext.dim()),
                  m.left_mult(random_hermitian_element(m, 5)));
  GradingCheck gc = grading_check(space, D, pi_a);
  CHECK(gc.anticommute_residual <= 1e-13 * std::max(1.0, max_abs(D)));
  CHECK(gc.commute_residual <= 1e-14);
  CHECK(gc.involution_residual == 0.0);
}

TEST_CASE("perturbation scale shrinks linearly with the twist step") {
  SystemModel m = build_fuzzy_sphere(3);
  GradedSpace space(m.n, m.N0);
  Vec h = build_conformal_element(m, "j3", 0.3);
  double prev = 1e300;
  std::vector<double> scales;
  for (double v : {0.2, 0.1, 0.05, 0.025}) {
    double s = twist_perturbation_scale(m, space, h, 0.5, v);
    CHECK(s < prev);
    scales.push_back(s);
    prev = s;
  }
  // halving the step roughly halves the response
  CHECK(std::abs(scales[0] / scales[1] - 2.0) <= 0.3);
  CHECK(std::abs(scales[1] / scales[2] - 2.0) <= 0.3);
}
